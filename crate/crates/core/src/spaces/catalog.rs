//! Catalog spaces. Truncation policy per space:
//!
//! * `ndagger`, and the copy of `N` inside `interval`: `0` and `1/k` for `k ≤ 1/ε`;
//!   every omitted `1/k` lies within `ε` of `0`.
//! * `sine`: the segment `{0} × [-1,1]` at spacing `ε/2`; the curve on `x ≥ ε/2` in
//!   columns of width `ε/2`, each sampled at its boundary and at heights spaced `ε`
//!   across its range; curve points with `x < ε/2` are within `ε` of the segment.
//!   The points `(1/k, 0)`, `k ≤ 1/ε`, are included exactly.
//! * `comb`: teeth `1/k` whose gap to the next tooth is at least `ε` are kept, then a
//!   greedy selection of the remaining teeth `ε/2` apart down to `x = ε/2`, plus the
//!   limit tooth at `x = 0`; every tip `(1/k, 1)`, `k ≤ 1/ε`, is included exactly.
//! * `earring`: circles `C_k` of radius `1/k ≥ ε/2`; smaller circles lie within `ε`
//!   of the origin.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::HashMap;
use serde::{Deserialize, Serialize};

use super::annotated::{AnnotatedSpace, AnrKind, ClopenStructure, SpaceSource};
use super::retraction::Retraction;
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::metric::{Metric, Net};
use crate::num::{self, PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", content = "parameters", rename_all = "kebab-case")]
pub enum SpaceSpec {
    Point,
    Finite {
        k: usize,
    },
    Interval,
    Circle,
    Disk,
    Ndagger,
    Sine,
    Comb,
    Earring,
    /// The closed disk of radius 1 centred at `(1, 0)`, with the earring net inside.
    EarringDisk,
}

impl SpaceSpec {
    pub const NAMES: [&'static str; 10] = [
        "point",
        "finite-K",
        "interval",
        "circle",
        "disk",
        "ndagger",
        "sine",
        "comb",
        "earring",
        "earring-disk",
    ];
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Point => f.write_str("point"),
            SpaceSpec::Finite { k } => write!(f, "finite-{k}"),
            SpaceSpec::Interval => f.write_str("interval"),
            SpaceSpec::Circle => f.write_str("circle"),
            SpaceSpec::Disk => f.write_str("disk"),
            SpaceSpec::Ndagger => f.write_str("ndagger"),
            SpaceSpec::Sine => f.write_str("sine"),
            SpaceSpec::Comb => f.write_str("comb"),
            SpaceSpec::Earring => f.write_str("earring"),
            SpaceSpec::EarringDisk => f.write_str("earring-disk"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "point" => SpaceSpec::Point,
            "interval" => SpaceSpec::Interval,
            "circle" => SpaceSpec::Circle,
            "disk" => SpaceSpec::Disk,
            "ndagger" => SpaceSpec::Ndagger,
            "sine" => SpaceSpec::Sine,
            "comb" => SpaceSpec::Comb,
            "earring" | "hawaii" => SpaceSpec::Earring,
            "earring-disk" => SpaceSpec::EarringDisk,
            other => match other.strip_prefix("finite-").map(str::parse::<usize>) {
                Some(Ok(k)) if k > 0 => SpaceSpec::Finite { k },
                _ => return Err(Error::UnknownName(other.to_string())),
            },
        })
    }
}

/// `0` and `1/k` for `1 ≤ k ≤ 1/ε`, ascending.
pub fn n_points(res: Resolution) -> Vec<f64> {
    let n = res.inverse();
    let mut v = Vec::with_capacity(n + 1);
    v.push(0.0);
    for k in (1..=n).rev() {
        v.push(1.0 / k as f64);
    }
    v
}

/// Planar point list with exact-duplicate removal that keeps first occurrences.
struct PointSet {
    coords: Vec<f64>,
    seen: HashMap<[u64; 2], usize>,
}

fn point_key(p: &[f64]) -> [u64; 2] {
    // normalise -0.0 so duplicates are caught
    [(p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits()]
}

impl PointSet {
    fn new() -> Self {
        PointSet {
            coords: Vec::new(),
            seen: HashMap::new(),
        }
    }

    fn push(&mut self, p: &[f64]) -> usize {
        let next = self.len();
        let coords = &mut self.coords;
        *self.seen.entry(point_key(p)).or_insert_with(|| {
            coords.extend([p[0] + 0.0, p[1] + 0.0]);
            next
        })
    }

    fn len(&self) -> usize {
        self.coords.len() / 2
    }

    fn index_of(&self, p: &[f64]) -> Option<usize> {
        self.seen.get(&point_key(p)).copied()
    }

    fn into_net(self, eps: f64) -> Result<Net> {
        Net::new(2, self.coords, eps, Metric::Euclidean)
    }
}

pub fn make_space(spec: SpaceSpec, res: Resolution) -> Result<AnnotatedSpace> {
    let eps = res.eps();
    let source = SpaceSource::Catalog {
        spec,
        resolution: res,
    };
    let name = spec.to_string();
    match spec {
        SpaceSpec::Point => {
            let net = Net::new(1, vec![0.0], eps, Metric::Euclidean)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0],
                vec!["point".into()],
                ClopenStructure::connected(1),
                Some(Retraction::Interval { lo: 0.0, hi: 0.0 }),
                Some(AnrKind::Interval),
                vec![("p".into(), 0)],
            )
        }
        SpaceSpec::Finite { k } => {
            if k == 0 {
                return Err(Error::InvalidArgument("finite space needs k ≥ 1".into()));
            }
            let net = Net::new(
                1,
                (0..k).map(|i| i as f64).collect(),
                eps,
                Metric::Euclidean,
            )?;
            let labels: Vec<u32> = (0..k as u32).collect();
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                labels.clone(),
                (0..k).map(|i| format!("{{{i}}}")).collect(),
                ClopenStructure {
                    atoms: labels,
                    tail: None,
                },
                None,
                None,
                (0..k).map(|i| (format!("{i}"), i)).collect(),
            )
        }
        SpaceSpec::Interval => {
            let mut xs: Vec<f64> = (0..=res.inverse()).map(|i| i as f64 * eps).collect();
            xs.extend(n_points(res));
            xs.sort_by(|a, b| a.total_cmp(b));
            xs.dedup();
            let n = xs.len();
            let net = Net::new(1, xs, eps, Metric::Euclidean)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0; n],
                vec!["[0,1]".into()],
                ClopenStructure::connected(n),
                Some(Retraction::Interval { lo: 0.0, hi: 1.0 }),
                Some(AnrKind::Interval),
                vec![("0".into(), 0), ("1".into(), n - 1)],
            )
        }
        SpaceSpec::Circle => {
            let mut ps = PointSet::new();
            for p in circle_points(&[0.0, 0.0], 1.0, eps, 0.0) {
                ps.push(&p);
            }
            let n = ps.len();
            let net = ps.into_net(eps)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0; n],
                vec!["S1".into()],
                ClopenStructure::connected(n),
                Some(Retraction::Radial {
                    center: vec![0.0, 0.0],
                    radius: 1.0,
                    inner: 0.5,
                    outer: 1.5,
                }),
                Some(AnrKind::Circle),
                vec![("p".into(), 0)],
            )
        }
        SpaceSpec::Disk => {
            let mut ps = PointSet::new();
            let center = ps_disk(&mut ps, &[0.0, 0.0], 1.0, eps);
            let n = ps.len();
            let net = ps.into_net(eps)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0; n],
                vec!["D2".into()],
                ClopenStructure::connected(n),
                Some(Retraction::Ball {
                    center: vec![0.0, 0.0],
                    radius: 1.0,
                }),
                Some(AnrKind::Disk),
                vec![("p".into(), center)],
            )
        }
        SpaceSpec::Ndagger => {
            let xs = n_points(res);
            let n = xs.len();
            let net = Net::new(1, xs, eps, Metric::Euclidean)?;
            let labels: Vec<u32> = (0..n as u32).collect();
            let names = (0..n)
                .map(|i| {
                    if i == 0 {
                        "{∞}".to_string()
                    } else {
                        format!("{{{}}}", n - i)
                    }
                })
                .collect();
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                labels.clone(),
                names,
                ClopenStructure {
                    atoms: labels,
                    tail: Some(0),
                },
                None,
                None,
                vec![("inf".into(), 0)],
            )
        }
        SpaceSpec::Sine => build_sine(res, source),
        SpaceSpec::Comb => build_comb(res, source),
        SpaceSpec::Earring => {
            let mut ps = PointSet::new();
            push_earring(&mut ps, res);
            let n = ps.len();
            let net = ps.into_net(eps)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0; n],
                vec!["earring".into()],
                ClopenStructure::connected(n),
                None,
                None,
                vec![("origin".into(), 0)],
            )
        }
        SpaceSpec::EarringDisk => {
            let mut ps = PointSet::new();
            push_earring(&mut ps, res);
            let center = ps_disk(&mut ps, &[1.0, 0.0], 1.0, eps);
            let n = ps.len();
            let net = ps.into_net(eps)?;
            AnnotatedSpace::from_parts(
                name,
                source,
                net,
                vec![0; n],
                vec!["disk".into()],
                ClopenStructure::connected(n),
                Some(Retraction::Ball {
                    center: vec![1.0, 0.0],
                    radius: 1.0,
                }),
                Some(AnrKind::Disk),
                vec![("origin".into(), 0), ("center".into(), center)],
            )
        }
    }
}

/// Points on the circle of radius `r` about `c`, chord ≤ `max_chord`, starting at
/// angle `start` and proceeding counterclockwise. Quarter-turn points are exact.
fn circle_points(c: &[f64], r: f64, max_chord: f64, start: f64) -> Vec<[f64; 2]> {
    let need = num::ceil(TAU * r / max_chord).max(8.0) as usize;
    let m = need.next_power_of_two();
    // `start` is a multiple of π/2 at every call site
    let base = num::round(start / (PI / 2.0)) as usize;
    (0..m)
        .map(|i| {
            let (dx, dy) = if (i * 4) % m == 0 {
                match (i * 4 / m + base) % 4 {
                    0 => (r, 0.0),
                    1 => (0.0, r),
                    2 => (-r, 0.0),
                    _ => (0.0, -r),
                }
            } else {
                let a = start + TAU * i as f64 / m as f64;
                (r * num::cos(a), r * num::sin(a))
            };
            [c[0] + dx, c[1] + dy]
        })
        .collect()
}

/// Grid points of spacing `ε` inside the disk plus a fine boundary circle.
/// Returns the index of the centre.
fn ps_disk(ps: &mut PointSet, c: &[f64], r: f64, eps: f64) -> usize {
    let steps = num::ceil(r / eps) as i64;
    let center = ps.push(c);
    for i in -steps..=steps {
        for j in -steps..=steps {
            let (dx, dy) = (i as f64 * eps, j as f64 * eps);
            if dx * dx + dy * dy <= r * r {
                ps.push(&[c[0] + dx, c[1] + dy]);
            }
        }
    }
    for p in circle_points(c, r, eps / 4.0, 0.0) {
        ps.push(&p);
    }
    center
}

fn push_earring(ps: &mut PointSet, res: Resolution) {
    let eps = res.eps();
    ps.push(&[0.0, 0.0]);
    let kmax = 2 * res.inverse();
    for k in 1..=kmax {
        let r = 1.0 / k as f64;
        for p in circle_points(&[r, 0.0], r, eps, PI) {
            ps.push(&p);
        }
    }
}

/// Index `k` of the earring circle through `p`, or `None` for the origin.
pub fn earring_circle(p: &[f64]) -> Option<usize> {
    let n2 = p[0] * p[0] + p[1] * p[1];
    if n2 == 0.0 {
        return None;
    }
    let k = num::round(2.0 * p[0] / n2);
    (k >= 1.0).then_some(k as usize)
}

/// Net indices of `C_k` in counterclockwise order starting at the origin.
pub fn earring_circle_loop(space: &AnnotatedSpace, k: usize) -> Result<Vec<usize>> {
    let net = space.net();
    let origin = net
        .find_exact(&[0.0, 0.0])
        .ok_or_else(|| Error::InvalidArgument("space has no origin point".into()))?;
    let c = 1.0 / k as f64;
    let mut members: Vec<(f64, usize)> = (0..net.len())
        .filter(|&i| i != origin && super::retraction::on_earring_circle(net.point(i), k))
        .filter(|&i| earring_circle(net.point(i)) == Some(k))
        .map(|i| {
            let p = net.point(i);
            // angle measured from the origin direction, in (0, 2π)
            let a = num::atan2(p[1], p[0] - c) - PI;
            let a = if a <= 0.0 { a + TAU } else { a };
            (a, i)
        })
        .collect();
    if members.is_empty() {
        return Err(Error::BeyondTruncation {
            index: k,
            bound: earring_kmax(net.resolution()),
        });
    }
    members.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![origin];
    out.extend(members.into_iter().map(|(_, i)| i));
    Ok(out)
}

pub(crate) fn earring_kmax(eps: f64) -> usize {
    num::floor(2.0 / eps) as usize
}

/// Number of earring circles kept at the space's resolution.
pub(crate) fn earring_circle_count(space: &AnnotatedSpace) -> usize {
    earring_kmax(space.eps())
}

pub(crate) fn sine_y(x: f64) -> f64 {
    let u = 1.0 / x;
    if u == num::round(u) {
        0.0
    } else {
        num::sin(PI / x)
    }
}

/// Range of `sin` over `[lo, hi]`.
fn sin_range(lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = (num::sin(lo), num::sin(hi));
    let mut mn = a.min(b);
    let mut mx = a.max(b);
    let contains = |phase: f64| {
        let k = num::ceil((lo - phase) / TAU);
        phase + TAU * k <= hi
    };
    if contains(PI / 2.0) {
        mx = 1.0;
    }
    if contains(3.0 * PI / 2.0) {
        mn = -1.0;
    }
    (mn, mx)
}

/// Some `x ∈ [a, b]` with `sin(π/x) = y`.
fn sine_x_at(a: f64, b: f64, y: f64) -> f64 {
    let (ulo, uhi) = (PI / b, PI / a);
    let alpha = num::asin(y.clamp(-1.0, 1.0));
    let mut best: Option<f64> = None;
    for base in [alpha, PI - alpha] {
        let k = num::ceil((ulo - base) / TAU);
        for cand in [base + TAU * (k - 1.0), base + TAU * k] {
            let slack = 1e-9 * uhi.max(1.0);
            if cand >= ulo - slack && cand <= uhi + slack {
                best = Some(best.map_or(cand, |b: f64| b.min(cand)));
            }
        }
    }
    let u = best
        .unwrap_or_else(|| {
            if num::abs(num::sin(ulo) - y) < num::abs(num::sin(uhi) - y) {
                ulo
            } else {
                uhi
            }
        })
        .clamp(ulo, uhi);
    (PI / u).clamp(a, b)
}

fn build_sine(res: Resolution, source: SpaceSource) -> Result<AnnotatedSpace> {
    let eps = res.eps();
    let half = eps / 2.0;
    let mut ps = PointSet::new();
    let segment_steps = 4 * res.inverse();
    for i in 0..=segment_steps {
        ps.push(&[0.0, -1.0 + i as f64 * half]);
    }
    for k in 1..=res.inverse() {
        ps.push(&[1.0 / k as f64, 0.0]);
    }
    let columns = 2 * res.inverse() - 1;
    for c in 0..columns {
        let a = half * (c + 1) as f64;
        let b = a + half;
        ps.push(&[a, sine_y(a)]);
        let (ymin, ymax) = sin_range(PI / b, PI / a);
        let span = ymax - ymin;
        let steps = num::ceil(span / eps) as usize;
        for s in 0..=steps {
            let y = if s == steps {
                ymax
            } else {
                ymin + span * s as f64 / steps.max(1) as f64
            };
            let x = sine_x_at(a, b, y);
            // column ends are pushed exactly on their own
            if num::abs(x - a) > 1e-12 && num::abs(x - b) > 1e-12 {
                ps.push(&[x, y]);
            }
        }
    }
    ps.push(&[1.0, 0.0]);
    let origin = ps
        .index_of(&[0.0, 0.0])
        .expect("segment contains the origin");
    let n = ps.len();
    let net = ps.into_net(eps)?;
    let labels: Vec<u32> = net
        .points()
        .map(|p| if p[0] == 0.0 { 0 } else { 1 })
        .collect();
    AnnotatedSpace::from_parts(
        "sine",
        source,
        net,
        labels,
        vec!["segment".into(), "curve".into()],
        ClopenStructure::connected(n),
        None,
        None,
        vec![("origin".into(), origin)],
    )
}

fn build_comb(res: Resolution, source: SpaceSource) -> Result<AnnotatedSpace> {
    let eps = res.eps();
    let half = eps / 2.0;
    let inv = res.inverse();
    let mut teeth: Vec<f64> = Vec::new();
    let mut k = 1usize;
    while 1.0 / k as f64 - 1.0 / (k + 1) as f64 >= eps {
        teeth.push(1.0 / k as f64);
        k += 1;
    }
    let mut last = 1.0 / (k - 1) as f64;
    while 1.0 / k as f64 >= half {
        let next = 1.0 / (k + 1) as f64;
        if last - next > half {
            last = 1.0 / k as f64;
            teeth.push(last);
        }
        k += 1;
    }
    teeth.push(0.0);
    let mut ps = PointSet::new();
    ps.push(&[0.0, 0.0]);
    for i in 0..=2 * inv {
        ps.push(&[i as f64 * half, 0.0]);
    }
    for &x in &teeth {
        for j in 0..=inv {
            ps.push(&[x, j as f64 * eps]);
        }
    }
    for k in 1..=inv {
        ps.push(&[1.0 / k as f64, 1.0]);
    }
    let corner = ps.index_of(&[0.0, 1.0]).expect("limit tooth tip");
    let n = ps.len();
    let net = ps.into_net(eps)?;
    AnnotatedSpace::from_parts(
        "comb",
        source,
        net,
        vec![0; n],
        vec!["comb".into()],
        ClopenStructure::connected(n),
        None,
        None,
        vec![("origin".into(), 0), ("corner".into(), corner)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(k: u32) -> Resolution {
        Resolution::new(k).unwrap()
    }

    #[test]
    fn ndagger_contains_exact_reciprocals() {
        let s = make_space(SpaceSpec::Ndagger, res(6)).unwrap();
        for n in 1..=8 {
            assert!(s.net().find_exact(&[1.0 / n as f64]).is_some());
        }
        assert!(s.net().find_exact(&[0.0]).is_some());
        assert_eq!(s.component_count(), s.len());
        assert_eq!(s.clopen().tail, Some(0));
    }

    #[test]
    fn interval_is_one_component() {
        let s = make_space(SpaceSpec::Interval, res(5)).unwrap();
        assert_eq!(s.component_count(), 1);
        s.check_invariants().unwrap();
    }

    #[test]
    fn sine_has_segment_and_curve() {
        let s = make_space(SpaceSpec::Sine, res(8)).unwrap();
        assert_eq!(s.component_count(), 2);
        let names: Vec<&str> = s.component_names().iter().map(|n| n.as_str()).collect();
        assert_eq!(names, ["segment", "curve"]);
        for k in 1..=256usize {
            assert!(s.net().find_exact(&[1.0 / k as f64, 0.0]).is_some());
        }
    }

    #[test]
    fn spec_names_roundtrip() {
        for name in [
            "point",
            "interval",
            "circle",
            "disk",
            "ndagger",
            "sine",
            "comb",
            "earring",
            "earring-disk",
            "finite-3",
        ] {
            let s: SpaceSpec = name.parse().unwrap();
            assert_eq!(s.to_string(), name);
        }
        assert!("nosuch".parse::<SpaceSpec>().is_err());
    }

    #[test]
    fn earring_loops_start_at_origin() {
        let s = make_space(SpaceSpec::Earring, res(5)).unwrap();
        let lp = earring_circle_loop(&s, 2).unwrap();
        assert_eq!(s.net().point(lp[0]), &[0.0, 0.0]);
        assert!(lp.len() >= 8);
        assert!(s.net().find_exact(&[2.0 / 3.0, 0.0]).is_some());
    }
}
