use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::crossing::{CrossingGraph, Region};
use super::{Certificate, CheckRecord, DiskWitness, Status, Verdict, Vertex};
use crate::maps::{restrict, winding_number, MapSample};
use crate::metric::{sup_distance, Modulus, SpatialIndex};
use crate::num;
use crate::spaces::{
    earring_circle_count, AnnotatedSpace, Retraction, SpacePair, SpaceSource, SpaceSpec,
};

/// Round-off allowance when re-checking a declared modulus.
const MODULUS_SLACK: f64 = 1e-9;

enum Stop {
    Invalid(String),
    Inconsistent(String),
}

type Step = core::result::Result<(), Stop>;

fn invalid<T>(msg: impl Into<String>) -> core::result::Result<T, Stop> {
    Err(Stop::Invalid(msg.into()))
}

struct Checker<'a> {
    pair: &'a SpacePair,
    phi: &'a MapSample,
    trace: Vec<CheckRecord>,
    margins: BTreeMap<String, f64>,
}

impl<'a> Checker<'a> {
    fn record(&mut self, check: &str, passed: bool, detail: String) {
        self.trace.push(CheckRecord {
            check: check.into(),
            passed,
            detail,
        });
    }

    fn margin(&mut self, name: &str, value: f64) {
        self.margins.insert(name.into(), value);
    }

    fn y(&self) -> &'a AnnotatedSpace {
        self.pair.y()
    }

    fn x(&self) -> &'a AnnotatedSpace {
        self.phi.codomain()
    }

    fn eps(&self) -> f64 {
        self.y().eps()
    }

    fn z_index(&self, pos: usize) -> core::result::Result<usize, Stop> {
        match self.pair.z_indices().get(pos) {
            Some(&i) => Ok(i),
            None => invalid(format!("Z position {pos} out of range")),
        }
    }

    /// X-net index of `φ(z)`, when the value is a net point.
    fn image_index(&self, pos: usize) -> Option<usize> {
        self.x().net().find_exact(self.phi.value(pos))
    }
}

/// Re-checks `cert` for `φ` on `pair` from scratch.
pub fn check_certificate(pair: &SpacePair, phi: &MapSample, cert: &Certificate) -> Verdict {
    let mut c = Checker {
        pair,
        phi,
        trace: Vec::new(),
        margins: BTreeMap::new(),
    };
    let outcome = if phi.len() != pair.z_indices().len() || phi.domain() != &**pair.z_net() {
        Err(Stop::Inconsistent(
            "map is not defined on the pair's Z".into(),
        ))
    } else {
        match cert {
            Certificate::Positive {
                values,
                modulus,
                tolerance,
            } => positive(&mut c, values, modulus, *tolerance),
            Certificate::PathComponent {
                z1,
                z2,
                path,
                labels,
            } => path_component(&mut c, *z1, *z2, path, *labels),
            Certificate::Clopen { k, trace } => clopen(&mut c, *k, trace),
            Certificate::MandatoryCrossing {
                brackets,
                region,
                z0,
                separation,
            } => crossing(&mut c, brackets, region, *z0, *separation),
            Certificate::Winding {
                cycle,
                disk,
                retraction,
                expected,
            } => winding(&mut c, cycle, disk, retraction, *expected),
        }
    };
    let status = match outcome {
        Ok(()) if c.trace.iter().all(|r| r.passed) => Status::Verified,
        Ok(()) => Status::Refuted,
        Err(Stop::Invalid(msg)) => {
            c.record("well-formed", false, msg);
            Status::InvalidCertificate
        }
        Err(Stop::Inconsistent(msg)) => {
            c.record("consistent-input", false, msg);
            Status::InconsistentInput
        }
    };
    Verdict {
        status,
        kind: cert.kind().into(),
        epsilon: pair.y().eps(),
        trace: c.trace,
        margins: c.margins,
    }
}

fn positive(c: &mut Checker, values: &[f64], modulus: &Modulus, tolerance: f64) -> Step {
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return invalid(format!(
            "tolerance {tolerance} is not a finite nonnegative number"
        ));
    }
    let ext = match MapSample::new(
        c.y().shared_net(),
        c.phi.codomain().clone(),
        values.to_vec(),
        modulus.clone(),
    ) {
        Ok(e) => e,
        Err(e) => return invalid(e.to_string()),
    };
    let ok = ext.check_modulus(MODULUS_SLACK);
    c.record("modulus", ok, format!("declared modulus {modulus:?}"));
    let gap = ext.codomain_gap();
    let bound = c.x().eps();
    c.record(
        "in-codomain",
        gap <= bound,
        format!("values within {gap:.3e} of the codomain net (bound {bound:.3e})"),
    );
    let r = restrict(&ext, c.pair).map_err(|e| Stop::Inconsistent(e.to_string()))?;
    let sup = sup_distance(&r, c.phi).map_err(|e| Stop::Inconsistent(e.to_string()))?;
    c.record(
        "restriction",
        sup <= tolerance,
        format!("sup distance to φ on Z is {sup:.3e} (tolerance {tolerance:.3e})"),
    );
    c.margin("tolerance-sup", tolerance - sup);
    Ok(())
}

fn path_component(c: &mut Checker, z1: usize, z2: usize, path: &[usize], labels: [u32; 2]) -> Step {
    let (y1, y2) = (c.z_index(z1)?, c.z_index(z2)?);
    if path.is_empty() || path.iter().any(|&i| i >= c.y().len()) {
        return invalid("path is empty or leaves the net of Y");
    }
    let joined = path[0] == y1 && path[path.len() - 1] == y2;
    c.record(
        "endpoints",
        joined,
        format!("path joins Y points {y1} and {y2}"),
    );
    let ynet = c.y().net();
    let step = path
        .windows(2)
        .map(|w| ynet.distance(w[0], w[1]))
        .fold(0.0, f64::max);
    let limit = 2.0 * c.eps();
    c.record(
        "steps",
        step <= limit,
        format!("longest step {step:.3e} (bound {limit:.3e})"),
    );
    let label = c.y().component_of(path[0]);
    let same = path.iter().all(|&i| c.y().component_of(i) == label);
    c.record(
        "one-component",
        same,
        format!("path stays in {}", c.y().component_name(label)),
    );
    match (c.image_index(z1), c.image_index(z2)) {
        (Some(a), Some(b)) => {
            // images closer than a chain step would not be told apart at this scale
            let gap = c.x().net().distance(a, b);
            c.margin("image-gap-2eps", gap - 2.0 * c.x().eps());
            let got = [c.x().component_of(a), c.x().component_of(b)];
            c.record(
                "image-labels",
                got == labels && got[0] != got[1],
                format!(
                    "images lie in {} and {}",
                    c.x().component_name(got[0]),
                    c.x().component_name(got[1])
                ),
            );
        }
        _ => c.record(
            "image-labels",
            false,
            "an image is not a net point of X".into(),
        ),
    }
    Ok(())
}

fn clopen(c: &mut Checker, k: usize, trace: &[usize]) -> Step {
    if k == 0 || c.x().net().dim() != 1 {
        return invalid("clopen obstruction needs k ≥ 1 and a one-dimensional codomain");
    }
    let stated: BTreeSet<usize> = trace.iter().copied().collect();
    if stated.iter().any(|&p| p >= c.phi.len()) {
        return invalid("trace position out of range");
    }
    let target = 1.0 / k as f64;
    let Some(t) = c.x().net().find_exact(&[target]) else {
        c.record("target", false, format!("1/{k} is not a net point of X"));
        return Ok(());
    };
    let cl = c.x().clopen();
    let atom = cl.atom_of(t);
    let isolated = Some(atom) != cl.tail && cl.atom_members(atom).len() == 1;
    c.record(
        "isolated",
        isolated,
        format!("1/{k} forms its own clopen atom"),
    );
    let xnet = c.x().net();
    let isolation = (0..xnet.len())
        .filter(|&i| i != t)
        .map(|i| xnet.distance(i, t))
        .fold(f64::INFINITY, f64::min);
    c.margin("isolation-2eps", isolation - 2.0 * c.x().eps());
    let preimage: BTreeSet<usize> = (0..c.phi.len())
        .filter(|&p| c.phi.value(p) == [target])
        .collect();
    c.record(
        "preimage",
        preimage == stated,
        format!(
            "φ⁻¹(1/{k}) has {} points, certificate lists {}",
            preimage.len(),
            stated.len()
        ),
    );
    let z = c.pair.z_indices();
    let ytrace: BTreeSet<usize> = stated.iter().map(|&p| z[p]).collect();
    let exists = c.y().clopen().exists_clopen_with_trace(z, &ytrace);
    c.record(
        "no-clopen-trace",
        !exists,
        "no clopen subset of Y has this trace on Z".into(),
    );
    Ok(())
}

fn crossing(
    c: &mut Checker,
    brackets: &[[usize; 2]],
    region: &Region,
    z0: usize,
    separation: f64,
) -> Step {
    if brackets.is_empty() || !separation.is_finite() {
        return invalid("no brackets or non-finite separation");
    }
    let y0 = c.z_index(z0)?;
    for b in brackets {
        c.z_index(b[0])?;
        c.z_index(b[1])?;
    }
    let xnet = c.x().net();
    let graph = CrossingGraph::new(xnet, region).map_err(|e| Stop::Invalid(e.to_string()))?;
    for (j, b) in brackets.iter().enumerate() {
        let (ia, ib) = (c.image_index(b[0]), c.image_index(b[1]));
        let forced = matches!((ia, ib), (Some(a), Some(b)) if graph.forced(a, b));
        c.record(
            "crossing",
            forced,
            format!(
                "bracket {}: every 2ε-chain between the images meets the region",
                j + 1
            ),
        );
    }
    let ynet = c.y().net();
    let reach: Vec<f64> = brackets
        .iter()
        .map(|b| {
            let z = c.pair.z_indices();
            ynet.distance(z[b[0]], y0).max(ynet.distance(z[b[1]], y0))
        })
        .collect();
    let converging = reach.iter().all(|&r| r > 0.0) && reach.windows(2).all(|w| w[1] < w[0]);
    c.record(
        "converging",
        converging,
        format!(
            "bracket distances to z0 decrease to {:.3e}",
            reach[reach.len() - 1]
        ),
    );
    let p0 = c.phi.value(z0);
    let actual = xnet
        .points()
        .filter(|p| region.contains(p))
        .map(|p| xnet.metric().distance(p0, p))
        .fold(f64::INFINITY, f64::min);
    c.record(
        "separation",
        actual >= separation,
        format!("d(φ(z0), region) = {actual:.6} (claimed {separation:.6})"),
    );
    let four_eps = 4.0 * c.eps();
    c.record(
        "above-resolution",
        separation > four_eps,
        format!("separation exceeds 4ε = {four_eps:.3e}"),
    );
    c.margin("separation-4eps", separation - four_eps);
    Ok(())
}

fn retraction_allowed(x: &AnnotatedSpace, r: &Retraction) -> bool {
    match r {
        Retraction::Collapse { k } => {
            let earring = matches!(
                x.source(),
                SpaceSource::Catalog {
                    spec: SpaceSpec::Earring,
                    ..
                }
            );
            earring && *k >= 1 && *k <= earring_circle_count(x)
        }
        other => x.retraction() == Some(other),
    }
}

fn winding(
    c: &mut Checker,
    cycle: &[usize],
    disk: &DiskWitness,
    r: &Retraction,
    expected: i64,
) -> Step {
    if cycle.len() < 3 || expected == 0 {
        return invalid("loop needs three points and a nonzero expected winding");
    }
    let ycycle: Vec<usize> = cycle
        .iter()
        .map(|&p| c.z_index(p))
        .collect::<core::result::Result<_, _>>()?;
    let y = c.y();
    let ynet = y.net();
    let dim = ynet.dim();
    let mut coords: Vec<&[f64]> = Vec::with_capacity(disk.vertices.len());
    let mut net_vertex = BTreeMap::new();
    for (v, vertex) in disk.vertices.iter().enumerate() {
        match vertex {
            Vertex::Net(i) if *i < ynet.len() => {
                net_vertex.insert(*i, v);
                coords.push(ynet.point(*i));
            }
            Vertex::Point(p) if p.len() == dim && p.iter().all(|x| x.is_finite()) => coords.push(p),
            _ => return invalid(format!("malformed disk vertex {v}")),
        }
    }
    let nv = coords.len();
    if disk.triangles.is_empty()
        || disk
            .triangles
            .iter()
            .any(|t| t.iter().any(|&v| v >= nv) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
    {
        return invalid("malformed disk triangle");
    }
    let allowed = retraction_allowed(c.x(), r);
    c.record(
        "retraction",
        allowed,
        format!("{} is a retraction of X", r.name()),
    );

    let index = SpatialIndex::new(ynet, y.eps());
    let far = coords
        .iter()
        .map(|p| index.nearest(p).map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max);
    c.record(
        "vertices-in-Y",
        far <= y.eps(),
        format!("every vertex within {far:.3e} of the net of Y"),
    );

    let mut directed = BTreeSet::new();
    let mut repeated = false;
    let mut longest = 0.0f64;
    for t in &disk.triangles {
        for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            repeated |= !directed.insert(e);
            longest = longest.max(ynet.metric().distance(coords[e.0], coords[e.1]));
        }
    }
    let limit = 2.0 * y.eps();
    c.record(
        "edges",
        longest <= limit,
        format!("longest edge {longest:.3e} (bound {limit:.3e})"),
    );

    let boundary: BTreeSet<(usize, usize)> = directed
        .iter()
        .copied()
        .filter(|&(a, b)| !directed.contains(&(b, a)))
        .collect();
    let looped: Option<BTreeSet<(usize, usize)>> = (0..ycycle.len())
        .map(|i| {
            let a = net_vertex.get(&ycycle[i])?;
            let b = net_vertex.get(&ycycle[(i + 1) % ycycle.len()])?;
            Some((*a, *b))
        })
        .collect();
    let reversed = looped
        .as_ref()
        .map(|l| l.iter().map(|&(a, b)| (b, a)).collect::<BTreeSet<_>>());
    let bounds = !repeated
        && looped.as_ref().is_some_and(|l| l.len() == ycycle.len())
        && (looped.as_ref() == Some(&boundary) || reversed.as_ref() == Some(&boundary));
    c.record(
        "boundary",
        bounds,
        format!(
            "{} boundary edges against a loop of {}",
            boundary.len(),
            ycycle.len()
        ),
    );
    let used: BTreeSet<usize> = disk.triangles.iter().flatten().copied().collect();
    let undirected = directed
        .iter()
        .filter(|&&(a, b)| a < b || !directed.contains(&(b, a)))
        .count();
    let euler = used.len() as i64 - undirected as i64 + disk.triangles.len() as i64;
    c.record("euler", euler == 1, format!("V − E + F = {euler}"));

    let center = match r {
        Retraction::Collapse { k } => [1.0 / *k as f64, 0.0],
        Retraction::Radial { center, .. } if center.len() == 2 => [center[0], center[1]],
        _ => return invalid("retraction has no circle to wind around"),
    };
    let mut image = Vec::with_capacity(cycle.len());
    for &p in cycle {
        match r.apply(c.phi.value(p)) {
            Some(q) if q.len() == 2 => image.push([q[0], q[1]]),
            _ => {
                c.record(
                    "winding",
                    false,
                    format!("φ at loop position {p} leaves the retraction's domain"),
                );
                return Ok(());
            }
        }
    }
    // the winding number is read off correctly while every step turns less than π
    let angle = |q: &[f64; 2]| num::atan2(q[1] - center[1], q[0] - center[0]);
    let turn = (0..image.len())
        .map(|i| {
            let d = angle(&image[(i + 1) % image.len()]) - angle(&image[i]);
            num::abs(d - num::TAU * num::round(d / num::TAU))
        })
        .fold(0.0, f64::max);
    c.margin("pi-turn", num::PI - turn);
    match winding_number(&image, center) {
        Ok(w) => c.record(
            "winding",
            w == expected,
            format!("r ∘ φ winds {w} times (expected {expected})"),
        ),
        Err(e) => c.record("winding", false, e.to_string()),
    }
    Ok(())
}
