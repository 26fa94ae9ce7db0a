use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use super::path::{reciprocal_bracket, Polyline};
use super::sample::MapSample;
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::metric::Modulus;
use crate::num;
use crate::spaces::{
    earring_circle, make_space, n_points, opc_block, opc_disjoint_union, sine_y, AnnotatedSpace,
    SpacePair, SpaceSpec,
};

/// The catalog sequences `φ_n → φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    /// A sequence `x_k` in a path component converging outside it, on `([0,1], N)`.
    /// The catalog instance uses the sine curve with `x_k = (1/k, 0)`.
    Pathcomp,
    SineEclosed,
    SineEopen,
    Comb,
    NdaggerEopen,
    NdaggerEclosed,
    Hawaii,
}

impl FamilyName {
    pub const ALL: [FamilyName; 7] = [
        FamilyName::Pathcomp,
        FamilyName::SineEclosed,
        FamilyName::SineEopen,
        FamilyName::Comb,
        FamilyName::NdaggerEopen,
        FamilyName::NdaggerEclosed,
        FamilyName::Hawaii,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Pathcomp => "pathcomp",
            FamilyName::SineEclosed => "sine-eclosed",
            FamilyName::SineEopen => "sine-eopen",
            FamilyName::Comb => "comb",
            FamilyName::NdaggerEopen => "ndagger-eopen",
            FamilyName::NdaggerEclosed => "ndagger-eclosed",
            FamilyName::Hawaii => "hawaii",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.into()))
    }
}

/// A member of a family: `φ_n` or the limit `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    N(usize),
    Limit,
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::N(n) => write!(f, "n={n}"),
            Member::Limit => f.write_str("limit"),
        }
    }
}

#[derive(Debug, Clone)]
enum Witnesses {
    /// `paths[k-1]` joins `x_{k+1}` to `x_k`.
    Supplied(Vec<Vec<Vec<f64>>>),
    /// Arcs of the sine curve between consecutive zeros.
    SineArcs,
}

#[derive(Debug, Clone)]
struct Sequence {
    points: Vec<Vec<f64>>,
    witnesses: Witnesses,
    lipschitz: Option<f64>,
}

/// A sequence of maps `φ_n: Z → X` on a fixed pair, with its uniform limit `φ`.
#[derive(Debug, Clone)]
pub struct MapFamily {
    name: FamilyName,
    pair: SpacePair,
    codomain: Arc<AnnotatedSpace>,
    max_n: usize,
    sequence: Option<Sequence>,
    limit: MapSample,
}

impl MapFamily {
    pub fn name(&self) -> FamilyName {
        self.name
    }

    pub fn pair(&self) -> &SpacePair {
        &self.pair
    }

    pub fn codomain(&self) -> &Arc<AnnotatedSpace> {
        &self.codomain
    }

    /// Largest `n` representable at this resolution.
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn limit(&self) -> &MapSample {
        &self.limit
    }

    pub fn get(&self, member: Member) -> Result<MapSample> {
        match member {
            Member::N(n) => self.member(n),
            Member::Limit => Ok(self.limit.clone()),
        }
    }

    /// `φ_n`.
    pub fn member(&self, n: usize) -> Result<MapSample> {
        if n == 0 || n > self.max_n {
            return Err(Error::BeyondTruncation {
                index: n,
                bound: self.max_n,
            });
        }
        let y = self.pair.y();
        let z = self.pair.z_indices();
        let cod = self.codomain.clone();
        let zdom = self.pair.z_net().clone();
        let point = |pos: usize| y.net().point(z[pos]);
        match self.name {
            FamilyName::Pathcomp | FamilyName::SineEclosed => {
                let seq = self.sequence.as_ref().expect("sequence family");
                let modulus = seq.lipschitz.map(Modulus::Lipschitz);
                let values = fill(zdom.len(), cod.net().dim(), |pos, out| {
                    let t = point(pos)[0];
                    let k = if t == 0.0 {
                        n
                    } else {
                        num::round(1.0 / t) as usize
                    };
                    out.copy_from_slice(&seq.points[k.min(n) - 1]);
                });
                finish(zdom, cod, values, modulus)
            }
            FamilyName::Comb => {
                let values = fill(zdom.len(), 2, |pos, out| {
                    let t = point(pos)[0];
                    let k = if t == 0.0 {
                        usize::MAX
                    } else {
                        num::round(1.0 / t) as usize
                    };
                    out.copy_from_slice(&if k <= n { [t, 1.0] } else { [0.0, 1.0] });
                });
                finish(zdom, cod, values, Some(Modulus::Lipschitz((n + 1) as f64)))
            }
            FamilyName::SineEopen => {
                let values = fill(zdom.len(), 2, |pos, out| {
                    let x = point(pos)[0];
                    let k = if x == 0.0 {
                        usize::MAX
                    } else {
                        num::round(1.0 / x) as usize
                    };
                    out.copy_from_slice(&if k <= n { [x, 0.0] } else { [0.0, 0.0] });
                });
                finish(zdom, cod, values, Some(Modulus::Lipschitz((n + 1) as f64)))
            }
            FamilyName::NdaggerEopen => {
                let values = fill(zdom.len(), 1, |pos, out| {
                    let t = point(pos)[0];
                    out[0] = if t == 0.0 {
                        0.0
                    } else {
                        1.0 / (n as f64 + num::round(1.0 / t))
                    };
                });
                finish(zdom, cod, values, Some(Modulus::Lipschitz(1.0)))
            }
            FamilyName::NdaggerEclosed => {
                let values = fill(zdom.len(), 1, |pos, out| {
                    let j = opc_block_of(y, z[pos]);
                    out[0] = match j {
                        Some(j) if j <= n => 1.0 / j as f64,
                        _ => 0.0,
                    };
                });
                finish(zdom, cod, values, None)
            }
            FamilyName::Hawaii => {
                let values = fill(zdom.len(), 2, |pos, out| {
                    let p = point(pos);
                    match earring_circle(p) {
                        Some(k) if k <= n => out.copy_from_slice(&[0.0, 0.0]),
                        _ => out.copy_from_slice(p),
                    }
                });
                finish(zdom, cod, values, Some(hawaii_modulus()))
            }
        }
    }
}

fn fill(n: usize, d: usize, mut f: impl FnMut(usize, &mut [f64])) -> Vec<f64> {
    let mut v = vec![0.0; n * d];
    for (i, out) in v.chunks_exact_mut(d).enumerate() {
        f(i, out);
    }
    v
}

fn finish(
    domain: Arc<crate::metric::Net>,
    codomain: Arc<AnnotatedSpace>,
    values: Vec<f64>,
    modulus: Option<Modulus>,
) -> Result<MapSample> {
    let modulus = match modulus {
        Some(m) => m,
        None => Modulus::fit(&domain, &values, codomain.net().metric()),
    };
    MapSample::new(domain, codomain, values, modulus)
}

/// Mixed pairs (one point collapsed, one kept) satisfy `|q| ≤ √(2r)`: a point at
/// distance `s` from the origin on a smaller circle is at least `s²/2` from every
/// larger one.
fn hawaii_modulus() -> Modulus {
    Modulus::steps_from_fn(1.0, 40, |r| num::sqrt(2.0 * r).max(r))
}

fn opc_block_of(y: &AnnotatedSpace, i: usize) -> Option<usize> {
    let a = y.clopen().atom_of(i) as usize;
    (Some(a as u32) != y.clopen().tail).then_some(a + 1)
}

/// The pair `([0,1], N)` at resolution `res`.
fn interval_pair(res: Resolution) -> Result<SpacePair> {
    let y = make_space(SpaceSpec::Interval, res)?;
    let z = n_points(res)
        .iter()
        .map(|&x| y.net().find_exact(&[x]).expect("interval net contains N"))
        .collect();
    SpacePair::new(Arc::new(y), z)
}

/// The catalog instance of a family at resolution `res`. `ndagger-eclosed` uses
/// `2^k / 4` blocks; see [`ndagger_eclosed_family`] to choose the count.
pub fn example_family(name: FamilyName, res: Resolution) -> Result<MapFamily> {
    let inv = res.inverse();
    match name {
        FamilyName::Pathcomp | FamilyName::SineEclosed => {
            let x = Arc::new(make_space(SpaceSpec::Sine, res)?);
            let points = (1..=inv).map(|k| vec![1.0 / k as f64, 0.0]).collect();
            let mut fam = sequence_family(
                x,
                points,
                vec![0.0, 0.0],
                Witnesses::SineArcs,
                res,
                Some(1.0),
            )?;
            fam.name = name;
            Ok(fam)
        }
        FamilyName::Comb => {
            let pair = interval_pair(res)?;
            let x = Arc::new(make_space(SpaceSpec::Comb, res)?);
            let limit = MapSample::from_fn(
                pair.z_net().clone(),
                x.clone(),
                Modulus::Lipschitz(1.0),
                |_, p, out| out.copy_from_slice(&[p[0], 1.0]),
            )?;
            Ok(MapFamily {
                name,
                pair,
                codomain: x,
                max_n: inv - 1,
                sequence: None,
                limit,
            })
        }
        FamilyName::SineEopen => {
            let y = Arc::new(make_space(SpaceSpec::Sine, res)?);
            let z: Vec<usize> = n_points(res)
                .iter()
                .map(|&x| {
                    y.net()
                        .find_exact(&[x, 0.0])
                        .expect("sine net contains N × {0}")
                })
                .collect();
            let pair = SpacePair::new(y.clone(), z)?;
            let limit = MapSample::from_fn(
                pair.z_net().clone(),
                y.clone(),
                Modulus::Lipschitz(1.0),
                |_, p, out| out.copy_from_slice(p),
            )?;
            Ok(MapFamily {
                name,
                pair,
                codomain: y,
                max_n: inv - 1,
                sequence: None,
                limit,
            })
        }
        FamilyName::NdaggerEopen => {
            let pair = interval_pair(res)?;
            let x = Arc::new(make_space(SpaceSpec::Ndagger, res)?);
            let limit = MapSample::constant(pair.z_net().clone(), x.clone(), &[0.0])?;
            Ok(MapFamily {
                name,
                pair,
                codomain: x,
                max_n: inv - 1,
                sequence: None,
                limit,
            })
        }
        FamilyName::NdaggerEclosed => ndagger_eclosed_family(res, (inv / 4).max(2)),
        FamilyName::Hawaii => {
            let x = Arc::new(make_space(SpaceSpec::Earring, res)?);
            let y = Arc::new(make_space(SpaceSpec::EarringDisk, res)?);
            let z: Vec<usize> = (0..x.len()).collect();
            debug_assert!(z.iter().all(|&i| x.net().point(i) == y.net().point(i)));
            let pair = SpacePair::new(y, z)?;
            let limit = MapSample::constant(pair.z_net().clone(), x.clone(), &[0.0, 0.0])?;
            Ok(MapFamily {
                name,
                pair,
                codomain: x.clone(),
                max_n: crate::spaces::earring_circle_count(&x) - 1,
                sequence: None,
                limit,
            })
        }
    }
}

/// The generic path-component family on `([0,1], N)`: `φ_n(1/k) = x_k` for `k ≤ n`,
/// `x_n` beyond, and `φ(0) = x`. `witnesses[k-1]` is a sampled path in `X` from
/// `x_{k+1}` to `x_k`; it is only consumed by [`explicit_extension`].
pub fn pathcomp_family(
    x: Arc<AnnotatedSpace>,
    points: Vec<Vec<f64>>,
    limit: Vec<f64>,
    witnesses: Vec<Vec<Vec<f64>>>,
    res: Resolution,
) -> Result<MapFamily> {
    let d = x.net().dim();
    if points.len() < res.inverse() {
        return Err(Error::InvalidArgument(format!(
            "need x_k for every k ≤ {}, got {}",
            res.inverse(),
            points.len()
        )));
    }
    if points.iter().chain([&limit]).any(|p| p.len() != d) {
        return Err(Error::InvalidArgument("point of wrong dimension".into()));
    }
    for (k, w) in witnesses.iter().enumerate() {
        let ok = w.len() >= 2
            && w[0] == points[k + 1]
            && w[w.len() - 1] == points[k]
            && w.iter().all(|p| p.len() == d);
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "witness {} does not join x_{} to x_{}",
                k + 1,
                k + 2,
                k + 1
            )));
        }
    }
    sequence_family(x, points, limit, Witnesses::Supplied(witnesses), res, None)
}

fn sequence_family(
    x: Arc<AnnotatedSpace>,
    points: Vec<Vec<f64>>,
    limit_point: Vec<f64>,
    witnesses: Witnesses,
    res: Resolution,
    lipschitz: Option<f64>,
) -> Result<MapFamily> {
    let pair = interval_pair(res)?;
    let y = pair.y().clone();
    let z = pair.z_indices().to_vec();
    let values = fill(z.len(), x.net().dim(), |pos, out| {
        let t = y.net().point(z[pos])[0];
        if t == 0.0 {
            out.copy_from_slice(&limit_point);
        } else {
            out.copy_from_slice(&points[num::round(1.0 / t) as usize - 1]);
        }
    });
    let limit = finish(
        pair.z_net().clone(),
        x.clone(),
        values,
        lipschitz.map(Modulus::Lipschitz),
    )?;
    Ok(MapFamily {
        name: FamilyName::Pathcomp,
        pair,
        codomain: x,
        max_n: res.inverse() - 1,
        sequence: Some(Sequence {
            points,
            witnesses,
            lipschitz,
        }),
        limit,
    })
}

/// `Y` = one-point compactification of `blocks` intervals, `Z` = block endpoints and
/// `∞`, into `N†`. `φ` sends block `j` to `j`; `φ_n` agrees on blocks `j ≤ n` and sends
/// the rest to `∞`.
pub fn ndagger_eclosed_family(res: Resolution, blocks: usize) -> Result<MapFamily> {
    if blocks < 2 || blocks > res.inverse() {
        return Err(Error::InvalidArgument(format!(
            "block count must lie in 2..={}",
            res.inverse()
        )));
    }
    let interval = make_space(SpaceSpec::Interval, res)?;
    let y = opc_disjoint_union(&vec![interval; blocks])?;
    let mut z = Vec::new();
    for j in 1..=blocks {
        let members = opc_block(&y, j);
        z.push(members[0]);
        z.push(members[members.len() - 1]);
    }
    z.push(y.basepoint("inf").expect("opc has a point at infinity"));
    let y = Arc::new(y);
    let pair = SpacePair::new(y.clone(), z)?;
    let x = Arc::new(make_space(SpaceSpec::Ndagger, res)?);
    let zi = pair.z_indices().to_vec();
    let values = fill(zi.len(), 1, |pos, out| {
        out[0] = opc_block_of(&y, zi[pos]).map_or(0.0, |j| 1.0 / j as f64);
    });
    let limit = finish(pair.z_net().clone(), x.clone(), values, None)?;
    Ok(MapFamily {
        name: FamilyName::NdaggerEclosed,
        pair,
        codomain: x,
        max_n: blocks - 1,
        sequence: None,
        limit,
    })
}

/// An extension of `φ_n` (or `φ`) to `Y` for the members that are extendible.
/// Members proved non-extendible are refused.
pub fn explicit_extension(family: &MapFamily, member: Member) -> Result<MapSample> {
    let refuse = || {
        Err(Error::Refused(format!(
            "{} {member} is not extendible",
            family.name
        )))
    };
    let y = family.pair.y();
    let ynet = y.shared_net();
    let cod = family.codomain.clone();
    match (family.name, member) {
        (FamilyName::Pathcomp | FamilyName::SineEclosed, Member::N(n)) => {
            family.member(n)?;
            let seq = family.sequence.as_ref().expect("sequence family");
            let paths: Vec<Polyline> = (1..n).map(|k| Polyline::new(witness(seq, k))).collect();
            piecewise_extension(ynet, cod, n, &paths, &seq.points[n - 1])
        }
        (FamilyName::Comb, Member::N(n)) => {
            family.member(n)?;
            let tip = |k: usize| if k <= n { 1.0 / k as f64 } else { 0.0 };
            let paths: Vec<Polyline> = (1..=n)
                .map(|k| {
                    let (a, b) = (tip(k + 1), tip(k));
                    Polyline::new(vec![vec![a, 1.0], vec![a, 0.0], vec![b, 0.0], vec![b, 1.0]])
                })
                .collect();
            piecewise_extension(ynet, cod, n + 1, &paths, &[0.0, 1.0])
        }
        (FamilyName::SineEopen, Member::Limit) => MapSample::new(
            ynet.clone(),
            cod,
            ynet.coords().to_vec(),
            Modulus::Lipschitz(1.0),
        ),
        (FamilyName::NdaggerEopen, Member::Limit) => MapSample::constant(ynet, cod, &[0.0]),
        (FamilyName::Hawaii, Member::Limit) => MapSample::constant(ynet, cod, &[0.0, 0.0]),
        (FamilyName::NdaggerEclosed, Member::N(n)) => {
            family.member(n)?;
            let values = fill(y.len(), 1, |i, out| {
                out[0] = match opc_block_of(y, i) {
                    Some(j) if j <= n => 1.0 / j as f64,
                    _ => 0.0,
                };
            });
            finish(ynet, cod, values, None)
        }
        (FamilyName::NdaggerEclosed, Member::Limit) => {
            crate::certificates::clopen_extension(&family.pair, &family.limit)
        }
        _ => refuse(),
    }
}

fn witness(seq: &Sequence, k: usize) -> Vec<Vec<f64>> {
    match &seq.witnesses {
        Witnesses::Supplied(paths) => paths[k - 1].clone(),
        Witnesses::SineArcs => sine_arc(k),
    }
}

/// The sine curve from `(1/(k+1), 0)` to `(1/k, 0)`, sampled so that chords are at
/// most `1/4096`.
fn sine_arc(k: usize) -> Vec<Vec<f64>> {
    let (a, b) = (1.0 / (k + 1) as f64, 1.0 / k as f64);
    let slope = num::PI * ((k + 1) * (k + 1)) as f64;
    let steps = num::ceil((b - a) * num::sqrt(1.0 + slope * slope) * 4096.0) as usize;
    let mut pts = Vec::with_capacity(steps + 1);
    pts.push(vec![a, 0.0]);
    for i in 1..steps {
        let x = a + (b - a) * i as f64 / steps as f64;
        pts.push(vec![x, sine_y(x)]);
    }
    pts.push(vec![b, 0.0]);
    pts
}

/// `t ↦ paths[k-1](t)` on `[1/(k+1), 1/k]` for `k < cut`, and `rest` on `[0, 1/cut]`.
fn piecewise_extension(
    ynet: Arc<crate::metric::Net>,
    cod: Arc<AnnotatedSpace>,
    cut: usize,
    paths: &[Polyline],
    rest: &[f64],
) -> Result<MapSample> {
    let lipschitz = paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let k = (i + 1) as f64;
            p.length() * k * (k + 1.0)
        })
        .fold(0.0, f64::max);
    let cutoff = 1.0 / cut as f64;
    MapSample::from_fn(ynet, cod, Modulus::Lipschitz(lipschitz), |_, p, out| {
        let t = p[0];
        if t <= cutoff {
            out.copy_from_slice(rest);
        } else {
            let k = reciprocal_bracket(t).min(cut - 1);
            let (a, b) = (1.0 / (k + 1) as f64, 1.0 / k as f64);
            paths[k - 1].at(a, b, t, out);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::sup_distance;

    fn res(k: u32) -> Resolution {
        Resolution::new(k).unwrap()
    }

    #[test]
    fn comb_formulas() {
        let fam = example_family(FamilyName::Comb, res(6)).unwrap();
        let phi2 = fam.member(2).unwrap();
        let z = fam.pair().z_net();
        let at = |x: f64| phi2.value(z.find_exact(&[x]).unwrap()).to_vec();
        assert_eq!(at(0.5), [0.5, 1.0]);
        assert_eq!(at(1.0 / 3.0), [0.0, 1.0]);
        assert_eq!(at(0.0), [0.0, 1.0]);
        assert_eq!(
            sup_distance(&fam.member(3).unwrap(), fam.limit()).unwrap(),
            0.25
        );
    }

    #[test]
    fn comb_extension_crosses_base() {
        let fam = example_family(FamilyName::Comb, res(6)).unwrap();
        let ext = explicit_extension(&fam, Member::N(1)).unwrap();
        let y = fam.pair().y();
        let mid = y.net().find_exact(&[0.75]).unwrap();
        assert_eq!(ext.value(mid)[1], 0.0);
        assert!(explicit_extension(&fam, Member::Limit).is_err());
    }

    #[test]
    fn ndagger_eopen_values() {
        let fam = example_family(FamilyName::NdaggerEopen, res(6)).unwrap();
        let phi3 = fam.member(3).unwrap();
        let z = fam.pair().z_net();
        assert_eq!(phi3.value(z.find_exact(&[0.5]).unwrap()), &[0.2]);
        assert_eq!(phi3.value(z.find_exact(&[0.0]).unwrap()), &[0.0]);
    }

    #[test]
    fn hawaii_collapses_small_indices() {
        let fam = example_family(FamilyName::Hawaii, res(5)).unwrap();
        let phi1 = fam.member(1).unwrap();
        let z = fam.pair().z_net();
        let c1 = z.find_exact(&[2.0, 0.0]).unwrap();
        let c2 = z.find_exact(&[1.0, 0.0]).unwrap();
        assert_eq!(phi1.value(c1), &[0.0, 0.0]);
        assert_eq!(phi1.value(c2), &[1.0, 0.0]);
        assert_eq!(
            sup_distance(&fam.member(2).unwrap(), fam.limit()).unwrap(),
            2.0 / 3.0
        );
    }

    #[test]
    fn members_respect_their_moduli() {
        for name in FamilyName::ALL {
            let fam = example_family(name, res(5)).unwrap();
            let eps = fam.codomain().eps();
            for n in [1, 2, 5] {
                assert!(
                    fam.member(n).unwrap().check_modulus(2.0 * eps),
                    "{name} n={n}"
                );
            }
            assert!(fam.limit().check_modulus(2.0 * eps), "{name} limit");
        }
    }
}
