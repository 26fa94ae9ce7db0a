use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::index::SpatialIndex;
use super::net::{Metric, Net};
use crate::error::{Error, Result};
use crate::num;

/// A modulus of continuity `ω`, nondecreasing with `ω(0) = 0`.
///
/// `Steps` holds `(radius, bound)` pairs with increasing radii; `ω(r)` is the bound of
/// the first entry whose radius is at least `r`, and `+∞` past the last radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulus {
    Lipschitz(f64),
    Steps(Vec<(f64, f64)>),
}

impl Modulus {
    pub fn validate(&self) -> Result<()> {
        match self {
            Modulus::Lipschitz(l) if *l >= 0.0 && l.is_finite() => Ok(()),
            Modulus::Lipschitz(l) => Err(Error::InvalidArgument(format!(
                "Lipschitz constant must be finite and ≥ 0, got {l}"
            ))),
            Modulus::Steps(table) => {
                let mut prev: Option<(f64, f64)> = None;
                for &(r, b) in table {
                    if !(r.is_finite() && b.is_finite() && r > 0.0 && b >= 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "bad modulus step ({r}, {b})"
                        )));
                    }
                    if let Some((pr, pb)) = prev {
                        if r <= pr || b < pb {
                            return Err(Error::InvalidArgument(
                                "modulus steps must have increasing radii and nondecreasing bounds"
                                    .into(),
                            ));
                        }
                    }
                    prev = Some((r, b));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            Modulus::Lipschitz(l) => l * r,
            Modulus::Steps(table) => table
                .iter()
                .find(|(radius, _)| *radius >= r)
                .map(|(_, b)| *b)
                .unwrap_or(f64::INFINITY),
        }
    }

    /// Step modulus sampling `f` on dyadic radii `top·2^-j`, `j = levels..=0`.
    /// Valid for the true modulus when `f` is nondecreasing and dominates it.
    pub fn steps_from_fn(top: f64, levels: u32, f: impl Fn(f64) -> f64) -> Modulus {
        let table = (0..=levels)
            .rev()
            .map(|j| {
                let r = top * num::powi2(-(j as i32));
                (r, f(r))
            })
            .collect();
        Modulus::Steps(table)
    }

    /// Tightest step modulus on dyadic radii for the sampled values.
    pub fn fit(domain: &Net, values: &[f64], codomain: &Metric) -> Modulus {
        let n = domain.len();
        let vd = values.len().checked_div(n).unwrap_or(1);
        const LEVELS: i32 = 60;
        let mut worst = [0.0f64; (2 * LEVELS + 1) as usize];
        let mut top = i32::MIN;
        for i in 0..n {
            for j in i + 1..n {
                let d = domain.distance(i, j);
                let dv =
                    codomain.distance(&values[i * vd..(i + 1) * vd], &values[j * vd..(j + 1) * vd]);
                if d <= 0.0 {
                    continue;
                }
                let e = (num::ceil(libm::log2(d)) as i32).clamp(-LEVELS, LEVELS);
                let slot = (e + LEVELS) as usize;
                if dv > worst[slot] {
                    worst[slot] = dv;
                }
                top = top.max(e);
            }
        }
        if top == i32::MIN {
            return Modulus::Lipschitz(0.0);
        }
        let mut table = Vec::new();
        let mut running = 0.0f64;
        for e in -LEVELS..=top {
            running = running.max(worst[(e + LEVELS) as usize]);
            table.push((num::powi2(e), running));
        }
        Modulus::Steps(table)
    }

    /// Largest ratio `d_X / d_Z` over pairs closer than `radius`.
    pub fn local_lipschitz(domain: &Net, values: &[f64], codomain: &Metric, radius: f64) -> f64 {
        let n = domain.len();
        if n == 0 {
            return 0.0;
        }
        let vd = values.len() / n;
        let index = SpatialIndex::new(domain, radius);
        let mut best = 0.0f64;
        for i in 0..n {
            index.for_each_within(domain.point(i), radius, |j, d| {
                if j > i && d > 0.0 {
                    let dv = codomain
                        .distance(&values[i * vd..(i + 1) * vd], &values[j * vd..(j + 1) * vd]);
                    best = best.max(dv / d);
                }
            });
        }
        best
    }
}

/// True iff `d_X(f(z), f(z')) ≤ ω(d_Z(z, z')) + slack` for every pair of domain points.
///
/// When the domain metric dominates the sup norm and the codomain metric is bounded by
/// the Euclidean one, points are bucketed and whole bucket pairs are skipped once the
/// bounding boxes prove the inequality for every pair between them.
pub fn check_modulus_values(
    domain: &Net,
    values: &[f64],
    codomain: &Metric,
    modulus: &Modulus,
    slack: f64,
) -> bool {
    let n = domain.len();
    if n < 2 {
        return true;
    }
    let vd = values.len() / n;
    let val = |i: usize| &values[i * vd..(i + 1) * vd];
    let ok = |i: usize, j: usize| {
        codomain.distance(val(i), val(j)) <= modulus.eval(domain.distance(i, j)) + slack
    };
    if !(domain.metric().dominates_sup_norm() && codomain.bounded_by_euclidean()) {
        return (0..n).all(|i| (i + 1..n).all(|j| ok(i, j)));
    }
    let buckets = Buckets::new(domain, values, vd);
    let m = buckets.members.len();
    for a in 0..m {
        for b in a..m {
            let gap = buckets.point_box[a].gap(&buckets.point_box[b]);
            let reach = buckets.value_box[a].farthest(&buckets.value_box[b]);
            if reach <= modulus.eval(gap) + slack {
                continue;
            }
            let (ma, mb) = (&buckets.members[a], &buckets.members[b]);
            for (x, &i) in ma.iter().enumerate() {
                let rest = if a == b { &ma[x + 1..] } else { &mb[..] };
                if !rest.iter().all(|&j| ok(i, j)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Axis-aligned bounding box.
struct BBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BBox {
    fn empty(dim: usize) -> Self {
        BBox {
            lo: alloc::vec![f64::INFINITY; dim],
            hi: alloc::vec![f64::NEG_INFINITY; dim],
        }
    }

    fn add(&mut self, p: &[f64]) {
        for ((lo, hi), &x) in self.lo.iter_mut().zip(&mut self.hi).zip(p) {
            *lo = lo.min(x);
            *hi = hi.max(x);
        }
    }

    /// Lower bound on the sup-norm distance between points of the two boxes.
    fn gap(&self, other: &BBox) -> f64 {
        let mut g = 0.0f64;
        for d in 0..self.lo.len() {
            g = g
                .max(other.lo[d] - self.hi[d])
                .max(self.lo[d] - other.hi[d]);
        }
        g
    }

    /// Upper bound on the Euclidean distance between points of the two boxes.
    fn farthest(&self, other: &BBox) -> f64 {
        let mut s = 0.0;
        for d in 0..self.lo.len() {
            let w = (other.hi[d] - self.lo[d]).max(self.hi[d] - other.lo[d]);
            s += w * w;
        }
        num::sqrt(s)
    }
}

fn bounding_boxes<'a>(
    members: &[Vec<usize>],
    dim: usize,
    at: impl Fn(usize) -> &'a [f64],
) -> Vec<BBox> {
    members
        .iter()
        .map(|ms| {
            let mut b = BBox::empty(dim);
            for &i in ms {
                b.add(at(i));
            }
            b
        })
        .collect()
}

struct Buckets {
    members: Vec<Vec<usize>>,
    point_box: Vec<BBox>,
    value_box: Vec<BBox>,
}

impl Buckets {
    /// Grid buckets holding about `TARGET` points each.
    fn new(domain: &Net, values: &[f64], vd: usize) -> Self {
        const TARGET: usize = 32;
        let n = domain.len();
        let mut all = BBox::empty(domain.dim());
        for p in domain.points() {
            all.add(p);
        }
        let mut cell = domain.resolution().max(f64::MIN_POSITIVE);
        let members = loop {
            let mut map: hashbrown::HashMap<Vec<i64>, Vec<usize>> = hashbrown::HashMap::new();
            for i in 0..n {
                let key = domain
                    .point(i)
                    .iter()
                    .zip(&all.lo)
                    .map(|(x, lo)| num::floor((x - lo) / cell) as i64)
                    .collect();
                map.entry(key).or_default().push(i);
            }
            if map.len() * TARGET <= n || map.len() == 1 {
                let mut keyed: Vec<_> = map.into_iter().collect();
                keyed.sort_unstable();
                break keyed.into_iter().map(|(_, v)| v).collect::<Vec<_>>();
            }
            cell *= 2.0;
        };
        let point_box = bounding_boxes(&members, domain.dim(), |i| domain.point(i));
        let value_box = bounding_boxes(&members, vd, |i| &values[i * vd..(i + 1) * vd]);
        Buckets {
            members,
            point_box,
            value_box,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_grid(k: u32) -> Net {
        let n = 1usize << k;
        let coords = (0..=n).map(|i| i as f64 / n as f64).collect();
        Net::new(1, coords, 1.0 / n as f64, Metric::Euclidean).unwrap()
    }

    #[test]
    fn constant_map_passes_any_modulus() {
        let net = unit_grid(4);
        let vals = vec![0.3; net.len()];
        assert!(check_modulus_values(
            &net,
            &vals,
            &Metric::Euclidean,
            &Modulus::Lipschitz(0.0),
            0.0
        ));
    }

    #[test]
    fn identity_with_half_lipschitz_fails() {
        let net = unit_grid(4);
        let vals = net.coords().to_vec();
        assert!(!check_modulus_values(
            &net,
            &vals,
            &Metric::Euclidean,
            &Modulus::Lipschitz(0.5),
            0.0
        ));
        assert!(check_modulus_values(
            &net,
            &vals,
            &Metric::Euclidean,
            &Modulus::Lipschitz(1.0),
            0.0
        ));
    }

    #[test]
    fn steps_evaluate_and_validate() {
        let m = Modulus::Steps(vec![(0.25, 0.5), (1.0, 1.0)]);
        m.validate().unwrap();
        assert_eq!(m.eval(0.0), 0.0);
        assert_eq!(m.eval(0.1), 0.5);
        assert_eq!(m.eval(0.5), 1.0);
        assert_eq!(m.eval(2.0), f64::INFINITY);
        assert!(Modulus::Steps(vec![(1.0, 1.0), (0.5, 2.0)])
            .validate()
            .is_err());
        assert!(Modulus::Lipschitz(-1.0).validate().is_err());
    }

    #[test]
    fn fitted_modulus_is_admissible() {
        let net = unit_grid(5);
        let vals: Vec<f64> = net.coords().iter().map(|x| x * x * 3.0).collect();
        let m = Modulus::fit(&net, &vals, &Metric::Euclidean);
        m.validate().unwrap();
        assert!(check_modulus_values(
            &net,
            &vals,
            &Metric::Euclidean,
            &m,
            0.0
        ));
    }
}
