use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::homotopy::Homotopy;
use super::sample::MapSample;
use crate::error::{Error, Result};
use crate::metric::{Metric, Modulus, Net, SpatialIndex};
use crate::num;
use crate::spaces::{Retraction, SpacePair};

/// Values of the Dugundji-style extension together with the Y-indices where the
/// weighted average left the retraction's neighbourhood.
pub(crate) struct Dugundji {
    pub(crate) values: Vec<f64>,
    pub(crate) failures: Vec<usize>,
}

fn check_on_z(pair: &SpacePair, f: &MapSample) -> Result<()> {
    if f.len() != pair.z_indices().len() || f.domain() != &**pair.z_net() {
        return Err(Error::DomainMismatch(
            "map is not defined on the pair's Z".into(),
        ));
    }
    Ok(())
}

/// For `y ∉ Z`: weights `w_i = max(0, 2·d(y,Z) − d(y,z_i))`, normalised average of
/// `f(z_i)` in ambient coordinates, then `r`. When every contributing value is the
/// same point it is copied unchanged.
pub(crate) fn dugundji_values(pair: &SpacePair, f: &MapSample, r: &Retraction) -> Result<Dugundji> {
    Ok(dugundji_values_many(pair, &[f], r)?.remove(0))
}

/// [`dugundji_values`] for several maps on the same `Z`; the weights depend only on
/// the pair and are computed once.
pub(crate) fn dugundji_values_many(
    pair: &SpacePair,
    maps: &[&MapSample],
    r: &Retraction,
) -> Result<Vec<Dugundji>> {
    for f in maps {
        check_on_z(pair, f)?;
    }
    let y = pair.y();
    let net = y.net();
    let d = maps.first().map_or(0, |f| f.codim());
    let z = pair.z_indices();
    let mut position = vec![usize::MAX; y.len()];
    for (pos, &i) in z.iter().enumerate() {
        position[i] = pos;
    }
    let index = SpatialIndex::over(net, z, y.eps());
    let mut out: Vec<Dugundji> = maps
        .iter()
        .map(|_| Dugundji {
            values: vec![0.0; y.len() * d],
            failures: Vec::new(),
        })
        .collect();
    let mut weights: Vec<(usize, f64)> = Vec::new();
    let mut acc = vec![0.0; d];
    for i in 0..y.len() {
        if position[i] != usize::MAX {
            for (f, o) in maps.iter().zip(&mut out) {
                o.values[i * d..(i + 1) * d].copy_from_slice(f.value(position[i]));
            }
            continue;
        }
        let p = net.point(i);
        let (nearest, dz) = index
            .nearest(p)
            .ok_or_else(|| Error::InvalidArgument("Z is empty".into()))?;
        let reach = 2.0 * dz;
        weights.clear();
        let mut total = 0.0;
        index.for_each_within(p, reach, |j, dj| {
            let w = reach - dj;
            if w > 0.0 {
                weights.push((position[j], w));
                total += w;
            }
        });
        for (f, o) in maps.iter().zip(&mut out) {
            let dst = &mut o.values[i * d..(i + 1) * d];
            let first = f.value(position[nearest]);
            if weights.iter().all(|&(k, _)| f.value(k) == first) {
                dst.copy_from_slice(first);
                continue;
            }
            acc.iter_mut().for_each(|a| *a = 0.0);
            for &(k, w) in &weights {
                for (a, x) in acc.iter_mut().zip(f.value(k)) {
                    *a += w * x;
                }
            }
            acc.iter_mut().for_each(|a| *a /= total);
            match r.apply(&acc) {
                Some(v) => dst.copy_from_slice(&v),
                None => {
                    dst.copy_from_slice(first);
                    o.failures.push(i);
                }
            }
        }
    }
    Ok(out)
}

/// A Lipschitz constant valid for every pair of domain points: the largest ratio over
/// pairs closer than `4ε`, and `diam/4ε` beyond.
pub(crate) fn net_lipschitz(domain: &Net, values: &[f64], codomain: &Metric) -> f64 {
    let n = domain.len();
    if n < 2 {
        return 0.0;
    }
    let radius = 4.0 * domain.resolution();
    let d = values.len() / n;
    let v0 = &values[..d];
    let spread = (1..n)
        .map(|i| codomain.distance(v0, &values[i * d..(i + 1) * d]))
        .fold(0.0, f64::max);
    Modulus::local_lipschitz(domain, values, codomain, radius).max(2.0 * spread / radius)
}

/// Extension of `f: Z → X` to `Y` through the retraction data of `X`.
pub fn dugundji_extend(pair: &SpacePair, f: &MapSample) -> Result<MapSample> {
    let r = f
        .codomain()
        .retraction()
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{} carries no retraction data",
                f.codomain().name()
            ))
        })?
        .clone();
    let out = dugundji_values(pair, f, &r)?;
    if let Some(&i) = out.failures.first() {
        return Err(Error::ExtensionFailure {
            index: i,
            reason: format!(
                "weighted average left the domain of the {} retraction",
                r.name()
            ),
        });
    }
    let ynet = pair.y().shared_net();
    let l = net_lipschitz(&ynet, &out.values, f.codomain().net().metric());
    MapSample::new(
        ynet,
        f.codomain().clone(),
        out.values,
        Modulus::Lipschitz(l),
    )
}

/// Extension with image diameter below `target`, provided `diam f(Z)` is below the
/// codomain's `δ(target)`.
pub fn small_diameter_extend(pair: &SpacePair, f: &MapSample, target: f64) -> Result<MapSample> {
    let anr = f.codomain().anr().ok_or_else(|| {
        Error::InvalidArgument(format!("{} is not a catalog ANR", f.codomain().name()))
    })?;
    let bound = anr.delta_for(target);
    let diameter = f.image_diameter();
    if diameter >= bound {
        return Err(Error::DiameterTooLarge { diameter, bound });
    }
    let ext = dugundji_extend(pair, f)?;
    let reached = ext.image_diameter();
    if reached >= target {
        return Err(Error::ExtensionFailure {
            index: 0,
            reason: format!("extension diameter {reached} is not below {target}"),
        });
    }
    Ok(ext)
}

/// `φ̄(y) = ψ_{f(y)}(y)` on `V̄` and `φ̄_n(y)` off `V̄`. `ψ` is interpolated linearly
/// between its sample times and, for a circle codomain, projected back radially.
/// `v` lists the Y-indices of `V̄` in the order of `ψ`'s base net.
pub fn glue_homotopy_extension(
    pair: &SpacePair,
    v: &[usize],
    phi_bar_n: &MapSample,
    psi: &Homotopy,
    f: &MapSample,
) -> Result<MapSample> {
    let y = pair.y();
    if phi_bar_n.domain() != y.net() || f.domain() != y.net() {
        return Err(Error::DomainMismatch("glue inputs must live on Y".into()));
    }
    if psi.base().len() != v.len() {
        return Err(Error::DomainMismatch(
            "homotopy base does not match V".into(),
        ));
    }
    let x = phi_bar_n.codomain();
    let metric = x.net().metric();
    let deviation = v
        .iter()
        .enumerate()
        .map(|(pos, &i)| metric.distance(psi.value(0, pos), phi_bar_n.value(i)))
        .fold(0.0, f64::max);
    if deviation > 1e-12 {
        return Err(Error::GluingMismatch { deviation });
    }
    let lipschitz = |m: &Modulus| match m {
        Modulus::Lipschitz(l) => Ok(*l),
        Modulus::Steps(_) => Err(Error::InvalidArgument(
            "gluing needs Lipschitz moduli".into(),
        )),
    };
    let (la, lf) = (lipschitz(phi_bar_n.modulus())?, lipschitz(f.modulus())?);
    let radial = match x.retraction() {
        Some(Retraction::Radial { center, radius, .. }) => Some((center.clone(), *radius)),
        _ => None,
    };
    let mut in_v = vec![usize::MAX; y.len()];
    for (pos, &i) in v.iter().enumerate() {
        in_v[i] = pos;
    }
    let d = phi_bar_n.codim();
    let mut values = phi_bar_n.values().to_vec();
    // smallest |q − c| / radius before projection; the projection is 1/shrink-Lipschitz there
    let mut shrink = 1.0f64;
    for (pos, &i) in v.iter().enumerate() {
        let out = &mut values[i * d..(i + 1) * d];
        let t = f.value(i)[0];
        psi.interpolate(t, pos, out);
        let sampled = psi.times().binary_search_by(|s| s.total_cmp(&t)).is_ok();
        if let (Some((c, r)), false) = (&radial, sampled) {
            let norm = num::sqrt(out.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum());
            if norm == 0.0 {
                return Err(Error::ExtensionFailure {
                    index: i,
                    reason: "interpolated homotopy passes through the centre".into(),
                });
            }
            if norm != *r {
                shrink = shrink.min(norm / r);
                for (o, cc) in out.iter_mut().zip(c) {
                    *o = cc + (*o - cc) * (r / norm);
                }
            }
        }
    }
    let l = la.max((psi.space_lipschitz() + psi.time_lipschitz() * lf) / shrink);
    MapSample::new(y.shared_net(), x.clone(), values, Modulus::Lipschitz(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Resolution;
    use crate::spaces::{make_space, SpaceSpec};
    use alloc::sync::Arc;

    fn interval_pair(z: &[f64]) -> SpacePair {
        let y = make_space(SpaceSpec::Interval, Resolution::new(4).unwrap()).unwrap();
        let zi = z
            .iter()
            .map(|&x| y.net().find_exact(&[x]).unwrap())
            .collect();
        SpacePair::new(Arc::new(y), zi).unwrap()
    }

    #[test]
    fn midpoint_of_two_point_boundary() {
        let pair = interval_pair(&[0.0, 1.0]);
        let f = MapSample::new(
            pair.z_net().clone(),
            pair.y().clone(),
            vec![0.0, 1.0],
            Modulus::Lipschitz(1.0),
        )
        .unwrap();
        let ext = dugundji_extend(&pair, &f).unwrap();
        let mid = pair.y().net().find_exact(&[0.5]).unwrap();
        assert_eq!(ext.value(mid), &[0.5]);
        assert!(ext.check_modulus(0.0));
    }

    #[test]
    fn constant_extends_to_constant() {
        let pair = interval_pair(&[0.0, 0.25, 1.0]);
        let f = MapSample::constant(pair.z_net().clone(), pair.y().clone(), &[0.3]).unwrap();
        let ext = dugundji_extend(&pair, &f).unwrap();
        assert!(ext.values().iter().all(|&v| v == 0.3));
        let ext = small_diameter_extend(&pair, &f, 0.1).unwrap();
        assert_eq!(ext.image_diameter(), 0.0);
    }

    #[test]
    fn diameter_precondition() {
        let pair = interval_pair(&[0.0, 1.0]);
        let f = MapSample::new(
            pair.z_net().clone(),
            pair.y().clone(),
            vec![0.0, 0.2],
            Modulus::Lipschitz(1.0),
        )
        .unwrap();
        assert!(matches!(
            small_diameter_extend(&pair, &f, 0.2),
            Err(Error::DiameterTooLarge { .. })
        ));
        let ext = small_diameter_extend(&pair, &f, 0.5).unwrap();
        assert!(ext.values().iter().all(|&v| (0.0..=0.2).contains(&v)));
    }
}
