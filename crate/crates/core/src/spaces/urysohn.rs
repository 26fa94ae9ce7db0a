use core::cmp::Ordering;

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::annotated::AnnotatedSpace;
use super::catalog::{make_space, SpaceSpec};
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::maps::MapSample;
use crate::metric::{Modulus, SpatialIndex};

/// `f(y) = d(y, Y∖V) / (d(y, Z) + d(y, Y∖V))` on the net of `y`, valued in the
/// catalog interval. `z ⊆ v` are net indices.
pub fn urysohn(y: &AnnotatedSpace, z: &[usize], v: &[usize]) -> Result<MapSample> {
    let n = y.len();
    let mut in_v = alloc::vec![false; n];
    for &i in v {
        *in_v
            .get_mut(i)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("V index {i} out of range")))? =
            true;
    }
    if let Some(&i) = z.iter().find(|&&i| i >= n || !in_v[i]) {
        return Err(Error::InvalidArgument(alloc::format!(
            "Z point {i} is not in V"
        )));
    }
    let outside: Vec<usize> = (0..n).filter(|&i| !in_v[i]).collect();
    let net = y.net();
    let zi = SpatialIndex::over(net, z, y.eps());
    let oi = SpatialIndex::over(net, &outside, y.eps());
    let dist = |index: &SpatialIndex, i: usize| {
        index
            .nearest(net.point(i))
            .map_or(f64::INFINITY, |(_, d)| d)
    };
    let separation = z
        .iter()
        .map(|&i| dist(&oi, i))
        .fold(f64::INFINITY, f64::min);
    if separation.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::DegenerateSeparation);
    }
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let a = dist(&oi, i);
            let b = dist(&zi, i);
            match (a.is_finite(), b.is_finite()) {
                (false, _) => 1.0,
                (true, false) => 0.0,
                _ => a / (a + b),
            }
        })
        .collect();
    let lipschitz = if separation.is_finite() {
        2.0 / separation
    } else {
        0.0
    };
    let res = Resolution::from_eps(y.eps())?;
    let codomain = Arc::new(make_space(SpaceSpec::Interval, res)?);
    MapSample::new(
        y.shared_net(),
        codomain,
        values,
        Modulus::Lipschitz(lipschitz),
    )
}
