use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapSample;

/// Net sup distance `v` with the certified enclosure `[v, v + (ω_f + ω_g)(ε)]` of the
/// true sup distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupBound {
    pub value: f64,
    pub upper: f64,
}

/// `max_z d_X(f(z), g(z))` over the shared domain net.
pub fn sup_distance(f: &MapSample, g: &MapSample) -> Result<f64> {
    if !f.same_domain(g) {
        return Err(Error::DomainMismatch(
            "sup distance between maps on different nets".into(),
        ));
    }
    if !f.same_codomain(g) {
        return Err(Error::DomainMismatch(
            "sup distance between maps into different spaces".into(),
        ));
    }
    let metric = f.codomain().net().metric();
    Ok((0..f.len())
        .map(|i| metric.distance(f.value(i), g.value(i)))
        .fold(0.0, f64::max))
}

pub fn sup_distance_bound(f: &MapSample, g: &MapSample) -> Result<SupBound> {
    let value = sup_distance(f, g)?;
    let eps = f.domain().resolution();
    Ok(SupBound {
        value,
        upper: value + f.modulus().eval(eps) + g.modulus().eval(eps),
    })
}
