use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::{check_modulus_values, Modulus, Net, SpatialIndex};
use crate::spaces::{AnnotatedSpace, SpacePair};

/// A map sampled on a domain net: one codomain point per domain point, plus a
/// declared modulus of continuity.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSample {
    domain: Arc<Net>,
    codomain: Arc<AnnotatedSpace>,
    values: Vec<f64>,
    modulus: Modulus,
}

impl MapSample {
    pub fn new(
        domain: Arc<Net>,
        codomain: Arc<AnnotatedSpace>,
        values: Vec<f64>,
        modulus: Modulus,
    ) -> Result<Self> {
        let cd = codomain.net().dim();
        if values.len() != domain.len() * cd {
            return Err(Error::InvalidArgument(format!(
                "expected {} values of dimension {cd}, got {} coordinates",
                domain.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite map value".into()));
        }
        modulus.validate()?;
        Ok(MapSample {
            domain,
            codomain,
            values,
            modulus,
        })
    }

    /// Samples `f` at every domain point; `f` writes the value into its second argument.
    pub fn from_fn(
        domain: Arc<Net>,
        codomain: Arc<AnnotatedSpace>,
        modulus: Modulus,
        mut f: impl FnMut(usize, &[f64], &mut [f64]),
    ) -> Result<Self> {
        let cd = codomain.net().dim();
        let mut values = alloc::vec![0.0; domain.len() * cd];
        for (i, out) in values.chunks_exact_mut(cd).enumerate() {
            f(i, domain.point(i), out);
        }
        MapSample::new(domain, codomain, values, modulus)
    }

    pub fn constant(
        domain: Arc<Net>,
        codomain: Arc<AnnotatedSpace>,
        value: &[f64],
    ) -> Result<Self> {
        if value.len() != codomain.net().dim() {
            return Err(Error::InvalidArgument(
                "constant has wrong dimension".into(),
            ));
        }
        let values = value
            .iter()
            .copied()
            .cycle()
            .take(domain.len() * value.len())
            .collect();
        MapSample::new(domain, codomain, values, Modulus::Lipschitz(0.0))
    }

    pub fn domain(&self) -> &Net {
        &self.domain
    }

    pub fn shared_domain(&self) -> &Arc<Net> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<AnnotatedSpace> {
        &self.codomain
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn with_modulus(mut self, modulus: Modulus) -> Result<Self> {
        modulus.validate()?;
        self.modulus = modulus;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// Dimension of codomain coordinates.
    pub fn codim(&self) -> usize {
        self.codomain.net().dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        let d = self.codim();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn value_rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks_exact(self.codim())
            .map(|c| c.to_vec())
            .collect()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Codomain distance between the values at `i` and `j`.
    pub fn value_distance(&self, i: usize, j: usize) -> f64 {
        self.codomain
            .net()
            .metric()
            .distance(self.value(i), self.value(j))
    }

    /// Whether `d(f(z), f(z')) ≤ ω(d(z, z')) + slack` on every pair of domain points.
    pub fn check_modulus(&self, slack: f64) -> bool {
        check_modulus_values(
            &self.domain,
            &self.values,
            self.codomain.net().metric(),
            &self.modulus,
            slack,
        )
    }

    /// Largest distance from a value to the codomain net.
    pub fn codomain_gap(&self) -> f64 {
        let net = self.codomain.net();
        let index = SpatialIndex::new(net, net.resolution());
        let mut gap = 0.0f64;
        let mut last: Option<&[f64]> = None;
        for i in 0..self.len() {
            let v = self.value(i);
            if last == Some(v) {
                continue;
            }
            last = Some(v);
            gap = gap.max(index.nearest(v).map_or(f64::INFINITY, |(_, d)| d));
        }
        gap
    }

    /// Diameter of the sampled image.
    pub fn image_diameter(&self) -> f64 {
        let mut rows: Vec<&[f64]> = self.values.chunks_exact(self.codim()).collect();
        rows.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        rows.dedup();
        let metric = self.codomain.net().metric();
        let mut d: f64 = 0.0;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                d = d.max(metric.distance(rows[i], rows[j]));
            }
        }
        d
    }

    /// The map on the sub-net `indices` of the domain, with the same modulus.
    pub fn restrict_to(&self, indices: &[usize]) -> Result<MapSample> {
        let domain = Arc::new(self.domain.select(indices)?);
        let mut values = Vec::with_capacity(indices.len() * self.codim());
        for &i in indices {
            values.extend_from_slice(self.value(i));
        }
        MapSample::new(domain, self.codomain.clone(), values, self.modulus.clone())
    }

    /// Whether `other` samples the same domain net.
    pub fn same_domain(&self, other: &MapSample) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain
    }

    /// Whether `other` maps into the same codomain space.
    pub fn same_codomain(&self, other: &MapSample) -> bool {
        Arc::ptr_eq(&self.codomain, &other.codomain)
            || (self.codomain.name() == other.codomain.name()
                && self.codomain.net() == other.codomain.net())
    }
}

/// `f|_Z` for `f` defined on `pair.y()`.
pub fn restrict(f: &MapSample, pair: &SpacePair) -> Result<MapSample> {
    if !(Arc::ptr_eq(f.shared_domain(), &pair.y().shared_net()) || f.domain() == pair.y().net()) {
        return Err(Error::DomainMismatch(
            "map is not defined on the pair's Y".into(),
        ));
    }
    let mut out = f.restrict_to(pair.z_indices())?;
    out.domain = pair.z_net().clone();
    Ok(out)
}
