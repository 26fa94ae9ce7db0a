use core::cmp::Ordering;

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num;

/// A metric on ambient coordinates.
///
/// `Matrix` nets use the point index as their single coordinate. `Product` takes the
/// max over coordinate blocks. `Cone` reads the last coordinate as the cone height
/// `t ∈ [0,1]` and collapses the level `t = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Matrix(Vec<Vec<f64>>),
    Product(Vec<Block>),
    Cone(Box<Metric>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub dim: usize,
    pub metric: Metric,
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => {
                let mut s = 0.0;
                for (x, y) in a.iter().zip(b) {
                    let d = x - y;
                    s += d * d;
                }
                num::sqrt(s)
            }
            Metric::Matrix(m) => m[a[0] as usize][b[0] as usize],
            Metric::Product(blocks) => {
                let mut off = 0;
                let mut best: f64 = 0.0;
                for blk in blocks {
                    let d = blk
                        .metric
                        .distance(&a[off..off + blk.dim], &b[off..off + blk.dim]);
                    if d > best {
                        best = d;
                    }
                    off += blk.dim;
                }
                best
            }
            Metric::Cone(base) => {
                let n = a.len() - 1;
                let (t, s) = (a[n], b[n]);
                let direct = base.distance(&a[..n], &b[..n]).max(num::abs(t - s));
                let via_apex = (1.0 - t) + (1.0 - s);
                direct.min(via_apex)
            }
        }
    }

    /// Whether `distance(a, b) ≥ max_i |a_i − b_i|`, which lets grid indexing prune.
    pub fn dominates_sup_norm(&self) -> bool {
        match self {
            Metric::Euclidean => true,
            Metric::Product(blocks) => blocks.iter().all(|b| b.metric.dominates_sup_norm()),
            Metric::Matrix(_) | Metric::Cone(_) => false,
        }
    }

    /// Whether `distance(a, b) ≤ |a − b|` (Euclidean norm of the coordinate difference).
    pub fn bounded_by_euclidean(&self) -> bool {
        match self {
            Metric::Euclidean => true,
            Metric::Product(blocks) => blocks.iter().all(|b| b.metric.bounded_by_euclidean()),
            Metric::Cone(base) => base.bounded_by_euclidean(),
            Metric::Matrix(_) => false,
        }
    }

    /// Whether uniform scaling of coordinates scales distances by the same factor.
    pub fn is_homogeneous(&self) -> bool {
        match self {
            Metric::Euclidean => true,
            Metric::Product(blocks) => blocks.iter().all(|b| b.metric.is_homogeneous()),
            Metric::Matrix(_) | Metric::Cone(_) => false,
        }
    }
}

/// A finite point set with its metric and the resolution `ε` at which it samples the
/// intended space.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    dim: usize,
    coords: Vec<f64>,
    resolution: f64,
    metric: Metric,
}

impl Net {
    pub fn new(dim: usize, coords: Vec<f64>, resolution: f64, metric: Metric) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("net dimension must be ≥ 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "coordinate count {} is not a multiple of dimension {dim}",
                coords.len()
            )));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let net = Net {
            dim,
            coords,
            resolution,
            metric,
        };
        net.check_metric_shape()?;
        Ok(net)
    }

    pub fn from_points(points: &[Vec<f64>], resolution: f64, metric: Metric) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(1);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidArgument("ragged point list".into()));
        }
        let coords = points.iter().flat_map(|p| p.iter().copied()).collect();
        Net::new(dim, coords, resolution, metric)
    }

    fn check_metric_shape(&self) -> Result<()> {
        fn block_dims(m: &Metric) -> Option<usize> {
            match m {
                Metric::Product(bs) => Some(bs.iter().map(|b| b.dim).sum()),
                _ => None,
            }
        }
        match &self.metric {
            Metric::Matrix(m) => {
                if self.dim != 1 {
                    return Err(Error::InvalidArgument(
                        "matrix nets use one index coordinate".into(),
                    ));
                }
                let n = self.len();
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidArgument(format!(
                        "distance matrix must be {n}×{n}"
                    )));
                }
                for (i, p) in self.coords.iter().enumerate() {
                    if *p != i as f64 {
                        return Err(Error::InvalidArgument(
                            "matrix net coordinates must be the point indices".into(),
                        ));
                    }
                }
            }
            Metric::Product(_) => {
                if block_dims(&self.metric) != Some(self.dim) {
                    return Err(Error::InvalidArgument(
                        "product blocks do not cover the coordinates".into(),
                    ));
                }
            }
            Metric::Cone(_) => {
                if self.dim < 2 {
                    return Err(Error::InvalidArgument(
                        "cone nets need a base coordinate and a height".into(),
                    ));
                }
            }
            Metric::Euclidean => {}
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric.distance(self.point(i), self.point(j))
    }

    #[inline]
    pub fn distance_to(&self, i: usize, p: &[f64]) -> f64 {
        self.metric.distance(self.point(i), p)
    }

    /// Net restricted to the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Net> {
        if let Metric::Matrix(m) = &self.metric {
            let sub: Vec<Vec<f64>> = indices
                .iter()
                .map(|&i| indices.iter().map(|&j| m[i][j]).collect())
                .collect();
            let coords = (0..indices.len()).map(|i| i as f64).collect();
            return Net::new(1, coords, self.resolution, Metric::Matrix(sub));
        }
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidArgument(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        Net::new(self.dim, coords, self.resolution, self.metric.clone())
    }

    pub fn with_resolution(mut self, resolution: f64) -> Result<Net> {
        if resolution.partial_cmp(&0.0) != Some(Ordering::Greater) {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        self.resolution = resolution;
        Ok(self)
    }

    /// Index of a point with exactly these coordinates.
    pub fn find_exact(&self, p: &[f64]) -> Option<usize> {
        self.points().position(|q| q == p)
    }

    /// Spot-checks the metric axioms on a deterministic sample of triples.
    pub fn check_metric_axioms(&self, samples: usize) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Ok(());
        }
        let tol = 1e-12;
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        for _ in 0..samples {
            let (i, j, k) = (next(), next(), next());
            let dij = self.distance(i, j);
            if !dij.is_finite() || dij < 0.0 {
                return Err(Error::InvalidArgument(format!("bad distance d({i},{j})")));
            }
            if self.distance(i, i) != 0.0 {
                return Err(Error::InvalidArgument(format!("d({i},{i}) ≠ 0")));
            }
            if num::abs(dij - self.distance(j, i)) > tol {
                return Err(Error::InvalidArgument(format!("asymmetric d({i},{j})")));
            }
            if dij > self.distance(i, k) + self.distance(k, j) + tol {
                return Err(Error::InvalidArgument(format!(
                    "triangle inequality fails on ({i},{j},{k})"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cone_metric_collapses_top_level() {
        let m = Metric::Cone(Box::new(Metric::Euclidean));
        assert_eq!(m.distance(&[0.0, 1.0], &[5.0, 1.0]), 0.0);
        assert_eq!(m.distance(&[0.0, 0.25], &[3.0, 1.0]), 0.75);
        assert_eq!(m.distance(&[0.0, 0.0], &[0.5, 0.0]), 0.5);
    }

    #[test]
    fn product_metric_is_max() {
        let m = Metric::Product(vec![
            Block {
                dim: 1,
                metric: Metric::Euclidean,
            },
            Block {
                dim: 2,
                metric: Metric::Euclidean,
            },
        ]);
        assert_eq!(m.distance(&[0.0, 0.0, 0.0], &[0.5, 0.3, 0.4]), 0.5);
        assert_eq!(m.distance(&[0.0, 0.0, 0.0], &[0.1, 0.6, 0.8]), 1.0);
    }

    #[test]
    fn matrix_net_validation() {
        let m = Metric::Matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(Net::new(1, vec![0.0, 1.0], 0.5, m.clone()).is_ok());
        assert!(Net::new(1, vec![0.0, 2.0], 0.5, m).is_err());
    }

    #[test]
    fn rejects_nonpositive_resolution() {
        assert!(Net::new(1, vec![0.0], 0.0, Metric::Euclidean).is_err());
    }

    #[test]
    fn triangle_violation_detected() {
        let m = Metric::Matrix(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ]);
        let net = Net::new(1, vec![0.0, 1.0, 2.0], 1.0, m).unwrap();
        assert!(net.check_metric_axioms(500).is_err());
    }
}
