use serde::{Deserialize, Serialize};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::{build_epsilon_graph, reachable_avoiding, EpsilonGraph, Net};
use crate::num;

/// A closed half-space style predicate on codomain points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "test")]
pub enum Region {
    /// `p[axis] ≤ bound`
    Below { axis: usize, bound: f64 },
    /// `p[axis] ≥ bound`
    Above { axis: usize, bound: f64 },
    /// `|p[axis]| ≥ bound`
    AbsAbove { axis: usize, bound: f64 },
}

impl Region {
    pub fn axis(&self) -> usize {
        match *self {
            Region::Below { axis, .. }
            | Region::Above { axis, .. }
            | Region::AbsAbove { axis, .. } => axis,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match *self {
            Region::Below { axis, bound } => p[axis] <= bound,
            Region::Above { axis, bound } => p[axis] >= bound,
            Region::AbsAbove { axis, bound } => num::abs(p[axis]) >= bound,
        }
    }

    pub fn mask(&self, net: &Net) -> Vec<bool> {
        net.points().map(|p| self.contains(p)).collect()
    }
}

/// The `2ε`-graph of a codomain net together with a region mask, for repeated
/// crossing queries.
pub struct CrossingGraph {
    graph: EpsilonGraph,
    outside: Vec<bool>,
}

impl CrossingGraph {
    pub fn new(net: &Net, region: &Region) -> Result<Self> {
        if region.axis() >= net.dim() {
            return Err(Error::InvalidArgument(alloc::format!(
                "region axis {} out of range for dimension {}",
                region.axis(),
                net.dim()
            )));
        }
        let graph = build_epsilon_graph(net, 2.0 * net.resolution())?;
        let outside = region.mask(net).into_iter().map(|inside| !inside).collect();
        Ok(CrossingGraph { graph, outside })
    }

    /// Whether every `2ε`-chain from net point `a` to net point `b` meets the region.
    pub fn forced(&self, a: usize, b: usize) -> bool {
        !reachable_avoiding(&self.graph, a, b, &self.outside)
    }

    pub fn region_is_empty(&self) -> bool {
        self.outside.iter().all(|&o| o)
    }
}

/// Whether every `2ε`-chain in `net` from point `a` to point `b` meets `region`.
pub fn crossing_forced(net: &Net, region: &Region, a: usize, b: usize) -> Result<bool> {
    if a >= net.len() || b >= net.len() {
        return Err(Error::InvalidArgument("chain endpoint out of range".into()));
    }
    Ok(CrossingGraph::new(net, region)?.forced(a, b))
}
