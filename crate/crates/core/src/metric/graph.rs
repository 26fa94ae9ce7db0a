use core::cmp::Ordering;

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::index::SpatialIndex;
use super::net::Net;
use crate::error::{Error, Result};

/// The graph on a net joining every pair of distinct points at distance ≤ `scale`,
/// stored as compressed adjacency lists.
#[derive(Debug, Clone)]
pub struct EpsilonGraph {
    scale: f64,
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl EpsilonGraph {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
            .iter()
            .map(|&j| j as usize)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).any(|k| k == j)
    }

    /// Unordered edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.len() {
            for j in self.neighbors(i) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn build_epsilon_graph(net: &Net, scale: f64) -> Result<EpsilonGraph> {
    if scale.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::InvalidArgument(format!(
            "graph scale must be positive, got {scale}"
        )));
    }
    let index = SpatialIndex::new(net, scale);
    let mut offsets = Vec::with_capacity(net.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0u32);
    let mut row = Vec::new();
    for i in 0..net.len() {
        row.clear();
        index.for_each_within(net.point(i), scale, |j, _| {
            if j != i {
                row.push(j as u32);
            }
        });
        row.sort_unstable();
        targets.extend_from_slice(&row);
        offsets.push(targets.len() as u32);
    }
    Ok(EpsilonGraph {
        scale,
        offsets,
        targets,
    })
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    /// Labels each element by the smallest element of its set.
    pub fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut min_of_root = vec![usize::MAX; n];
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        for (i, &r) in roots.iter().enumerate() {
            if i < min_of_root[r] {
                min_of_root[r] = i;
            }
        }
        roots.into_iter().map(|r| min_of_root[r]).collect()
    }
}

/// Connected components; each point is labelled by the smallest index in its component.
pub fn graph_components(g: &EpsilonGraph) -> Vec<usize> {
    let mut uf = UnionFind::new(g.len());
    for i in 0..g.len() {
        for j in g.neighbors(i) {
            uf.union(i, j);
        }
    }
    uf.canonical_labels()
}

/// Same labelling as `graph_components(build_epsilon_graph(net, scale))` without
/// materialising the edge lists.
pub fn components_at_scale(net: &Net, scale: f64) -> Result<Vec<usize>> {
    if scale.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::InvalidArgument(format!(
            "graph scale must be positive, got {scale}"
        )));
    }
    let index = SpatialIndex::new(net, scale);
    let mut uf = UnionFind::new(net.len());
    for i in 0..net.len() {
        index.for_each_within(net.point(i), scale, |j, _| {
            if j > i {
                uf.union(i, j);
            }
        });
    }
    Ok(uf.canonical_labels())
}

/// Whether `dst` is reachable from `src` using only nodes where `allowed` is true.
pub fn reachable_avoiding(g: &EpsilonGraph, src: usize, dst: usize, allowed: &[bool]) -> bool {
    if !allowed[src] || !allowed[dst] {
        return false;
    }
    if src == dst {
        return true;
    }
    let mut seen = vec![false; g.len()];
    let mut queue = VecDeque::new();
    seen[src] = true;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if allowed[v] && !seen[v] {
                if v == dst {
                    return true;
                }
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

/// A fewest-edges path from `src` to `dst` through nodes where `allowed` is true.
pub fn shortest_path_avoiding(
    g: &EpsilonGraph,
    src: usize,
    dst: usize,
    allowed: &[bool],
) -> Option<Vec<usize>> {
    if !allowed[src] || !allowed[dst] {
        return None;
    }
    let mut parent = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::new();
    parent[src] = src;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        if u == dst {
            let mut path = vec![dst];
            let mut v = dst;
            while v != src {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for v in g.neighbors(u) {
            if allowed[v] && parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Max over `src → dst` paths of the minimum height along the path, or `−∞` when
/// `dst` is unreachable. Binary search over the sorted heights with a reachability
/// query per probe.
pub fn widest_path_value(g: &EpsilonGraph, src: usize, dst: usize, height: &[f64]) -> Result<f64> {
    let n = g.len();
    if src >= n || dst >= n {
        return Err(Error::InvalidArgument(format!(
            "endpoint out of range ({src}, {dst}) for {n} nodes"
        )));
    }
    if height.len() != n {
        return Err(Error::InvalidArgument(
            "height table length mismatch".into(),
        ));
    }
    let mut levels: Vec<f64> = height.to_vec();
    levels.sort_by(|a, b| a.total_cmp(b));
    levels.dedup();
    let cap = height[src].min(height[dst]);
    let usable = levels.partition_point(|&h| h <= cap);
    let probe = |t: f64| {
        let allowed: Vec<bool> = height.iter().map(|&h| h >= t).collect();
        reachable_avoiding(g, src, dst, &allowed)
    };
    if usable == 0 || !probe(levels[0]) {
        return Ok(f64::NEG_INFINITY);
    }
    // invariant: probe(levels[lo]) holds, probe(levels[hi]) fails (hi may be `usable`)
    let (mut lo, mut hi) = (0usize, usable);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if probe(levels[mid]) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(levels[lo])
}
