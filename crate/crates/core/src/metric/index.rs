use alloc::vec::Vec;

use hashbrown::HashMap;

use super::net::Net;
use crate::num;

const MAX_GRID_DIM: usize = 4;

type CellKey = [i64; MAX_GRID_DIM];

/// Range and nearest-neighbour queries over (a subset of) a net.
///
/// Uses a uniform grid when the metric dominates the sup norm of coordinate
/// differences and the dimension is at most four; otherwise scans linearly.
pub struct SpatialIndex<'a> {
    net: &'a Net,
    members: Vec<u32>,
    grid: Option<Grid>,
}

struct Grid {
    cell: f64,
    dim: usize,
    order: Vec<u32>,
    cells: HashMap<CellKey, (u32, u32)>,
}

impl Grid {
    fn key(&self, p: &[f64], shift: f64) -> CellKey {
        let mut k = [0i64; MAX_GRID_DIM];
        for (d, x) in p.iter().enumerate().take(self.dim) {
            k[d] = num::floor((x + shift) / self.cell) as i64;
        }
        k
    }
}

impl<'a> SpatialIndex<'a> {
    pub fn new(net: &'a Net, cell: f64) -> Self {
        let members: Vec<u32> = (0..net.len() as u32).collect();
        Self::build(net, members, cell)
    }

    /// Index over `subset` only; queries still report global net indices.
    pub fn over(net: &'a Net, subset: &[usize], cell: f64) -> Self {
        let members = subset.iter().map(|&i| i as u32).collect();
        Self::build(net, members, cell)
    }

    fn build(net: &'a Net, members: Vec<u32>, cell: f64) -> Self {
        let usable = net.metric().dominates_sup_norm() && net.dim() <= MAX_GRID_DIM && cell > 0.0;
        let grid = usable.then(|| {
            let mut grid = Grid {
                cell,
                dim: net.dim(),
                order: Vec::new(),
                cells: HashMap::new(),
            };
            let mut keyed: Vec<(CellKey, u32)> = members
                .iter()
                .map(|&i| (grid.key(net.point(i as usize), 0.0), i))
                .collect();
            keyed.sort_unstable();
            let mut start = 0usize;
            while start < keyed.len() {
                let mut end = start + 1;
                while end < keyed.len() && keyed[end].0 == keyed[start].0 {
                    end += 1;
                }
                grid.cells
                    .insert(keyed[start].0, (start as u32, (end - start) as u32));
                start = end;
            }
            grid.order = keyed.into_iter().map(|(_, i)| i).collect();
            grid
        });
        SpatialIndex { net, members, grid }
    }

    pub fn net(&self) -> &'a Net {
        self.net
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Calls `f(index, distance)` for every member within distance `r` of `p`.
    pub fn for_each_within<F: FnMut(usize, f64)>(&self, p: &[f64], r: f64, mut f: F) {
        if let Some(grid) = &self.grid {
            let lo = grid.key(p, -r);
            let hi = grid.key(p, r);
            let mut volume: u128 = 1;
            for d in 0..grid.dim {
                volume = volume.saturating_mul((hi[d] - lo[d] + 1) as u128);
            }
            if volume <= grid.cells.len() as u128 {
                let mut key = lo;
                loop {
                    if let Some(&(s, l)) = grid.cells.get(&key) {
                        for &i in &grid.order[s as usize..(s + l) as usize] {
                            let d = self.net.distance_to(i as usize, p);
                            if d <= r {
                                f(i as usize, d);
                            }
                        }
                    }
                    // odometer increment over the cell box
                    let mut d = 0;
                    loop {
                        if d == grid.dim {
                            return;
                        }
                        if key[d] < hi[d] {
                            key[d] += 1;
                            break;
                        }
                        key[d] = lo[d];
                        d += 1;
                    }
                }
            }
        }
        for &i in &self.members {
            let d = self.net.distance_to(i as usize, p);
            if d <= r {
                f(i as usize, d);
            }
        }
    }

    pub fn within(&self, p: &[f64], r: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        self.for_each_within(p, r, |i, d| out.push((i, d)));
        out
    }

    /// Nearest member to `p` (smallest index on ties).
    pub fn nearest(&self, p: &[f64]) -> Option<(usize, f64)> {
        if self.members.is_empty() {
            return None;
        }
        let pick = |best: &mut Option<(usize, f64)>, i: usize, d: f64| match best {
            Some((bi, bd)) if d > *bd || (d == *bd && i >= *bi) => {}
            _ => *best = Some((i, d)),
        };
        if let Some(grid) = &self.grid {
            let mut r = grid.cell;
            loop {
                let mut best = None;
                self.for_each_within(p, r, |i, d| pick(&mut best, i, d));
                if best.is_some() {
                    return best;
                }
                r *= 2.0;
                if !r.is_finite() {
                    break;
                }
            }
        }
        let mut best = None;
        for &i in &self.members {
            pick(&mut best, i as usize, self.net.distance_to(i as usize, p));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;
    use alloc::vec;

    fn line(n: usize) -> Net {
        let coords = (0..n).map(|i| i as f64 / n as f64).collect();
        Net::new(1, coords, 1.0 / n as f64, Metric::Euclidean).unwrap()
    }

    #[test]
    fn grid_matches_scan() {
        let net = line(100);
        let idx = SpatialIndex::new(&net, 0.05);
        let mut got: Vec<usize> = idx.within(&[0.5], 0.031).into_iter().map(|x| x.0).collect();
        got.sort();
        let want: Vec<usize> = (0..100)
            .filter(|&i| net.distance_to(i, &[0.5]) <= 0.031)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn nearest_over_subset() {
        let net = line(10);
        let idx = SpatialIndex::over(&net, &[0, 9], 0.1);
        assert_eq!(idx.nearest(&[0.3]).unwrap().0, 0);
        assert_eq!(idx.nearest(&[0.7]).unwrap().0, 9);
        let empty = SpatialIndex::over(&net, &[], 0.1);
        assert!(empty.nearest(&[0.0]).is_none());
        let _ = vec![0u8];
    }
}
