use alloc::vec::Vec;

use crate::num;

/// A polyline traversed at constant speed over a parameter interval `[a, b]`.
/// The endpoints are returned exactly at `t = a` and `t = b`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Polyline {
    points: Vec<Vec<f64>>,
    cumulative: Vec<f64>,
}

impl Polyline {
    pub(crate) fn new(points: Vec<Vec<f64>>) -> Self {
        let mut cumulative = Vec::with_capacity(points.len());
        let mut total = 0.0;
        cumulative.push(0.0);
        for w in points.windows(2) {
            total += euclid(&w[0], &w[1]);
            cumulative.push(total);
        }
        Polyline { points, cumulative }
    }

    pub(crate) fn length(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    pub(crate) fn first(&self) -> &[f64] {
        &self.points[0]
    }

    pub(crate) fn last(&self) -> &[f64] {
        &self.points[self.points.len() - 1]
    }

    /// Point at parameter `t ∈ [a, b]`.
    pub(crate) fn at(&self, a: f64, b: f64, t: f64, out: &mut [f64]) {
        if t <= a || self.length() == 0.0 {
            out.copy_from_slice(self.first());
            return;
        }
        if t >= b {
            out.copy_from_slice(self.last());
            return;
        }
        let s = (t - a) / (b - a) * self.length();
        let i = self
            .cumulative
            .partition_point(|&c| c <= s)
            .clamp(1, self.points.len() - 1);
        let (c0, c1) = (self.cumulative[i - 1], self.cumulative[i]);
        let lambda = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        for (o, (p, q)) in out
            .iter_mut()
            .zip(self.points[i - 1].iter().zip(&self.points[i]))
        {
            *o = p + lambda * (q - p);
        }
    }
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    num::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// `k` with `t ∈ [1/(k+1), 1/k]`, for `0 < t ≤ 1`.
pub(crate) fn reciprocal_bracket(t: f64) -> usize {
    let mut k = num::floor(1.0 / t).max(1.0) as usize;
    while k > 1 && 1.0 / (k as f64) < t {
        k -= 1;
    }
    while 1.0 / ((k + 1) as f64) > t {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_speed_and_exact_ends() {
        let p = Polyline::new(vec![
            vec![0.0, 1.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ]);
        let mut out = [0.0; 2];
        p.at(0.5, 1.0, 0.75, &mut out);
        assert_eq!(out, [0.5, 0.0]);
        p.at(0.5, 1.0, 1.0, &mut out);
        assert_eq!(out, [1.0, 1.0]);
        p.at(0.5, 1.0, 0.5, &mut out);
        assert_eq!(out, [0.0, 1.0]);
    }

    #[test]
    fn brackets_contain_their_argument() {
        for k in 1..300usize {
            let t = 1.0 / k as f64;
            let j = reciprocal_bracket(t);
            assert!(1.0 / (j + 1) as f64 <= t && t <= 1.0 / j as f64);
            let mid = 0.5 * (1.0 / k as f64 + 1.0 / (k + 1) as f64);
            assert_eq!(reciprocal_bracket(mid), k);
        }
    }
}
