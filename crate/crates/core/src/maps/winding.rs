use alloc::format;

use crate::error::{Error, Result};
use crate::num;
use crate::spaces::{earring_circle_count, AnnotatedSpace, Retraction};

/// Winding number of the closed polygon through `points` (last joined to first)
/// around `center`. Every step must turn by less than `π` as seen from `center`.
pub fn winding_number(points: &[[f64; 2]], center: [f64; 2]) -> Result<i64> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty loop".into()));
    }
    let angle = |p: &[f64; 2]| {
        let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
        if dx == 0.0 && dy == 0.0 {
            None
        } else {
            Some(num::atan2(dy, dx))
        }
    };
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        let q = &points[(i + 1) % points.len()];
        let (Some(a), Some(b)) = (angle(p), angle(q)) else {
            return Err(Error::InvalidArgument(format!(
                "loop passes through the centre at position {i}"
            )));
        };
        let step = num::wrap_angle(b - a);
        if num::abs(step) >= core::f64::consts::PI {
            return Err(Error::LoopTooCoarse { position: i, step });
        }
        total += step;
    }
    let turns = total / core::f64::consts::TAU;
    let rounded = num::round(turns);
    debug_assert!(num::abs(turns - rounded) < 1e-6);
    Ok(rounded as i64)
}

/// The retraction of the Hawaiian earring onto its `k`-th circle.
pub fn collapse_retraction(earring: &AnnotatedSpace, k: usize) -> Result<Retraction> {
    let count = earring_circle_count(earring);
    if k == 0 {
        return Err(Error::InvalidArgument("circles are numbered from 1".into()));
    }
    if k > count {
        return Err(Error::BeyondTruncation {
            index: k,
            bound: count,
        });
    }
    Ok(Retraction::Collapse { k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn circle(n: usize, turns: i64) -> Vec<[f64; 2]> {
        (0..n)
            .map(|j| {
                let a = core::f64::consts::TAU * turns as f64 * j as f64 / n as f64;
                [num::cos(a), num::sin(a)]
            })
            .collect()
    }

    #[test]
    fn counts_turns() {
        assert_eq!(winding_number(&circle(64, 1), [0.0, 0.0]).unwrap(), 1);
        assert_eq!(winding_number(&circle(64, -2), [0.0, 0.0]).unwrap(), -2);
        assert_eq!(winding_number(&circle(64, 1), [3.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn coarse_loop_is_rejected() {
        let square = [[1.0, 0.0], [-1.0, 0.0]];
        assert!(matches!(
            winding_number(&square, [0.0, 0.0]),
            Err(Error::LoopTooCoarse { .. })
        ));
    }
}
