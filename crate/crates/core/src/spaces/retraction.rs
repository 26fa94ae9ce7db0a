use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::num;

/// Retraction data `r: U → X` for a catalog space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Retraction {
    /// Convex `X = [lo, hi]`; `U = X` (averages never leave a convex set).
    Interval { lo: f64, hi: f64 },
    /// Convex closed ball; `U = X`.
    Ball { center: Vec<f64>, radius: f64 },
    /// Circle of the given radius; radial projection of the open annulus
    /// `inner < |x − c| < outer`.
    Radial {
        center: Vec<f64>,
        radius: f64,
        inner: f64,
        outer: f64,
    },
    /// Hawaiian earring: fixes the circle `C_k` and sends every other circle to the
    /// origin.
    Collapse { k: usize },
}

const SLOP: f64 = 1e-9;

impl Retraction {
    pub fn name(&self) -> &'static str {
        match self {
            Retraction::Interval { .. } => "interval-identity",
            Retraction::Ball { .. } => "ball-identity",
            Retraction::Radial { .. } => "radial",
            Retraction::Collapse { .. } => "collapse",
        }
    }

    /// `r(p)`, or `None` when `p` lies outside the neighbourhood `U`.
    pub fn apply(&self, p: &[f64]) -> Option<Vec<f64>> {
        match self {
            Retraction::Interval { lo, hi } => {
                let x = p[0];
                (x >= lo - SLOP && x <= hi + SLOP).then(|| alloc::vec![x.clamp(*lo, *hi)])
            }
            Retraction::Ball { center, radius } => {
                let d = dist(p, center);
                if d <= radius + SLOP {
                    if d <= *radius {
                        Some(p.to_vec())
                    } else {
                        Some(scale_from(center, p, radius / d))
                    }
                } else {
                    None
                }
            }
            Retraction::Radial {
                center,
                radius,
                inner,
                outer,
            } => {
                let d = dist(p, center);
                if d > *inner && d < *outer {
                    if d == *radius {
                        Some(p.to_vec())
                    } else {
                        Some(scale_from(center, p, radius / d))
                    }
                } else {
                    None
                }
            }
            Retraction::Collapse { k } => {
                if on_earring_circle(p, *k) {
                    Some(p.to_vec())
                } else {
                    Some(alloc::vec![0.0, 0.0])
                }
            }
        }
    }

    /// Lipschitz constant of `r` on `U` (Euclidean).
    pub fn lipschitz(&self) -> f64 {
        match self {
            Retraction::Interval { .. } | Retraction::Ball { .. } => 1.0,
            Retraction::Radial { radius, inner, .. } => radius / inner,
            Retraction::Collapse { .. } => f64::INFINITY,
        }
    }
}

pub(crate) fn on_earring_circle(p: &[f64], k: usize) -> bool {
    let r = 1.0 / k as f64;
    let d = num::sqrt((p[0] - r) * (p[0] - r) + p[1] * p[1]);
    num::abs(d - r) <= 1e-9
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    num::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

fn scale_from(center: &[f64], p: &[f64], s: f64) -> Vec<f64> {
    center.iter().zip(p).map(|(c, x)| c + (x - c) * s).collect()
}
