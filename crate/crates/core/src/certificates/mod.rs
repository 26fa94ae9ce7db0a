//! Machine-checkable evidence that a map on `Z` does or does not extend over `Y`.

mod build;
mod check;
mod clopen;
mod crossing;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::maps::MapSample;
use crate::metric::Modulus;
use crate::spaces::Retraction;

pub use build::{build_negative_certificate, positive_certificate};
pub use check::check_certificate;
pub use clopen::{clopen_extension, disjointify};
pub use crossing::{crossing_forced, CrossingGraph, Region};

/// Evidence about one map `φ: Z → X` on a pair `(Y, Z)`. Indices named `z…` and
/// entries of `trace`, `brackets` and `cycle` are positions in `Z`; `path` holds
/// indices into the net of `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Certificate {
    /// An extension sampled on all of `Y`.
    Positive {
        values: Vec<f64>,
        modulus: Modulus,
        tolerance: f64,
    },
    /// `z1`, `z2` are joined by a path in `Y` but their images lie in different path
    /// components of `X`.
    PathComponent {
        z1: usize,
        z2: usize,
        path: Vec<usize>,
        labels: [u32; 2],
    },
    /// The preimage of the isolated point `1/k` is not the trace of a clopen set.
    Clopen { k: usize, trace: Vec<usize> },
    /// Every chain joining `φ(a_j)` to `φ(b_j)` meets the region, the brackets converge
    /// to `z0`, and `φ(z0)` stays `separation` away from the region.
    MandatoryCrossing {
        brackets: Vec<[usize; 2]>,
        region: Region,
        z0: usize,
        separation: f64,
    },
    /// `cycle` bounds the triangulated disk in `Y`, while `r ∘ φ` winds around it.
    Winding {
        cycle: Vec<usize>,
        disk: DiskWitness,
        retraction: Retraction,
        expected: i64,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Positive { .. } => "positive",
            Certificate::PathComponent { .. } => "path-component",
            Certificate::Clopen { .. } => "clopen",
            Certificate::MandatoryCrossing { .. } => "mandatory-crossing",
            Certificate::Winding { .. } => "winding",
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Certificate::Positive { .. })
    }

    /// The extension a positive certificate carries.
    pub fn extension(&self, pair: &crate::spaces::SpacePair, phi: &MapSample) -> Option<MapSample> {
        match self {
            Certificate::Positive {
                values, modulus, ..
            } => MapSample::new(
                pair.y().shared_net(),
                phi.codomain().clone(),
                values.clone(),
                modulus.clone(),
            )
            .ok(),
            _ => None,
        }
    }
}

/// A vertex of a disk witness: a net point of `Y` or an explicit point of `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vertex {
    Net(usize),
    Point(Vec<f64>),
}

/// Oriented triangulated disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskWitness {
    pub vertices: Vec<Vertex>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Refuted,
    InvalidCertificate,
    InconsistentInput,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::InvalidCertificate => "invalid-certificate",
            Status::InconsistentInput => "inconsistent-input",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of checking a certificate. Negative verdicts are statements at resolution
/// `epsilon`; `margins` records how much room each quantitative check had.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub kind: String,
    pub epsilon: f64,
    pub trace: Vec<CheckRecord>,
    pub margins: BTreeMap<String, f64>,
}

impl Verdict {
    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }

    /// Smallest recorded margin, if any.
    pub fn margin(&self) -> Option<f64> {
        self.margins.values().copied().reduce(f64::min)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.trace.iter().filter(|c| !c.passed)
    }
}
