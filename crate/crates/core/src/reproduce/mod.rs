//! Named end-to-end runs: build a pair and a sequence of maps, certify every member
//! and collect the outcome in a [`Report`].

mod anr;
mod catalog;
mod local;

pub use catalog::member_certificate;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::certificates::{check_certificate, Certificate, CheckRecord, Status, Verdict};
use crate::dyadic::Resolution;
use crate::error::{Error, Result};
use crate::maps::{FamilyName, MapSample};
use crate::spaces::SpacePair;

/// One line of a report table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// `n=…`, `limit`, or a short description for single-map runs.
    pub label: String,
    pub n: Option<usize>,
    /// Sup distance to the limit map, when the row belongs to a sequence.
    pub sup: Option<f64>,
    pub certificate: String,
    pub status: Status,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub example: String,
    pub anchor: String,
    pub resolution: Resolution,
    pub n_max: usize,
    pub rows: Vec<Row>,
    /// Example-specific checks beyond the certificates.
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
    pub conclusion: String,
    pub passed: bool,
}

impl Report {
    fn new(entry: &ExampleInfo, params: &Params) -> Self {
        Report {
            example: entry.name.into(),
            anchor: entry.anchor.into(),
            resolution: params.resolution,
            n_max: params.n_max,
            rows: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            conclusion: String::new(),
            passed: false,
        }
    }

    fn check(&mut self, check: &str, passed: bool, detail: String) {
        self.checks.push(CheckRecord {
            check: check.into(),
            passed,
            detail,
        });
    }

    /// Certifies `phi` on `pair` and appends the row.
    fn certify(
        &mut self,
        label: String,
        n: Option<usize>,
        sup: Option<f64>,
        pair: &SpacePair,
        phi: &MapSample,
        cert: &Certificate,
    ) -> Verdict {
        let verdict = check_certificate(pair, phi, cert);
        self.rows.push(Row {
            label,
            n,
            sup,
            certificate: cert.kind().into(),
            status: verdict.status,
            margin: verdict.margin(),
        });
        verdict
    }

    /// Marks the report as passed iff every row verified, every check passed and the
    /// sup column strictly decreases.
    fn finish(mut self, conclusion: String) -> Self {
        let sups: Vec<f64> = self.rows.iter().filter_map(|r| r.sup).collect();
        if sups.len() > 1 {
            let decreasing = sups.windows(2).all(|w| w[1] < w[0]);
            self.check(
                "sup-decreasing",
                decreasing,
                format!(
                    "sup column runs from {:.6} to {:.6}",
                    sups[0],
                    sups[sups.len() - 1]
                ),
            );
        }
        self.passed = !self.rows.is_empty()
            && self.rows.iter().all(|r| r.status == Status::Verified)
            && self.checks.iter().all(|c| c.passed);
        self.conclusion = if self.passed {
            conclusion
        } else {
            format!("FAILED: {conclusion}")
        };
        self
    }

    /// The worst status over all rows, used for exit codes.
    pub fn worst_status(&self) -> Status {
        let rank = |s: Status| match s {
            Status::Verified => 0,
            Status::Refuted => 1,
            Status::InvalidCertificate => 2,
            Status::InconsistentInput => 3,
        };
        let worst = self
            .rows
            .iter()
            .map(|r| r.status)
            .max_by_key(|&s| rank(s))
            .unwrap_or(Status::Verified);
        if worst == Status::Verified && !self.passed {
            Status::Refuted
        } else {
            worst
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub resolution: Resolution,
    pub n_max: usize,
}

/// A runnable example with the result it reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExampleInfo {
    pub name: &'static str,
    /// What the run demonstrates.
    pub anchor: &'static str,
    pub default_exponent: u32,
    pub default_n_max: usize,
}

impl ExampleInfo {
    pub fn default_params(&self) -> Params {
        Params {
            resolution: Resolution::new(self.default_exponent).expect("valid default"),
            n_max: self.default_n_max,
        }
    }
}

const EXAMPLES: [ExampleInfo; 13] = [
    ExampleInfo {
        name: "pathcomp",
        anchor: "sequence in one path component with limit outside it: each map extends, the limit does not",
        default_exponent: 8,
        default_n_max: 15,
    },
    ExampleInfo {
        name: "sine-not-eclosed",
        anchor: "topologist's sine curve is not e-closed",
        default_exponent: 8,
        default_n_max: 15,
    },
    ExampleInfo {
        name: "sine-not-eopen",
        anchor: "topologist's sine curve is not e-open",
        default_exponent: 8,
        default_n_max: 15,
    },
    ExampleInfo {
        name: "comb",
        anchor: "comb space is path-connected but neither e-open nor e-closed",
        default_exponent: 8,
        default_n_max: 20,
    },
    ExampleInfo {
        name: "ndagger-not-eopen",
        anchor: "convergent sequence space is not e-open",
        default_exponent: 8,
        default_n_max: 20,
    },
    ExampleInfo {
        name: "ndagger-eclosed",
        anchor: "convergent sequence space is e-closed (clopen intersection property)",
        default_exponent: 6,
        default_n_max: 10,
    },
    ExampleInfo {
        name: "hawaii",
        anchor: "Hawaiian earring is not e-open: the limit extends, no member does",
        default_exponent: 8,
        default_n_max: 10,
    },
    ExampleInfo {
        name: "anr-eopen",
        anchor: "ANRs are e-open: extend over N x Y and restrict to the level 1/n",
        default_exponent: 4,
        default_n_max: 16,
    },
    ExampleInfo {
        name: "eop-homotopy",
        anchor: "uniformly close maps into an e-open space are eventually homotopic",
        default_exponent: 5,
        default_n_max: 16,
    },
    ExampleInfo {
        name: "anr-eclosed",
        anchor: "ANRs are e-closed: glue a close extension to a neighbourhood extension",
        default_exponent: 5,
        default_n_max: 12,
    },
    ExampleInfo {
        name: "loc-ext",
        anchor: "small maps into an e-open space have small extensions",
        default_exponent: 4,
        default_n_max: 8,
    },
    ExampleInfo {
        name: "cone-contraction",
        anchor: "e-open spaces are locally contractible relative to the basepoint",
        default_exponent: 5,
        default_n_max: 1,
    },
    ExampleInfo {
        name: "equiconnected",
        anchor: "e-open spaces are locally equiconnected",
        default_exponent: 5,
        default_n_max: 1,
    },
];

pub fn list_examples() -> &'static [ExampleInfo] {
    &EXAMPLES
}

pub fn example_info(name: &str) -> Result<&'static ExampleInfo> {
    EXAMPLES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownName(name.into()))
}

/// Runs the named example. Verification failures are reported in the returned
/// [`Report`]; errors mean the run could not be set up.
pub fn run_example(name: &str, params: Params) -> Result<Report> {
    let entry = example_info(name)?;
    if params.n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let report = Report::new(entry, &params);
    match name {
        "anr-eopen" => anr::anr_eopen(report, params),
        "eop-homotopy" => anr::eop_homotopy(report, params),
        "anr-eclosed" => anr::anr_eclosed(report, params),
        "loc-ext" => local::loc_ext(report, params),
        "cone-contraction" => local::cone_contraction_run(report, params),
        "equiconnected" => local::equiconnected(report, params),
        _ => catalog::run_family(report, name, params),
    }
}

/// The catalog family behind a sequence example, if it has one.
pub fn example_family_name(name: &str) -> Option<FamilyName> {
    catalog::family_of(name).ok()
}

fn row_label(n: usize) -> String {
    format!("n={n}")
}

fn limit_label() -> String {
    "limit".into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_passes_at_coarse_settings() {
        for info in list_examples() {
            let defaults = info.default_params();
            let params = Params {
                resolution: Resolution::new(info.default_exponent.min(5)).unwrap(),
                n_max: defaults.n_max.min(6),
            };
            let report = run_example(info.name, params).unwrap();
            let bad: Vec<_> = report
                .rows
                .iter()
                .filter(|r| r.status != Status::Verified)
                .map(|r| (&r.label, r.status))
                .collect();
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
            assert!(
                report.passed,
                "{}: rows {bad:?} checks {failed:?}",
                info.name
            );
        }
    }
}
