use alloc::format;
use alloc::string::String;

use super::{limit_label, row_label, Params, Report};
use crate::certificates::{build_negative_certificate, positive_certificate, Certificate};
use crate::error::{Error, Result};
use crate::maps::{example_family, explicit_extension, FamilyName, MapFamily, Member};
use crate::metric::sup_distance;

pub(super) fn family_of(example: &str) -> Result<FamilyName> {
    Ok(match example {
        "pathcomp" => FamilyName::Pathcomp,
        "sine-not-eclosed" => FamilyName::SineEclosed,
        "sine-not-eopen" => FamilyName::SineEopen,
        "comb" => FamilyName::Comb,
        "ndagger-not-eopen" => FamilyName::NdaggerEopen,
        "ndagger-eclosed" => FamilyName::NdaggerEclosed,
        "hawaii" => FamilyName::Hawaii,
        other => return Err(Error::UnknownName(other.into())),
    })
}

/// Which side of the dichotomy each member is on.
pub(crate) fn extendible(name: FamilyName, member: Member) -> bool {
    use FamilyName::*;
    match member {
        Member::N(_) => !matches!(name, SineEopen | NdaggerEopen | Hawaii),
        Member::Limit => !matches!(name, Pathcomp | SineEclosed | Comb),
    }
}

fn side(ok: bool) -> &'static str {
    if ok {
        "extendible"
    } else {
        "not extendible"
    }
}

/// The certificate a run issues for `member`: the explicit extension on the
/// extendible side, the family's obstruction otherwise.
pub fn member_certificate(family: &MapFamily, member: Member) -> Result<Certificate> {
    if extendible(family.name(), member) {
        Ok(positive_certificate(
            &explicit_extension(family, member)?,
            0.0,
        ))
    } else {
        build_negative_certificate(family, member)
    }
}

pub(super) fn run_family(mut report: Report, example: &str, params: Params) -> Result<Report> {
    let name = family_of(example)?;
    let family = example_family(name, params.resolution)?;
    if params.n_max > family.max_n() {
        return Err(Error::BeyondTruncation {
            index: params.n_max,
            bound: family.max_n(),
        });
    }
    let limit = family.limit();
    let members = (1..=params.n_max).map(Member::N).chain([Member::Limit]);
    for member in members {
        let phi = family.get(member)?;
        let cert = member_certificate(&family, member)?;
        let (label, n, sup) = match member {
            Member::N(n) => (row_label(n), Some(n), Some(sup_distance(&phi, limit)?)),
            Member::Limit => (limit_label(), None, None),
        };
        report.certify(label, n, sup, family.pair(), &phi, &cert);
    }
    if name == FamilyName::NdaggerEclosed {
        report
            .notes
            .push("limit extension assembled from disjointified clopen blocks".into());
    }
    let conclusion: String = format!(
        "members φ_n: {}; limit φ: {} (at ε = {})",
        side(extendible(name, Member::N(1))),
        side(extendible(name, Member::Limit)),
        params.resolution
    );
    Ok(report.finish(conclusion))
}
