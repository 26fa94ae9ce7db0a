use extenlab_core::certificates::{
    build_negative_certificate, check_certificate, positive_certificate, Certificate, Status,
};
use extenlab_core::dyadic::Resolution;
use extenlab_core::maps::{example_family, explicit_extension, FamilyName, MapFamily, Member};

fn res(k: u32) -> Resolution {
    Resolution::new(k).unwrap()
}

fn extendible(name: FamilyName, member: Member) -> bool {
    !matches!(
        (name, member),
        (
            FamilyName::SineEopen | FamilyName::NdaggerEopen | FamilyName::Hawaii,
            Member::N(_)
        ) | (
            FamilyName::Pathcomp | FamilyName::SineEclosed | FamilyName::Comb,
            Member::Limit
        )
    )
}

fn members(f: &MapFamily) -> Vec<Member> {
    let mut m: Vec<Member> = (1..=f.max_n().min(4)).map(Member::N).collect();
    m.push(Member::Limit);
    m
}

#[test]
fn every_member_gets_a_verified_certificate() {
    for name in FamilyName::ALL {
        let family = example_family(name, res(6)).unwrap();
        for member in members(&family) {
            let phi = family.get(member).unwrap();
            let cert = if extendible(name, member) {
                assert!(build_negative_certificate(&family, member).is_err());
                let ext = explicit_extension(&family, member).unwrap();
                positive_certificate(&ext, 0.0)
            } else {
                assert!(explicit_extension(&family, member).is_err());
                build_negative_certificate(&family, member).unwrap()
            };
            let verdict = check_certificate(family.pair(), &phi, &cert);
            assert_eq!(
                verdict.status,
                Status::Verified,
                "{name} {member} {}: {:?}",
                cert.kind(),
                verdict.failed_checks().collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn certificates_do_not_transfer_between_members() {
    let comb = example_family(FamilyName::Comb, res(6)).unwrap();
    let neg = build_negative_certificate(&comb, Member::Limit).unwrap();
    let phi2 = comb.member(2).unwrap();
    assert_eq!(
        check_certificate(comb.pair(), &phi2, &neg).status,
        Status::Refuted
    );

    let ext = explicit_extension(&comb, Member::N(2)).unwrap();
    let pos = positive_certificate(&ext, 0.0);
    let phi3 = comb.member(3).unwrap();
    assert_eq!(
        check_certificate(comb.pair(), &phi3, &pos).status,
        Status::Refuted
    );
}

#[test]
fn round_trip_reverifies_identically() {
    for name in [
        FamilyName::Comb,
        FamilyName::Hawaii,
        FamilyName::NdaggerEopen,
        FamilyName::SineEopen,
    ] {
        let family = example_family(name, res(5)).unwrap();
        let member = if name == FamilyName::Comb {
            Member::Limit
        } else {
            Member::N(1)
        };
        let phi = family.get(member).unwrap();
        let cert = build_negative_certificate(&family, member).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(
            check_certificate(family.pair(), &phi, &back),
            check_certificate(family.pair(), &phi, &cert)
        );
    }
}
