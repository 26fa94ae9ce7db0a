use extenlab_core::reproduce::{run_example, Params};
use extenlab_core::Resolution;

fn params(k: u32) -> Params {
    Params {
        resolution: Resolution::new(k).unwrap(),
        n_max: 4,
    }
}

#[test]
fn obstruction_margins_do_not_shrink_under_refinement() {
    let mut compared = 0;
    // the examples whose runs carry obstruction certificates
    for name in [
        "pathcomp",
        "sine-not-eclosed",
        "sine-not-eopen",
        "comb",
        "ndagger-not-eopen",
        "hawaii",
    ] {
        let coarse = run_example(name, params(6)).unwrap();
        let fine = run_example(name, params(8)).unwrap();
        assert!(coarse.passed && fine.passed, "{name}");
        for (a, b) in coarse.rows.iter().zip(&fine.rows) {
            assert_eq!(a.label, b.label, "{name}");
            if a.certificate == "positive" {
                continue;
            }
            let (ma, mb) = (a.margin.unwrap(), b.margin.unwrap());
            assert!(
                mb >= ma,
                "{name} {}: margin {ma} at 2^-6, {mb} at 2^-8",
                a.label
            );
            compared += 1;
        }
    }
    assert!(compared >= 15, "only {compared} obstruction rows compared");
}
