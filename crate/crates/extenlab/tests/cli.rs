use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use extenlab::formats::{read_json, SpaceFile};
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_extenlab"));
    cmd.env_remove("EXTENLAB_DATA_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    repo().join("data").join(name).display().to_string()
}

fn schema_valid(schema: &str, instance: &Value) -> bool {
    let path = repo().join("schemas").join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect();
    if !errors.is_empty() {
        eprintln!("{schema}: {errors:?}");
    }
    errors.is_empty()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Copies the certificate with `edit` applied and returns the checker's exit code.
fn certify_tampered(stem: &str, edit: impl FnOnce(&mut Value)) -> i32 {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data(&format!("{stem}.certificate.json"))).unwrap();
    let mut cert: Value = serde_json::from_str(&text).unwrap();
    edit(&mut cert);
    let path = dir.path().join("cert.json");
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let problem = data(&format!("{stem}.problem.json"));
    code(&run(&["certify", &problem, path.to_str().unwrap()]))
}

#[test]
fn comb_run_at_full_resolution_exits_zero() {
    let out = run(&[
        "example",
        "run",
        "comb",
        "--epsilon",
        "2^-8",
        "--n-max",
        "20",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n=20"));
    assert!(text.contains("mandatory-crossing"));
}

#[test]
fn bad_invocations_exit_three() {
    assert_eq!(code(&run(&["example", "run", "nosuch"])), 3);
    assert_eq!(code(&run(&["example", "run", "comb", "--bogus"])), 3);
    assert_eq!(
        code(&run(&["example", "run", "comb", "--epsilon", "0.3"])),
        3
    );
    assert_eq!(code(&run(&["example", "run", "comb", "--n-max", "0"])), 3);
    assert_eq!(
        code(&run(&["example", "run", "comb", "--n-max", "5000"])),
        3
    );
    assert_eq!(code(&run(&["space", "info", "nowhere"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn json_outputs_match_the_shipped_schemas() {
    let report = run(&[
        "example",
        "run",
        "comb",
        "--epsilon",
        "2^-6",
        "--format",
        "json",
    ]);
    assert_eq!(code(&report), 0);
    assert!(schema_valid("report", &stdout_json(&report)));

    let hawaii = run(&[
        "example",
        "run",
        "hawaii",
        "--epsilon",
        "2^-4",
        "--n-max",
        "3",
        "--format",
        "json",
    ]);
    assert!(schema_valid("report", &stdout_json(&hawaii)));

    let list = run(&["example", "list", "--format", "json"]);
    assert!(schema_valid("examples", &stdout_json(&list)));

    let info = run(&["space", "info", "earring", "--format", "json"]);
    assert!(schema_valid("space-info", &stdout_json(&info)));

    let verdict = run(&[
        "certify",
        &data("comb-limit.problem.json"),
        &data("comb-limit.certificate.json"),
    ]);
    assert!(schema_valid("verdict", &stdout_json(&verdict)));

    let cone = run(&["construct", "cone", "ndagger", "--epsilon", "2^-3"]);
    assert!(schema_valid("space", &stdout_json(&cone)));

    let spiked = run(&["construct", "spiked", "circle", "--epsilon", "2^-3"]);
    assert!(schema_valid("pair", &stdout_json(&spiked)));
}

#[test]
fn exported_files_match_the_shipped_schemas_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let cases = [
        ("pathcomp", "2"),
        ("sine-not-eclosed", "limit"),
        ("sine-not-eopen", "3"),
        ("comb", "limit"),
        ("ndagger-not-eopen", "4"),
        ("ndagger-eclosed", "limit"),
        ("hawaii", "2"),
    ];
    for (name, member) in cases {
        let out = run(&[
            "example",
            "export",
            name,
            "--member",
            member,
            "--epsilon",
            "2^-5",
            "--out-dir",
            out_dir,
        ]);
        assert_eq!(
            code(&out),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let problem = dir.path().join(format!("{name}-{member}.problem.json"));
        let cert = dir.path().join(format!("{name}-{member}.certificate.json"));
        let p: Value = read_json(&problem).unwrap();
        let c: Value = read_json(&cert).unwrap();
        assert!(schema_valid("map", &p), "{name}");
        assert!(schema_valid("certificate", &c), "{name}");
        let verdict = run(&["certify", problem.to_str().unwrap(), cert.to_str().unwrap()]);
        assert_eq!(code(&verdict), 0, "{name} {member}");
    }
    assert_eq!(
        code(&run(&[
            "example",
            "export",
            "loc-ext",
            "--member",
            "1",
            "--out-dir",
            out_dir
        ])),
        3
    );
}

#[test]
fn shipped_files_verify_and_match_the_schemas() {
    for stem in ["comb-limit", "comb-3"] {
        let problem = data(&format!("{stem}.problem.json"));
        let cert = data(&format!("{stem}.certificate.json"));
        assert!(schema_valid(
            "map",
            &read_json(Path::new(&problem)).unwrap()
        ));
        assert!(schema_valid(
            "certificate",
            &read_json(Path::new(&cert)).unwrap()
        ));
        let out = run(&["certify", &problem, &cert]);
        assert_eq!(code(&out), 0, "{stem}");
        assert_eq!(stdout_json(&out)["status"], "verified");
    }
}

#[test]
fn shipped_files_are_found_through_the_data_directory() {
    let cwd = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(cwd.path())
        .env("EXTENLAB_DATA_DIR", repo().join("data"))
        .args([
            "certify",
            "comb-limit.problem.json",
            "comb-limit.certificate.json",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let elsewhere = bin()
        .current_dir(cwd.path())
        .env("EXTENLAB_DATA_DIR", cwd.path())
        .args([
            "certify",
            "comb-limit.problem.json",
            "comb-limit.certificate.json",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&elsewhere), 3);
}

#[test]
fn tampered_certificates_are_refuted_or_rejected() {
    // an understated tolerance is malformed, altered values break the checks
    assert_eq!(
        certify_tampered("comb-3", |c| c["tolerance"] = (-0.5).into()),
        3
    );
    assert_eq!(
        certify_tampered("comb-3", |c| c["values"][0] = 0.5.into()),
        2
    );
    assert_eq!(
        certify_tampered("comb-3", |c| c["values"][3] = 7.0.into()),
        2
    );
    assert_eq!(
        certify_tampered("comb-3", |c| c["modulus"] =
            serde_json::json!({"lipschitz": 1.0})),
        2
    );
    assert_eq!(
        certify_tampered("comb-3", |c| {
            c["values"].as_array_mut().unwrap().truncate(4);
        }),
        3
    );
    assert_eq!(
        certify_tampered("comb-limit", |c| c["separation"] = 0.99.into()),
        2
    );
    assert_eq!(
        certify_tampered("comb-limit", |c| c["region"]["bound"] = 0.9.into()),
        2
    );
    assert_eq!(
        certify_tampered("comb-limit", |c| c["z0"] = 1_000_000.into()),
        3
    );
    assert_eq!(
        certify_tampered("comb-limit", |c| c["brackets"] = serde_json::json!([])),
        3
    );
    assert_eq!(
        certify_tampered("comb-limit", |c| c["kind"] = "winding".into()),
        3
    );
}

#[test]
fn truncated_and_missing_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cert = std::fs::read_to_string(data("comb-limit.certificate.json")).unwrap();
    let problem = std::fs::read_to_string(data("comb-limit.problem.json")).unwrap();
    let tc = dir.path().join("cert.json");
    let tp = dir.path().join("problem.json");
    std::fs::write(&tc, &cert[..cert.len() / 2]).unwrap();
    std::fs::write(&tp, &problem[..problem.len() / 2]).unwrap();
    let full_problem = data("comb-limit.problem.json");
    let full_cert = data("comb-limit.certificate.json");
    assert_eq!(
        code(&run(&["certify", &full_problem, tc.to_str().unwrap()])),
        3
    );
    assert_eq!(
        code(&run(&["certify", tp.to_str().unwrap(), &full_cert])),
        3
    );
    assert_eq!(
        code(&run(&["certify", "no/such/problem.json", &full_cert])),
        3
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let invocations: [&[&str]; 6] = [
        &[
            "example",
            "run",
            "comb",
            "--epsilon",
            "2^-7",
            "--format",
            "json",
        ],
        &[
            "example",
            "run",
            "sine-not-eclosed",
            "--epsilon",
            "2^-6",
            "--n-max",
            "5",
            "--format",
            "text",
        ],
        &[
            "example",
            "run",
            "hawaii",
            "--epsilon",
            "2^-5",
            "--n-max",
            "4",
            "--format",
            "csv",
        ],
        &[
            "example",
            "run",
            "cone-contraction",
            "--epsilon",
            "2^-4",
            "--format",
            "json",
        ],
        &[
            "certify",
            &data("comb-limit.problem.json"),
            &data("comb-limit.certificate.json"),
        ],
        &["construct", "cone", "ndagger", "--epsilon", "2^-3"],
    ];
    for args in invocations {
        let a = run(args);
        let b = run(args);
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn space_info_reports_path_components() {
    let sine =
        String::from_utf8(run(&["space", "info", "sine", "--epsilon", "2^-8"]).stdout).unwrap();
    assert!(sine.contains("path components: 2"), "{sine}");
    let comb = String::from_utf8(run(&["space", "info", "comb"]).stdout).unwrap();
    assert!(comb.contains("path components: 1"), "{comb}");
    let ndagger =
        String::from_utf8(run(&["space", "info", "ndagger", "--epsilon", "2^-4"]).stdout).unwrap();
    assert!(ndagger.contains("path components: 17"), "{ndagger}");
}

#[test]
fn constructed_cone_reloads_as_one_component() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.json");
    let out = run(&[
        "construct",
        "cone",
        "ndagger",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let file: SpaceFile = read_json(&path).unwrap();
    let space = file.load().unwrap();
    assert_eq!(space.component_count(), 1);
    let info = String::from_utf8(run(&["space", "info", path.to_str().unwrap()]).stdout).unwrap();
    assert!(info.contains("path components: 1"), "{info}");
}

#[test]
fn constructions_compose_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let product = dir.path().join("product.json");
    let opc = dir.path().join("opc.json");
    let p = product.to_str().unwrap();
    assert_eq!(
        code(&run(&[
            "construct",
            "product",
            "finite-2",
            "--epsilon",
            "2^-3",
            "--factor",
            "interval",
            "--out",
            p
        ])),
        0
    );
    let product_space = SpaceFile::load(&read_json(&product).unwrap()).unwrap();
    assert_eq!(product_space.component_count(), 2);
    // opc needs Euclidean blocks; the product carries the max metric
    assert_eq!(
        code(&run(&[
            "construct",
            "opc",
            p,
            p,
            "--out",
            opc.to_str().unwrap()
        ])),
        3
    );
    assert_eq!(
        code(&run(&[
            "construct",
            "opc",
            p,
            "interval",
            "--epsilon",
            "2^-3"
        ])),
        3
    );
    let o = opc.to_str().unwrap();
    assert_eq!(
        code(&run(&[
            "construct",
            "opc",
            "interval",
            "interval",
            "--epsilon",
            "2^-3",
            "--out",
            o
        ])),
        0
    );
    let space = SpaceFile::load(&read_json(&opc).unwrap()).unwrap();
    // two segments and the point at infinity
    assert_eq!(space.component_count(), 3);
    assert_eq!(
        code(&run(&[
            "construct",
            "spiked",
            "interval",
            "--basepoint",
            "nope"
        ])),
        3
    );
}

#[test]
fn svg_sketch_is_written_for_sequence_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("comb.svg");
    let out = run(&[
        "example",
        "run",
        "comb",
        "--epsilon",
        "2^-5",
        "--n-max",
        "3",
        "--svg",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(
        code(&run(&[
            "example",
            "run",
            "loc-ext",
            "--svg",
            path.to_str().unwrap()
        ])),
        3
    );
}
