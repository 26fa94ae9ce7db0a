//! Acceptance criteria, run in order with one PASS/FAIL line each. Criteria run
//! sequentially so that their wall-clock limits are measured without interference.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use extenlab_core::certificates::{
    check_certificate, crossing_forced, Certificate, CrossingGraph, Region, Status,
};
use extenlab_core::maps::{example_family, FamilyName, MapSample, Member};
use extenlab_core::metric::{
    build_epsilon_graph, sup_distance, widest_path_value, Metric, Modulus, Net,
};
use extenlab_core::reproduce::{member_certificate, run_example, Params, Report};
use extenlab_core::spaces::{make_space, SpaceSpec};
use extenlab_core::Resolution;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn res(k: u32) -> Resolution {
    Resolution::new(k).unwrap()
}

/// Outcome of one criterion: whether it passed and what was measured.
struct Outcome {
    passed: bool,
    detail: String,
}

/// Collects failed sub-checks of a criterion.
#[derive(Default)]
struct Findings(Vec<String>);

impl Findings {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn outcome(self, measured: String) -> Outcome {
        let passed = self.0.is_empty();
        let detail = if passed {
            measured
        } else {
            format!("{measured}; failed: {}", self.0.join("; "))
        };
        Outcome { passed, detail }
    }
}

fn timed_run(name: &str, k: u32, n_max: usize) -> (Report, f64) {
    let start = Instant::now();
    let report = run_example(
        name,
        Params {
            resolution: res(k),
            n_max,
        },
    )
    .unwrap_or_else(|e| panic!("{name}: {e}"));
    (report, start.elapsed().as_secs_f64())
}

fn all_verified(report: &Report, f: &mut Findings) {
    for row in &report.rows {
        f.require(
            row.status == Status::Verified,
            format!("{} {} is {}", report.example, row.label, row.status),
        );
    }
    for c in &report.checks {
        f.require(
            c.passed,
            format!("{} check {}: {}", report.example, c.check, c.detail),
        );
    }
    f.require(
        report.passed,
        format!("{} report not passed", report.example),
    );
}

fn row_kinds(report: &Report, member_kind: &str, limit_kind: &str, f: &mut Findings) {
    for row in &report.rows {
        let want = if row.n.is_some() {
            member_kind
        } else {
            limit_kind
        };
        f.require(
            row.certificate == want,
            format!(
                "{} {} carries {}",
                report.example, row.label, row.certificate
            ),
        );
    }
    f.require(
        report.rows.last().map(|r| r.label.as_str()) == Some("limit"),
        format!("{} has no limit row", report.example),
    );
}

fn comb() -> Outcome {
    let mut f = Findings::default();
    let (report, secs) = timed_run("comb", 8, 20);
    all_verified(&report, &mut f);
    row_kinds(&report, "positive", "mandatory-crossing", &mut f);
    f.require(
        report.rows.len() == 21,
        "expected rows n=1..20 and the limit",
    );
    for row in report.rows.iter().filter(|r| r.n.is_some()) {
        let n = row.n.unwrap();
        f.require(
            row.sup == Some(1.0 / (n as f64 + 1.0)),
            format!("sup at n={n} is {:?}", row.sup),
        );
    }
    let family = example_family(FamilyName::Comb, res(8)).unwrap();
    for n in 1..=20 {
        match member_certificate(&family, Member::N(n)).unwrap() {
            Certificate::Positive { tolerance, .. } => {
                f.require(tolerance == 0.0, format!("tolerance {tolerance} at n={n}"))
            }
            other => f.require(false, format!("n={n} certificate is {}", other.kind())),
        }
    }
    let bound = 1.0 - 6.0 * res(8).eps();
    let margin = report
        .rows
        .last()
        .and_then(|r| r.margin)
        .unwrap_or(f64::NEG_INFINITY);
    f.require(margin >= bound, format!("limit margin {margin} < {bound}"));
    f.require(secs < 10.0, format!("runtime {secs:.2} s"));
    f.outcome(format!(
        "comb 2^-8 n=1..20: sups 1/(n+1) exact, limit margin {margin:.7} ≥ {bound:.7}, {secs:.2} s < 10 s"
    ))
}

fn sine() -> Outcome {
    let mut f = Findings::default();
    let (closed, t1) = timed_run("sine-not-eclosed", 8, 15);
    let (open, t2) = timed_run("sine-not-eopen", 8, 15);
    all_verified(&closed, &mut f);
    all_verified(&open, &mut f);
    row_kinds(&closed, "positive", "mandatory-crossing", &mut f);
    row_kinds(&open, "path-component", "positive", &mut f);
    let eps = res(8).eps();
    let family = example_family(FamilyName::SineEclosed, res(8)).unwrap();
    match member_certificate(&family, Member::Limit).unwrap() {
        Certificate::MandatoryCrossing { region, .. } => f.require(
            region
                == Region::AbsAbove {
                    axis: 1,
                    bound: 1.0 - 2.0 * eps,
                },
            format!("crossing region {region:?}"),
        ),
        other => f.require(false, format!("limit certificate is {}", other.kind())),
    }
    let secs = t1 + t2;
    f.require(secs < 15.0, format!("runtime {secs:.2} s"));
    f.outcome(format!(
        "sine 2^-8 n≤15: not-e-closed {} rows, not-e-open {} rows, region |y| ≥ 1−2ε, {secs:.2} s < 15 s",
        closed.rows.len(),
        open.rows.len()
    ))
}

fn ndagger() -> Outcome {
    let mut f = Findings::default();
    let (open, t1) = timed_run("ndagger-not-eopen", 8, 20);
    let defaults = extenlab_core::reproduce::example_info("ndagger-eclosed")
        .unwrap()
        .default_params();
    let (closed, t2) = timed_run(
        "ndagger-eclosed",
        defaults.resolution.exponent(),
        defaults.n_max,
    );
    all_verified(&open, &mut f);
    all_verified(&closed, &mut f);
    row_kinds(&open, "clopen", "positive", &mut f);
    row_kinds(&closed, "positive", "positive", &mut f);
    f.require(
        closed
            .notes
            .iter()
            .any(|n| n.contains("disjointified clopen blocks")),
        "limit extension not assembled from clopen blocks",
    );
    let secs = t1 + t2;
    f.require(secs < 5.0, format!("runtime {secs:.2} s"));
    f.outcome(format!(
        "N† not-e-open 2^-8 n≤20 clopen obstructions; e-closed at {} limit via disjointified blocks; {secs:.2} s < 5 s",
        defaults.resolution
    ))
}

fn hawaii() -> Outcome {
    let mut f = Findings::default();
    let (report, secs) = timed_run("hawaii", 8, 10);
    all_verified(&report, &mut f);
    row_kinds(&report, "winding", "positive", &mut f);
    let family = example_family(FamilyName::Hawaii, res(8)).unwrap();
    for n in 1..=10 {
        match member_certificate(&family, Member::N(n)).unwrap() {
            Certificate::Winding {
                expected,
                retraction,
                ..
            } => {
                f.require(
                    expected == 1,
                    format!("expected winding {expected} at n={n}"),
                );
                f.require(
                    retraction == extenlab_core::spaces::Retraction::Collapse { k: n + 1 },
                    format!("n={n} collapses onto {retraction:?}"),
                );
            }
            other => f.require(false, format!("n={n} certificate is {}", other.kind())),
        }
    }
    f.require(secs < 10.0, format!("runtime {secs:.2} s"));
    f.outcome(format!(
        "earring 2^-8 n≤10: winding of r_(n+1)∘φ_n equals 1, constant limit extends, {secs:.2} s < 10 s"
    ))
}

fn check_passed(report: &Report, name: &str) -> Option<String> {
    report
        .checks
        .iter()
        .find(|c| c.check == name && c.passed)
        .map(|c| c.detail.clone())
}

fn anr() -> Outcome {
    let mut f = Findings::default();
    let mut times = Vec::new();
    let mut firsts = BTreeMap::new();
    let required: [(&str, &[&str]); 6] = [
        ("anr-eclosed", &["restricts-to-limit", "modulus-4eps"]),
        ("anr-eopen", &["first-level", "limit-level"]),
        ("eop-homotopy", &["first-success", "slice-identities"]),
        ("loc-ext", &["diameter-bound", "diameter-decreasing"]),
        ("cone-contraction", &["rel-p"]),
        ("equiconnected", &["coincidence-fixed", "slices-close"]),
    ];
    for (name, checks) in required {
        let p = extenlab_core::reproduce::example_info(name)
            .unwrap()
            .default_params();
        let (report, secs) = timed_run(name, p.resolution.exponent(), p.n_max);
        all_verified(&report, &mut f);
        for check in checks {
            match check_passed(&report, check) {
                Some(detail) if check.starts_with("first") => {
                    firsts.insert(name, detail);
                }
                Some(_) => {}
                None => f.require(false, format!("{name}: {check} missing or failed")),
            }
        }
        // every member row certifies ψ at its slice with tolerance 0
        if name == "anr-eopen" {
            f.require(
                report.rows.iter().all(|r| r.certificate == "positive"),
                "anr-eopen rows are not explicit extensions",
            );
        }
        f.require(secs < 20.0, format!("{name} runtime {secs:.2} s"));
        times.push(format!("{name} {secs:.2} s"));
    }
    let firsts: Vec<String> = firsts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    f.outcome(format!(
        "ANR runs at default settings, each < 20 s ({}); {}",
        times.join(", "),
        firsts.join("; ")
    ))
}

/// Reachability by transitive closure over the adjacency matrix built from raw
/// pairwise distances.
fn closure_reachable(net: &Net, scale: f64, allowed: &[bool]) -> Vec<Vec<bool>> {
    let n = net.len();
    let mut r = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            r[i][j] = allowed[i] && allowed[j] && (i == j || net.distance(i, j) <= scale);
        }
    }
    for k in 0..n {
        let via = r[k].clone();
        for row in r.iter_mut().filter(|row| row[k]) {
            for (x, &y) in row.iter_mut().zip(&via) {
                *x |= y;
            }
        }
    }
    r
}

/// Best bottleneck over all simple paths, by depth-first enumeration. Branches whose
/// running minimum cannot beat the best path found so far are cut, and the search
/// stops once a path reaches the cap `min(height[src], height[dst])`.
fn exhaustive_widest(adj: &[Vec<usize>], height: &[f64], src: usize, dst: usize) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn go(
        u: usize,
        dst: usize,
        cap: f64,
        low: f64,
        adj: &[Vec<usize>],
        height: &[f64],
        on_path: &mut Vec<bool>,
        best: &mut f64,
    ) {
        if low <= *best || *best == cap {
            return;
        }
        if u == dst {
            *best = low;
            return;
        }
        for &v in &adj[u] {
            if !on_path[v] {
                on_path[v] = true;
                go(v, dst, cap, low.min(height[v]), adj, height, on_path, best);
                on_path[v] = false;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut on_path = vec![false; adj.len()];
    on_path[src] = true;
    let cap = height[src].min(height[dst]);
    go(
        src,
        dst,
        cap,
        height[src],
        adj,
        height,
        &mut on_path,
        &mut best,
    );
    best
}

fn oracles() -> Outcome {
    let mut f = Findings::default();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let start = Instant::now();

    // crossing: random sub-nets of obstruction codomains
    let sources = [
        (
            make_space(SpaceSpec::Comb, res(5)).unwrap(),
            Region::Below {
                axis: 1,
                bound: 2.0 * res(5).eps(),
            },
        ),
        (
            make_space(SpaceSpec::Sine, res(5)).unwrap(),
            Region::AbsAbove {
                axis: 1,
                bound: 1.0 - 2.0 * res(5).eps(),
            },
        ),
    ];
    let mut pairs_checked = 0usize;
    for trial in 0..25 {
        let (space, region) = &sources[trial % sources.len()];
        let size = rng.gen_range(20..=200).min(space.len());
        let mut picks: Vec<usize> = (0..space.len()).collect();
        for i in 0..size {
            let j = rng.gen_range(i..picks.len());
            picks.swap(i, j);
        }
        picks.truncate(size);
        picks.sort_unstable();
        let sub = space.net().select(&picks).unwrap();
        let outside: Vec<bool> = sub.points().map(|p| !region.contains(p)).collect();
        let reach = closure_reachable(&sub, 2.0 * sub.resolution(), &outside);
        let graph = CrossingGraph::new(&sub, region).unwrap();
        for (a, reach_a) in reach.iter().enumerate() {
            for (b, &reachable) in reach_a.iter().enumerate() {
                let forced = graph.forced(a, b);
                pairs_checked += 1;
                if (a * 31 + b) % 97 == 0 {
                    f.require(
                        crossing_forced(&sub, region, a, b).unwrap() == forced,
                        format!("crossing_forced disagrees at trial {trial} ({a}, {b})"),
                    );
                }
                if forced == reachable {
                    f.require(false, format!("crossing trial {trial} pair ({a}, {b})"));
                }
            }
        }
    }

    // widest path: random planar nets of at most 20 points
    let mut instances = 0usize;
    for trial in 0..100 {
        let n = rng.gen_range(2..=20);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
            .collect();
        let net = Net::from_points(&points, 0.01, Metric::Euclidean).unwrap();
        let scale = rng.gen_range(0.1..0.3);
        let g = build_epsilon_graph(&net, scale).unwrap();
        // heights on a coarse grid so that ties occur
        let height: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 8.0).collect();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && net.distance(i, j) <= scale)
                    .collect()
            })
            .collect();
        for src in 0..n {
            for dst in 0..n {
                let fast = widest_path_value(&g, src, dst, &height).unwrap();
                let slow = exhaustive_widest(&adj, &height, src, dst);
                if fast != slow {
                    f.require(
                        false,
                        format!("widest trial {trial} ({src}, {dst}): {fast} vs {slow}"),
                    );
                }
            }
        }
        instances += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    f.outcome(format!(
        "crossing vs transitive closure on 25 sub-nets ≤ 200 points ({pairs_checked} endpoint pairs); \
         widest path vs exhaustive simple-path search on {instances} nets ≤ 20 points; {secs:.2} s"
    ))
}

const CATALOG: [SpaceSpec; 10] = [
    SpaceSpec::Point,
    SpaceSpec::Finite { k: 3 },
    SpaceSpec::Interval,
    SpaceSpec::Circle,
    SpaceSpec::Disk,
    SpaceSpec::Ndagger,
    SpaceSpec::Sine,
    SpaceSpec::Comb,
    SpaceSpec::Earring,
    SpaceSpec::EarringDisk,
];

fn suites() -> Outcome {
    let mut f = Findings::default();
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);

    // sup distance on 1000 random triples of maps into the disk
    let net = Arc::new(
        Net::new(
            1,
            (0..17).map(|i| i as f64 / 17.0).collect(),
            1.0 / 17.0,
            Metric::Euclidean,
        )
        .unwrap(),
    );
    let disk = Arc::new(make_space(SpaceSpec::Disk, res(3)).unwrap());
    let sample = |rng: &mut StdRng| {
        let v = (0..34).map(|_| rng.gen_range(-1.0..1.0)).collect();
        MapSample::new(net.clone(), disk.clone(), v, Modulus::Lipschitz(0.0)).unwrap()
    };
    let mut axioms_ok = true;
    for _ in 0..1000 {
        let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let d = |x: &MapSample, y: &MapSample| sup_distance(x, y).unwrap();
        let ab = d(&a, &b);
        axioms_ok &=
            d(&a, &a) == 0.0 && ab >= 0.0 && ab == d(&b, &a) && ab <= d(&a, &c) + d(&c, &b) + 1e-12;
    }
    f.require(axioms_ok, "sup distance axioms");

    // catalog invariants at every shipped resolution
    let mut spaces = 0;
    for k in 4..=10 {
        for spec in CATALOG {
            let space = make_space(spec, res(k)).unwrap();
            if let Err(e) = space.check_invariants() {
                f.require(false, format!("{spec} at 2^-{k}: {e}"));
            }
            spaces += 1;
        }
    }

    // certificates survive a JSON round trip and re-verify identically
    let mut round_trips = 0;
    for name in [
        FamilyName::Pathcomp,
        FamilyName::SineEclosed,
        FamilyName::SineEopen,
        FamilyName::Comb,
        FamilyName::NdaggerEopen,
        FamilyName::NdaggerEclosed,
        FamilyName::Hawaii,
    ] {
        let family = example_family(name, res(5)).unwrap();
        for member in (1..=4).map(Member::N).chain([Member::Limit]) {
            let phi = family.get(member).unwrap();
            let cert = member_certificate(&family, member).unwrap();
            let text = serde_json::to_string(&cert).unwrap();
            let back: Certificate = serde_json::from_str(&text).unwrap();
            let before = check_certificate(family.pair(), &phi, &cert);
            let after = check_certificate(family.pair(), &phi, &back);
            f.require(
                back == cert && before == after && before.verified(),
                format!("{} {member}", name.as_str()),
            );
            round_trips += 1;
        }
    }

    // repeated CLI invocations are byte-identical
    let invocations: [&[&str]; 3] = [
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
            "hawaii",
            "--epsilon",
            "2^-5",
            "--n-max",
            "4",
            "--format",
            "csv",
        ],
        &["space", "info", "sine", "--epsilon", "2^-6"],
    ];
    for args in invocations {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_extenlab"))
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        f.require(
            a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout,
            format!("CLI output differs for {args:?}"),
        );
    }

    let secs = start.elapsed().as_secs_f64();
    f.outcome(format!(
        "1000 sup-distance triples, {spaces} catalog spaces at 2^-4..2^-10, {round_trips} certificate round trips, \
         CLI determinism; {secs:.2} s (full-suite time is that of the whole test run)"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("comb reproduction", comb),
        ("sine reproductions", sine),
        ("N† reproductions", ndagger),
        ("Hawaiian earring", hawaii),
        ("ANR constructions", anr),
        ("oracle equivalence", oracles),
        ("metric and invariant suites", suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let mark = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{mark} criterion {} ({name}): {}", i + 1, outcome.detail);
        if !outcome.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
