use std::collections::BTreeSet;
use std::sync::Arc;

use extenlab_core::certificates::disjointify;
use extenlab_core::maps::{collapse_retraction, winding_number, MapSample};
use extenlab_core::metric::{
    build_epsilon_graph, check_modulus_values, graph_components, sup_distance, widest_path_value,
    Metric, Modulus, Net,
};
use extenlab_core::spaces::{earring_circle_loop, make_space, AnnotatedSpace, SpaceSpec};
use extenlab_core::Resolution;
use proptest::prelude::*;

fn disk() -> Arc<AnnotatedSpace> {
    Arc::new(make_space(SpaceSpec::Disk, Resolution::new(3).unwrap()).unwrap())
}

fn line_net(n: usize) -> Arc<Net> {
    let coords = (0..n).map(|i| i as f64 / n as f64).collect();
    Arc::new(Net::new(1, coords, 1.0 / n as f64, Metric::Euclidean).unwrap())
}

fn cloud(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..1.0f64, 2), 2..max)
}

fn map_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 2 * n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sup_distance_is_a_metric(
        a in map_values(17),
        b in map_values(17),
        c in map_values(17),
    ) {
        let (net, x) = (line_net(17), disk());
        let sample = |v: Vec<f64>| MapSample::new(net.clone(), x.clone(), v, Modulus::Lipschitz(0.0)).unwrap();
        let (f, g, h) = (sample(a), sample(b), sample(c));
        let fg = sup_distance(&f, &g).unwrap();
        prop_assert_eq!(sup_distance(&f, &f).unwrap(), 0.0);
        prop_assert!(fg >= 0.0);
        prop_assert_eq!(fg, sup_distance(&g, &f).unwrap());
        if fg == 0.0 {
            prop_assert_eq!(f.values(), g.values());
        }
        let via = sup_distance(&f, &h).unwrap() + sup_distance(&h, &g).unwrap();
        prop_assert!(fg <= via + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn epsilon_graph_matches_pairwise_distances(points in cloud(60), scale in 0.05..0.4f64) {
        let net = Net::from_points(&points, 0.01, Metric::Euclidean).unwrap();
        let g = build_epsilon_graph(&net, scale).unwrap();
        for i in 0..net.len() {
            for j in 0..net.len() {
                let want = i != j && net.distance(i, j) <= scale;
                prop_assert_eq!(g.has_edge(i, j), want);
                prop_assert_eq!(g.has_edge(i, j), g.has_edge(j, i));
            }
        }
        // components are the classes of the edge relation's transitive closure
        let labels = graph_components(&g);
        for (i, j) in g.edges() {
            prop_assert_eq!(labels[i], labels[j]);
        }
        let mut seen = vec![false; net.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        for i in 0..net.len() {
            prop_assert_eq!(seen[i], labels[i] == labels[0]);
        }
    }

    #[test]
    fn widest_path_is_symmetric_and_bounded(
        points in cloud(40),
        heights in prop::collection::vec(0.0..1.0f64, 40),
        scale in 0.1..0.5f64,
    ) {
        let net = Net::from_points(&points, 0.01, Metric::Euclidean).unwrap();
        let n = net.len();
        let h = &heights[..n];
        let g = build_epsilon_graph(&net, scale).unwrap();
        let (a, b) = (0, n - 1);
        let ab = widest_path_value(&g, a, b, h).unwrap();
        prop_assert_eq!(ab, widest_path_value(&g, b, a, h).unwrap());
        prop_assert!(ab <= h[a].min(h[b]));
        prop_assert_eq!(widest_path_value(&g, a, a, h).unwrap(), h[a]);
    }

    #[test]
    fn bucketed_modulus_check_matches_all_pairs(
        points in cloud(80),
        lipschitz in 0.2..3.0f64,
        slack in 0.0..0.1f64,
        wobble in 0.0..2.0f64,
    ) {
        let net = Net::from_points(&points, 0.01, Metric::Euclidean).unwrap();
        let values: Vec<f64> = points
            .iter()
            .flat_map(|p| [p[0] + wobble * (7.0 * p[1]).sin(), p[1] * p[0]])
            .collect();
        let modulus = Modulus::Lipschitz(lipschitz);
        let vd = 2;
        let mut want = true;
        for i in 0..net.len() {
            for j in i + 1..net.len() {
                let dv = Metric::Euclidean.distance(&values[i * vd..i * vd + 2], &values[j * vd..j * vd + 2]);
                want &= dv <= lipschitz * net.distance(i, j) + slack;
            }
        }
        prop_assert_eq!(check_modulus_values(&net, &values, &Metric::Euclidean, &modulus, slack), want);
    }

    #[test]
    fn winding_number_is_invariant_under_shift_and_refinement(
        turns in -3i64..=3,
        steps in 40usize..120,
        shift in 0usize..40,
        radius in 0.3..2.0f64,
        phase in 0.0..6.3f64,
    ) {
        let loop_at = |m: usize| -> Vec<[f64; 2]> {
            (0..m)
                .map(|k| {
                    let a = phase + std::f64::consts::TAU * turns as f64 * k as f64 / m as f64;
                    [radius * a.cos(), radius * a.sin()]
                })
                .collect()
        };
        let base = loop_at(steps);
        prop_assert_eq!(winding_number(&base, [0.0, 0.0]).unwrap(), turns);
        let mut shifted = base.clone();
        shifted.rotate_left(shift % steps);
        prop_assert_eq!(winding_number(&shifted, [0.0, 0.0]).unwrap(), turns);
        let mut reversed = base.clone();
        reversed.reverse();
        prop_assert_eq!(winding_number(&reversed, [0.0, 0.0]).unwrap(), -turns);
        prop_assert_eq!(winding_number(&loop_at(2 * steps), [0.0, 0.0]).unwrap(), turns);
        // a centre outside the loop's disk sees winding zero
        prop_assert_eq!(winding_number(&base, [radius * 3.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn disjointify_partitions_the_union(picks in prop::collection::vec(prop::collection::vec(any::<bool>(), 9), 1..6)) {
        let space = make_space(SpaceSpec::Ndagger, Resolution::new(3).unwrap()).unwrap();
        let clopen = space.clopen();
        let sets: Vec<BTreeSet<usize>> = picks
            .iter()
            .map(|p| {
                (0..clopen.atom_count() as u32)
                    .filter(|&a| p[a as usize % p.len()])
                    .flat_map(|a| clopen.atom_members(a))
                    .collect()
            })
            .collect();
        let parts = disjointify(&sets, clopen).unwrap();
        prop_assert_eq!(parts.len(), sets.len());
        for (n, u) in parts.iter().enumerate() {
            prop_assert!(u.is_subset(&sets[n]));
            prop_assert!(clopen.is_clopen_union(u));
            for w in &parts[..n] {
                prop_assert!(u.is_disjoint(w));
            }
        }
        let before: BTreeSet<usize> = sets.iter().flatten().copied().collect();
        let after: BTreeSet<usize> = parts.iter().flatten().copied().collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn finer_scales_refine_components_and_narrow_paths(
        points in cloud(50),
        heights in prop::collection::vec(0.0..1.0f64, 50),
        s in 0.05..0.3f64,
        grow in 1.0..2.0f64,
    ) {
        let net = Net::from_points(&points, 0.01, Metric::Euclidean).unwrap();
        let n = net.len();
        let (fine, coarse) = (
            build_epsilon_graph(&net, s).unwrap(),
            build_epsilon_graph(&net, s * grow).unwrap(),
        );
        let (a, b) = (graph_components(&fine), graph_components(&coarse));
        for i in 0..n {
            for j in 0..n {
                if a[i] == a[j] {
                    prop_assert_eq!(b[i], b[j]);
                }
            }
        }
        let h = &heights[..n];
        let w_fine = widest_path_value(&fine, 0, n - 1, h).unwrap();
        let w_coarse = widest_path_value(&coarse, 0, n - 1, h).unwrap();
        prop_assert!(w_fine <= w_coarse);
    }
}

#[test]
fn collapsing_another_circle_unwinds_the_loop() {
    let earring = make_space(SpaceSpec::Earring, Resolution::new(5).unwrap()).unwrap();
    for k in 1..=4usize {
        let r = collapse_retraction(&earring, k).unwrap();
        for j in 1..=4usize {
            let image: Vec<[f64; 2]> = earring_circle_loop(&earring, j)
                .unwrap()
                .into_iter()
                .map(|i| {
                    let q = r.apply(earring.net().point(i)).unwrap();
                    [q[0], q[1]]
                })
                .collect();
            let w = winding_number(&image, [1.0 / k as f64, 0.0]).unwrap();
            assert_eq!(w, if j == k { 1 } else { 0 }, "C_{j} under r_{k}");
        }
    }
}
