mod common;

use proptest::prelude::*;

use common::{arb_graph, arb_graph_and_colouring, count_by_definition};
use frustration::gen;
use frustration::models::{
    build_ilp, build_qcqp, build_ubqp, enumerate_triangles, export_lp, export_qubo, frustration_from_qcqp,
    minimise_binary, parse_lp, parse_qubo, Assignment, ConstraintGroup, IlpOptions, ModelKind,
};
use frustration::oracle::brute_force;
use frustration::sgraph::parse_edge_list;
use frustration::{Colouring, SignedGraph};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn k3_lp_matches_golden_file() {
    let g = parse_edge_list(&golden("k3.txt")).unwrap();
    assert_eq!(export_lp(&build_ilp(&g, IlpOptions::default())).unwrap(), golden("k3.lp"));
}

#[test]
fn golden_lp_optimum_plus_constant_is_one() {
    let lp = parse_lp(&golden("k3.lp")).unwrap();
    assert_eq!(lp.constant, 1);
    // best over all 0/1 points of the parsed file
    let names = ["x_0", "x_1", "x_2", "x_0_1", "x_0_2", "x_1_2"];
    let best = (0u32..64)
        .filter_map(|mask| {
            let values = names.iter().enumerate().map(|(k, n)| (n.to_string(), i64::from(mask >> k & 1))).collect();
            lp.feasible(&values).unwrap().then(|| lp.evaluate(&values).unwrap())
        })
        .min();
    assert_eq!(best, Some(1));
}

#[test]
fn k3_counts_with_and_without_extras() {
    let g = parse_edge_list(&golden("k3.txt")).unwrap();
    let core = build_ilp(&g, IlpOptions::default());
    assert_eq!((core.variable_count(), core.constraint_count()), (6, 3));
    let all = build_ilp(&g, IlpOptions::ALL);
    assert_eq!(all.constraint_count(), 3 + 8);
}

/// Triangles counted as trace(A³)/6 on the unsigned adjacency matrix.
fn triangles_by_trace(g: &SignedGraph) -> usize {
    let n = g.node_count();
    let mut a = vec![vec![0u64; n]; n];
    for e in g.edges() {
        a[e.u][e.v] = 1;
        a[e.v][e.u] = 1;
    }
    let mut trace = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                trace += a[i][j] * a[j][k] * a[k][i];
            }
        }
    }
    (trace / 6) as usize
}

#[test]
fn qubo_rejects_linear_model_and_lp_rejects_quadratic() {
    let g = gen::antibalanced_complete(4);
    assert!(export_qubo(&build_ilp(&g, IlpOptions::default())).is_err());
    assert!(export_lp(&build_qcqp(&g)).is_err());
    assert_eq!(build_qcqp(&g).kind, ModelKind::Qcqp);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_objectives_agree((g, x) in arb_graph_and_colouring(1, 12)) {
        let count = count_by_definition(&g, &x) as i64;
        let m = g.edge_count();
        let q = build_qcqp(&g);
        let z1 = q.evaluate(&Assignment::from_colouring(&q, &x)).unwrap();
        prop_assert_eq!(z1, 2 * m as i64 - 4 * count);
        prop_assert_eq!(frustration_from_qcqp(m, z1), count);
        let u = build_ubqp(&g);
        prop_assert_eq!(u.evaluate(&Assignment::from_colouring(&u, &x)).unwrap(), count);
        for opts in IlpOptions::combinations() {
            let l = build_ilp(&g, opts);
            prop_assert_eq!(l.evaluate(&Assignment::from_colouring(&l, &x)).unwrap(), count);
        }
    }

    #[test]
    fn triangle_rows_match_trace_count(g in arb_graph(0, 10)) {
        let t = triangles_by_trace(&g);
        prop_assert_eq!(enumerate_triangles(&g).len(), t);
        let all = build_ilp(&g, IlpOptions::ALL);
        prop_assert_eq!(all.count_in_group(ConstraintGroup::Triangle), 4 * t);
        prop_assert_eq!(all.constraint_count() - g.edge_count(), g.node_count() + 4 * t + usize::from(g.node_count() > 0));
    }

    #[test]
    fn every_oracle_optimum_satisfies_all_rows(g in arb_graph(1, 9)) {
        // The oracle optimum, complemented if needed so the fixed node is black.
        let best = brute_force(&g).unwrap();
        let mut x = best.colouring.clone();
        if let Some(k) = g.max_degree_node() {
            if !x.is_black(k) {
                x = x.complement();
            }
        }
        let model = build_ilp(&g, IlpOptions::ALL);
        let a = Assignment::from_colouring(&model, &x);
        prop_assert!(model.feasible(&a).unwrap(), "violated {:?}", model.violated(&a).unwrap());
        prop_assert_eq!(model.evaluate(&a).unwrap(), best.value as i64);
    }

    #[test]
    fn lp_and_qubo_text_round_trip((g, x) in arb_graph_and_colouring(1, 10)) {
        let count = count_by_definition(&g, &x) as i64;
        let ilp = build_ilp(&g, IlpOptions { triangles: true, ..IlpOptions::default() });
        let lp = parse_lp(&export_lp(&ilp).unwrap()).unwrap();
        let a = Assignment::from_colouring(&ilp, &x);
        prop_assert_eq!(lp.evaluate(&a.values).unwrap(), count);
        prop_assert!(lp.feasible(&a.values).unwrap());
        let qubo = parse_qubo(&export_qubo(&build_ubqp(&g)).unwrap()).unwrap();
        prop_assert_eq!(qubo.evaluate(x.as_slice()), count);
    }
}

#[test]
fn exact_binary_optimum_is_the_frustration_index() {
    for seed in 0..15 {
        let g = gen::erdos_renyi(10, 20, 8 + seed as usize % 5, seed).unwrap();
        let want = brute_force(&g).unwrap().value as i64;
        let model = build_ilp(&g, IlpOptions::ALL);
        let sol = minimise_binary(&model).unwrap().unwrap();
        assert_eq!(sol.value, want);
        let x: Colouring = model.colouring_from_values(&sol.values);
        assert_eq!(g.frustration_count(&x).unwrap() as i64, want);
        assert!(model.feasible(&Assignment::from_values(&model, &sol.values)).unwrap());
    }
}
