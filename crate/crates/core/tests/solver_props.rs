mod common;

use proptest::prelude::*;

use pathcover::cover::{min_pathcover, solve_pathcover};
use pathcover::decomposition::{heuristic_decomposition, to_advanced_nice, to_nice};
use pathcover::generators::{connected_atlas, random_tree, random_tw_graph};
use pathcover::graph::validate_system;
use pathcover::oracle::{brute_pathcover, brute_pathpartition, OracleBudget};
use pathcover::partition::{decide_partition, min_partition_cc, min_partition_dp};
use pathcover::tree::solve_tree_graph;
use pathcover::{Graph, Variant};

use common::half_leaves;

fn random_connected(n: usize, t: usize, seed: u64) -> Graph {
    let mut s = seed;
    loop {
        let (g, _) = random_tw_graph(n, t, 0.6, s).unwrap();
        if g.is_connected() {
            return g;
        }
        s = s.wrapping_add(0x9e37_79b9);
    }
}

#[test]
fn random_trees_match_formula_and_oracle() {
    for seed in 0..200u64 {
        let n = 4 + (seed as usize % 47);
        let g = random_tree(n, seed);
        let sys = solve_tree_graph(&g).unwrap();
        assert!(validate_system(&g, &sys));
        assert_eq!(sys.size(), half_leaves(&g));
        if n <= 10 {
            assert_eq!(
                sys.size(),
                brute_pathcover(&g, Variant::PLAIN, OracleBudget::default())
                    .unwrap()
                    .size()
            );
        }
    }
}

#[test]
fn random_trees_are_spanning_trees() {
    for seed in 0..1000u64 {
        let g = random_tree(1 + (seed as usize % 60), seed);
        assert!(g.is_tree(), "seed {seed}");
    }
}

#[test]
fn full_budget_matches_oracle() {
    for n in 1..=7 {
        for g in connected_atlas(n) {
            let ntd = to_nice(&g, &heuristic_decomposition(&g)).unwrap();
            let dp = solve_pathcover(&g, &ntd, n, Variant::PLAIN)
                .unwrap()
                .unwrap();
            let or = brute_pathcover(&g, Variant::PLAIN, OracleBudget::default()).unwrap();
            assert_eq!(dp.size, or.size(), "{:?}", g.edges());
        }
    }
}

#[test]
fn variant_and_mode_ordering() {
    for n in 1..=6 {
        for g in connected_atlas(n) {
            let plain = brute_pathcover(&g, Variant::PLAIN, OracleBudget::default())
                .unwrap()
                .size();
            let induced = min_pathcover(&g, Variant::INDUCED, None).unwrap().size;
            let disjoint = min_pathcover(&g, Variant::EDGE_DISJOINT, None)
                .unwrap()
                .size;
            let partition = brute_pathpartition(&g, OracleBudget::default())
                .unwrap()
                .size();
            assert!(
                plain <= induced && plain <= disjoint && disjoint <= partition,
                "{:?}",
                g.edges()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn budget_monotonicity(n in 2usize..10, seed in any::<u64>()) {
        let g = random_connected(n, 2, seed);
        let ntd = to_nice(&g, &heuristic_decomposition(&g)).unwrap();
        let opt = min_pathcover(&g, Variant::PLAIN, None).unwrap().size;
        for kappa in 1..=n {
            let sol = solve_pathcover(&g, &ntd, kappa, Variant::PLAIN).unwrap();
            match sol {
                Some(s) => {
                    prop_assert!(kappa >= opt);
                    prop_assert_eq!(s.size, opt);
                    prop_assert!(validate_system(&g, &s.system));
                }
                None => prop_assert!(kappa < opt),
            }
        }
    }

    #[test]
    fn dp_witnesses_are_valid(n in 1usize..12, t in 1usize..4, seed in any::<u64>()) {
        let (g, td) = random_tw_graph(n, t, 0.6, seed).unwrap();
        for variant in [Variant::PLAIN, Variant::INDUCED, Variant::EDGE_DISJOINT] {
            let sol = min_pathcover(&g, variant, Some(&td)).unwrap();
            prop_assert!(validate_system(&g, &sol.system));
            prop_assert!(sol.stats.width <= Some(t));
        }
        let part = min_partition_dp(&g, Variant::PLAIN, Some(&td)).unwrap();
        prop_assert!(validate_system(&g, &part.system));
    }
}

#[test]
fn cut_and_count_agrees_with_oracle_on_random_graphs() {
    for i in 0..200u64 {
        let n = 2 + (i as usize % 9);
        let g = random_connected(n, 2 + (i as usize % 2), i);
        let opt = brute_pathpartition(&g, OracleBudget::default())
            .unwrap()
            .size();
        let antd =
            to_advanced_nice(&to_nice(&g, &heuristic_decomposition(&g)).unwrap(), &g).unwrap();
        for k in 1..=n {
            let d = decide_partition(&g, &antd, k, 20, i).unwrap();
            assert_eq!(d.answer, k >= opt, "{:?} k={k}", g.edges());
        }
        if i % 4 == 0 {
            assert_eq!(min_partition_cc(&g, &antd, 20, i).unwrap(), opt);
            assert_eq!(
                min_partition_dp(&g, Variant::PLAIN, None).unwrap().size,
                opt
            );
        }
    }
}
