use fitch_core::oracle::{all_partial_tuples, numbered_names, random_partial_tuple, random_satisfiable_tuple, subsets};
use fitch_core::recognition::is_fitch_graph;
use fitch_core::relations::ids;
use fitch_core::satisfiability::{build_fitch_cotree, build_fitch_cotree_traced, complete_tuple, BuildOptions, SatResult};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn heredity_over_the_four_vertex_sweep() {
    let names = ids(["a", "b", "c", "d"]);
    let subsets = subsets(&names, 2);
    for t in all_partial_tuples(&names) {
        if !build_fitch_cotree(&t).unwrap().is_satisfiable() {
            continue;
        }
        for s in &subsets {
            assert!(build_fitch_cotree(&t.induced(s)).unwrap().is_satisfiable(), "{t:?} on {s:?}");
        }
    }
}

proptest! {
    #[test]
    fn satisfiable_outputs_are_sound(n in 1usize..25, keep in 0.0f64..1.0, seed: u64) {
        let t = random_satisfiable_tuple(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n), keep);
        let (result, stats) = build_fitch_cotree_traced(&t, BuildOptions::default()).unwrap();
        let SatResult::Satisfiable(tree) = result else {
            return Err(TestCaseError::fail("generated tuple reported unsatisfiable"));
        };
        prop_assert!(tree.is_fitch_cotree());
        prop_assert!(tree.is_discriminating());
        let full = tree.evaluate().unwrap();
        prop_assert!(t.is_extended_by(&full));
        prop_assert!(is_fitch_graph(&full.digraph()));
        prop_assert!(stats.max_depth <= n);
        prop_assert!(stats.calls < 2 * n);
        prop_assert_eq!(complete_tuple(&t).unwrap(), full);
    }

    #[test]
    fn unsatisfiable_refutations_name_a_subset(n in 2usize..9, seed: u64) {
        let t = random_partial_tuple(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n));
        if let SatResult::Unsatisfiable(r) = build_fitch_cotree(&t).unwrap() {
            prop_assert!(r.context.len() >= 2);
            prop_assert!(r.context.is_subset(&t.vertices));
            prop_assert!(!build_fitch_cotree(&t.induced(&r.context)).unwrap().is_satisfiable());
        }
    }
}
