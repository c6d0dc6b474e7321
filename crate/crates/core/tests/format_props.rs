use fitch_core::completion::WeightTable;
use fitch_core::format::{parse_cotree, parse_instance, render_cotree, render_instance, Instance};
use fitch_core::oracle::{numbered_names, random_digraph, random_fitch_cotree, random_partial_tuple, random_weight_table};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn tuple_files_round_trip(n in 0usize..9, seed: u64) {
        let t = random_partial_tuple(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n));
        let i = Instance::Tuple(t);
        prop_assert_eq!(parse_instance(&render_instance(&i)).unwrap(), i);
    }

    #[test]
    fn weighted_files_round_trip(n in 1usize..6, decimals in 0u32..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = numbered_names(n);
        let mut weights: WeightTable = random_weight_table(&mut rng, &names, 1000);
        weights.decimals = decimals;
        let base = random_partial_tuple(&mut rng, &names);
        let i = Instance::Weighted { weights, base };
        let back = parse_instance(&render_instance(&i)).unwrap();
        let (Instance::Weighted { weights: w1, base: b1 }, Instance::Weighted { weights: w2, base: b2 }) = (&back, &i) else {
            return Err(TestCaseError::fail("kind changed"));
        };
        prop_assert_eq!(b1, b2);
        // trailing zeros may lower the stored scale; compare true values
        let scale = |w: &WeightTable, d: u32| 10i64.pow(d - w.decimals);
        let d = w1.decimals.max(w2.decimals);
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (w1.get(i, j), w2.get(i, j));
                prop_assert_eq!(a.bidir * scale(w1, d), b.bidir * scale(w2, d));
                prop_assert_eq!(a.fwd * scale(w1, d), b.fwd * scale(w2, d));
                prop_assert_eq!(a.rev * scale(w1, d), b.rev * scale(w2, d));
                prop_assert_eq!(a.none * scale(w1, d), b.none * scale(w2, d));
            }
        }
    }

    #[test]
    fn digraph_files_round_trip(n in 0usize..8, seed: u64) {
        let g = random_digraph(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n), 0.3);
        let i = Instance::Digraph(g);
        prop_assert_eq!(parse_instance(&render_instance(&i)).unwrap(), i);
    }

    #[test]
    fn random_cotrees_round_trip(n in 1usize..15, seed: u64) {
        let t = random_fitch_cotree(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n));
        prop_assert_eq!(parse_cotree(&render_cotree(&t)).unwrap(), t);
    }
}
