use std::collections::BTreeSet;

use fitch_core::cotree::Cotree;
use fitch_core::oracle::{all_digraphs, enumerate_cotrees, numbered_names, random_digraph, random_fitch_cotree, subsets};
use fitch_core::recognition::{is_fitch_graph, recognize, Recognition};
use fitch_core::relations::{ids, topological_order, Digraph, IndexGraph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn induced(g: &Digraph, keep: &BTreeSet<fitch_core::VertexId>) -> Digraph {
    let idx: Vec<usize> = keep.iter().map(|v| g.index_of(v.as_str()).unwrap()).collect();
    g.induced(&idx)
}

#[test]
fn fitch_iff_some_fitch_cotree_evaluates_to_it() {
    let names = ids(["a", "b", "c", "d"]);
    let from_trees: BTreeSet<Vec<(usize, usize)>> = enumerate_cotrees(&names)
        .unwrap()
        .iter()
        .filter(|t| t.is_fitch_cotree())
        .map(|t: &Cotree| t.evaluate().unwrap().digraph().graph().arcs().collect())
        .collect();
    for g in all_digraphs(&names) {
        let arcs: Vec<_> = g.graph().arcs().collect();
        assert_eq!(is_fitch_graph(&g), from_trees.contains(&arcs), "{arcs:?}");
    }
}

#[test]
fn hereditary_on_all_small_digraphs() {
    for n in 3..=4 {
        let names = numbered_names(n);
        for g in all_digraphs(&names).filter(is_fitch_graph) {
            for keep in subsets(&names, 1) {
                assert!(is_fitch_graph(&induced(&g, &keep)));
            }
        }
    }
}

#[test]
fn hereditary_on_sampled_five_vertex_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let names = numbered_names(5);
    let mut fitch = 0;
    for k in 0..400 {
        let g = if k % 2 == 0 {
            random_fitch_cotree(&mut rng, &names).evaluate().unwrap().digraph()
        } else {
            random_digraph(&mut rng, &names, 0.4)
        };
        if !is_fitch_graph(&g) {
            continue;
        }
        fitch += 1;
        for keep in subsets(&names, 1) {
            assert!(is_fitch_graph(&induced(&g, &keep)));
        }
    }
    assert!(fitch >= 200);
}

#[test]
fn recognize_explains_with_a_matching_cotree() {
    for g in all_digraphs(&numbered_names(4)) {
        match recognize(&g, true) {
            Recognition::Fitch { cotree: Some(t) } => {
                assert!(t.is_fitch_cotree());
                assert_eq!(t.evaluate().unwrap().digraph(), g);
            }
            Recognition::Fitch { cotree: None } => panic!("explanation requested"),
            Recognition::NotFitch { .. } => assert!(!is_fitch_graph(&g)),
        }
    }
}

fn tournament(n: usize, forward: &[bool]) -> Digraph {
    let mut arcs = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            arcs.push(if forward[k] { (i, j) } else { (j, i) });
            k += 1;
        }
    }
    Digraph::from_parts(numbered_names(n), IndexGraph::from_arcs(n, arcs).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn tournaments_are_fitch_iff_acyclic(n in 1usize..8, bits in prop::collection::vec(any::<bool>(), 28)) {
        let g = tournament(n, &bits);
        prop_assert_eq!(is_fitch_graph(&g), topological_order(g.graph(), None).is_some());
    }

    #[test]
    fn dropping_bidirectional_arcs_leaves_a_dag(n in 1usize..10, seed: u64) {
        let g = random_fitch_cotree(&mut ChaCha8Rng::seed_from_u64(seed), &numbered_names(n)).evaluate().unwrap().digraph();
        prop_assert!(is_fitch_graph(&g));
        prop_assert!(topological_order(&g.graph().without_bidirectional(), None).is_some());
    }
}
