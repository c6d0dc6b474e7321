//! Brute-force ground truth for small instances.
//!
//! Nothing here calls the satisfiability algorithm or the branch-and-bound
//! solver. Oracles work from definitions only: cotree semantics,
//! extension to a full tuple, and the forbidden-triple test, whose catalog
//! is itself derived from tree enumeration. Size caps are hard errors.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::completion::{PairWeights, Solution, WeightTable};
use crate::cotree::{Cotree, CotreeLabel};
use crate::recognition::is_fitch_index_graph;
use crate::relations::{Digraph, IndexGraph, PairState, PartialTuple, UnorderedPair, VertexId};

pub const COTREE_LEAF_CAP: usize = 4;
pub const SAT_VERTEX_CAP: usize = 5;
pub const BEST_FITCH_VERTEX_CAP: usize = 4;
pub const MAS_ARC_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what}: size {size} exceeds the oracle cap of {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("vertex sets differ")]
    VertexMismatch,
    #[error("invalid tuple")]
    InvalidTuple,
}

fn cap(what: &'static str, size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::SizeCap { what, size, cap })
    } else {
        Ok(())
    }
}

/// Every structurally valid ordered labeled cotree on `leaves`, each once.
pub fn enumerate_cotrees(leaves: &[VertexId]) -> Result<Vec<Cotree>, OracleError> {
    cap("cotree leaves", leaves.len(), COTREE_LEAF_CAP)?;
    if leaves.is_empty() {
        return Ok(Vec::new());
    }
    Ok(trees_on(leaves))
}

fn trees_on(leaves: &[VertexId]) -> Vec<Cotree> {
    if leaves.len() == 1 {
        return vec![Cotree::Leaf(leaves[0].clone())];
    }
    let mut out = Vec::new();
    for blocks in ordered_partitions(leaves.len()) {
        if blocks.len() < 2 {
            continue;
        }
        let subtrees: Vec<Vec<Cotree>> = blocks
            .iter()
            .map(|b| trees_on(&b.iter().map(|&i| leaves[i].clone()).collect::<Vec<_>>()))
            .collect();
        for children in cartesian(&subtrees) {
            for label in CotreeLabel::ALL {
                out.push(Cotree::inner(label, children.clone()));
            }
        }
    }
    out
}

/// All ordered set partitions of `0..n`.
fn ordered_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut unordered: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for v in 0..n {
        let mut next = Vec::new();
        for p in &unordered {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(v);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![v]);
            next.push(q);
        }
        unordered = next;
    }
    let mut out = Vec::new();
    for p in unordered {
        for perm in permutations(p.len()) {
            out.push(perm.iter().map(|&i| p[i].clone()).collect());
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn cartesian(options: &[Vec<Cotree>]) -> Vec<Vec<Cotree>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Partial state of one pair `{x, y}`, `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartialPairState {
    Unknown,
    E0,
    E1,
    Fwd,
    Rev,
}

impl PartialPairState {
    pub const ALL: [PartialPairState; 5] = [
        PartialPairState::Unknown,
        PartialPairState::E0,
        PartialPairState::E1,
        PartialPairState::Fwd,
        PartialPairState::Rev,
    ];
}

/// A partial state for every pair of a vertex set, pairs in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAssignment {
    pub names: Vec<VertexId>,
    pub states: Vec<PartialPairState>,
}

impl PairAssignment {
    pub fn pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    pub fn to_tuple(&self) -> PartialTuple {
        let names = &self.names;
        let mut t = PartialTuple::empty(names.iter().cloned());
        for (&(i, j), state) in Self::pairs(names.len()).iter().zip(&self.states) {
            let (x, y) = (names[i].clone(), names[j].clone());
            match state {
                PartialPairState::Unknown => {}
                PartialPairState::E0 => {
                    t.e0.insert(UnorderedPair::new(x, y));
                }
                PartialPairState::E1 => {
                    t.e1.insert(UnorderedPair::new(x, y));
                }
                PartialPairState::Fwd => {
                    t.efwd.insert((x, y));
                }
                PartialPairState::Rev => {
                    t.efwd.insert((y, x));
                }
            }
        }
        t
    }
}

/// All `5^(n choose 2)` partial tuples on `names`.
pub fn all_partial_tuples(names: &[VertexId]) -> impl Iterator<Item = PartialTuple> + '_ {
    let p = names.len() * names.len().saturating_sub(1) / 2;
    let total = 5usize.pow(p as u32);
    (0..total).map(move |mut code| {
        let mut states = vec![PartialPairState::Unknown; p];
        for slot in states.iter_mut().rev() {
            *slot = PartialPairState::ALL[code % 5];
            code /= 5;
        }
        PairAssignment {
            names: names.to_vec(),
            states,
        }
        .to_tuple()
    })
}

fn graph_from_states(n: usize, states: &[PairState]) -> IndexGraph {
    let mut arcs = Vec::new();
    for (&(i, j), s) in PairAssignment::pairs(n).iter().zip(states) {
        if s.forward() {
            arcs.push((i, j));
        }
        if s.backward() {
            arcs.push((j, i));
        }
    }
    IndexGraph::from_arcs(n, arcs).expect("pairs in range")
}

/// All `4^(n choose 2)` digraphs on `names`, in lexicographic order of
/// their pair-state sequences (none < forward < reverse < bidirectional).
pub fn all_digraphs(names: &[VertexId]) -> impl Iterator<Item = Digraph> + '_ {
    let n = names.len();
    let p = n * n.saturating_sub(1) / 2;
    let total = 4usize.pow(p as u32);
    (0..total).map(move |mut code| {
        let mut states = vec![PairState::None; p];
        for slot in states.iter_mut().rev() {
            *slot = PairState::ALL[code % 4];
            code /= 4;
        }
        Digraph::from_parts(names.to_vec(), graph_from_states(n, &states)).expect("sorted names")
    })
}

/// Pair states prescribed by a tuple, per pair in lexicographic order.
fn prescribed(t: &PartialTuple) -> Result<Vec<Option<PairState>>, OracleError> {
    let indexed = t.indexed().map_err(|_| OracleError::InvalidTuple)?;
    let classified = indexed.classified();
    Ok(PairAssignment::pairs(indexed.n)
        .into_iter()
        .map(|p| classified.get(&p).copied())
        .collect())
}

/// Whether some full extension of `t` yields a digraph `(V, E1 ∪ Efwd)`
/// without forbidden triples.
pub fn brute_force_sat(t: &PartialTuple) -> Result<bool, OracleError> {
    let n = t.vertices.len();
    cap("vertices", n, SAT_VERTEX_CAP)?;
    let fixed = prescribed(t)?;
    let free: Vec<usize> = (0..fixed.len()).filter(|&k| fixed[k].is_none()).collect();
    let mut states: Vec<PairState> = fixed.iter().map(|s| s.unwrap_or(PairState::None)).collect();
    for mut code in 0..4usize.pow(free.len() as u32) {
        for &k in &free {
            states[k] = PairState::ALL[code % 4];
            code /= 4;
        }
        if is_fitch_index_graph(&graph_from_states(n, &states)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Maximum objective over all Fitch graphs agreeing with `base`, by
/// exhaustive enumeration. Ties go to the first graph in the order of
/// [`all_digraphs`].
pub fn brute_force_best_fitch(w: &WeightTable, base: Option<&PartialTuple>) -> Result<Option<Solution>, OracleError> {
    let n = w.vertex_count();
    cap("vertices", n, BEST_FITCH_VERTEX_CAP)?;
    let fixed = match base {
        Some(t) => {
            if t.names() != w.names() {
                return Err(OracleError::VertexMismatch);
            }
            prescribed(t)?
        }
        None => vec![None; n * n.saturating_sub(1) / 2],
    };
    let pairs = PairAssignment::pairs(n);
    let mut best: Option<Solution> = None;
    for g in all_digraphs(w.names()) {
        let mut objective = 0;
        let mut consistent = true;
        for (&(i, j), prescribed) in pairs.iter().zip(&fixed) {
            let state = PairState::from_arcs(g.graph().has_arc(i, j), g.graph().has_arc(j, i));
            match prescribed {
                Some(s) if *s != state => {
                    consistent = false;
                    break;
                }
                Some(_) => {}
                None => objective += w.get(i, j).get(state),
            }
        }
        if !consistent || !is_fitch_index_graph(g.graph()) {
            continue;
        }
        if best.as_ref().is_none_or(|b| objective > b.objective) {
            best = Some(Solution {
                graph: g,
                objective,
                optimal: true,
            });
        }
    }
    Ok(best)
}

fn is_acyclic_mask(n: usize, out: &[u32]) -> bool {
    let mut alive: u32 = (1 << n) - 1;
    while alive != 0 {
        // a vertex without live successors can be removed
        let Some(v) = (0..n).find(|&v| alive >> v & 1 == 1 && out[v] & alive == 0) else {
            return false;
        };
        alive &= !(1 << v);
    }
    true
}

/// Size of a largest acyclic arc subset, by trying every subset.
pub fn max_acyclic_subgraph_bruteforce(g: &Digraph) -> Result<usize, OracleError> {
    let arcs: Vec<(usize, usize)> = g.graph().arcs().collect();
    cap("arcs", arcs.len(), MAS_ARC_CAP)?;
    let n = g.vertex_count();
    cap("vertices", n, 32)?;
    let mut best = 0;
    let mut out = vec![0u32; n];
    for subset in 0u32..(1 << arcs.len()) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        out.iter_mut().for_each(|o| *o = 0);
        for (k, &(x, y)) in arcs.iter().enumerate() {
            if subset >> k & 1 == 1 {
                out[x] |= 1 << y;
            }
        }
        if is_acyclic_mask(n, &out) {
            best = size;
        }
    }
    Ok(best)
}

/// Vertex names `v0, v1, ...`; zero-padded so that name order is index order.
pub fn numbered_names(n: usize) -> Vec<VertexId> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n)
        .map(|i| VertexId::new(format!("v{i:0width$}")).expect("valid name"))
        .collect()
}

/// A random Fitch-cotree on `leaves`: random ordered splits and labels,
/// restricted so that no `Zero` vertex has a non-`Zero` inner descendant
/// and no `One` vertex lies left of the right-most child of a `Fwd` vertex.
pub fn random_fitch_cotree<R: Rng>(rng: &mut R, leaves: &[VertexId]) -> Cotree {
    let mut shuffled = leaves.to_vec();
    shuffled.shuffle(rng);
    random_subtree(rng, &shuffled, false, false)
}

fn random_subtree<R: Rng>(rng: &mut R, leaves: &[VertexId], under_zero: bool, left_of_fwd: bool) -> Cotree {
    if leaves.len() == 1 {
        return Cotree::Leaf(leaves[0].clone());
    }
    let label = if under_zero {
        CotreeLabel::Zero
    } else if left_of_fwd {
        *[CotreeLabel::Zero, CotreeLabel::Fwd].choose(rng).expect("nonempty")
    } else {
        *CotreeLabel::ALL.choose(rng).expect("nonempty")
    };
    let k = rng.gen_range(2..=leaves.len().min(4));
    // cut points splitting the leaves into k consecutive nonempty blocks
    let mut cuts: Vec<usize> = (1..leaves.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(leaves.len());
    let children = bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let last = i == k - 1;
            random_subtree(
                rng,
                &leaves[w[0]..w[1]],
                under_zero || label == CotreeLabel::Zero,
                left_of_fwd || (label == CotreeLabel::Fwd && !last),
            )
        })
        .collect();
    Cotree::inner(label, children)
}

fn thin<R: Rng>(rng: &mut R, t: PartialTuple, keep: f64) -> PartialTuple {
    PartialTuple {
        vertices: t.vertices,
        e0: t.e0.into_iter().filter(|_| rng.gen_bool(keep)).collect(),
        e1: t.e1.into_iter().filter(|_| rng.gen_bool(keep)).collect(),
        efwd: t.efwd.into_iter().filter(|_| rng.gen_bool(keep)).collect(),
    }
}

/// Satisfiable partial tuple: a random Fitch-cotree's full tuple with each
/// pair kept with probability `keep`.
pub fn random_satisfiable_tuple<R: Rng>(rng: &mut R, names: &[VertexId], keep: f64) -> PartialTuple {
    let full = random_fitch_cotree(rng, names).evaluate().expect("valid tree");
    thin(rng, full.into_partial(), keep)
}

/// Satisfiable tuple with about `m` classified pairs, sampled from the
/// full tuple of a random Fitch-cotree.
pub fn random_satisfiable_tuple_with_pairs<R: Rng>(rng: &mut R, names: &[VertexId], m: usize) -> PartialTuple {
    let full = random_fitch_cotree(rng, names).evaluate().expect("valid tree");
    let n = names.len();
    let total = n * n.saturating_sub(1) / 2;
    let keep = if total == 0 { 0.0 } else { (m as f64 / total as f64).min(1.0) };
    thin(rng, full.into_partial(), keep)
}

/// Uniformly random partial tuple (each pair in one of five states).
pub fn random_partial_tuple<R: Rng>(rng: &mut R, names: &[VertexId]) -> PartialTuple {
    let p = names.len() * names.len().saturating_sub(1) / 2;
    PairAssignment {
        names: names.to_vec(),
        states: (0..p)
            .map(|_| *PartialPairState::ALL.choose(rng).expect("nonempty"))
            .collect(),
    }
    .to_tuple()
}

/// Weight table with every state weight drawn from `-range..=range`.
pub fn random_weight_table<R: Rng>(rng: &mut R, names: &[VertexId], range: i64) -> WeightTable {
    let mut w = WeightTable::new(names.iter().cloned()).expect("names");
    for (i, j) in PairAssignment::pairs(names.len()) {
        let mut draw = || rng.gen_range(-range..=range);
        let weights = PairWeights {
            bidir: draw(),
            fwd: draw(),
            rev: draw(),
            none: draw(),
        };
        w.set_indexed(i, j, weights).expect("small weights");
    }
    w
}

/// Random digraph, each ordered pair an arc with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, names: &[VertexId], p: f64) -> Digraph {
    let n = names.len();
    let mut arcs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.gen_bool(p) {
                arcs.push((x, y));
            }
        }
    }
    Digraph::from_parts(names.to_vec(), IndexGraph::from_arcs(n, arcs).expect("in range")).expect("sorted")
}

/// All subsets of `names` with at least `min` elements.
pub fn subsets(names: &[VertexId], min: usize) -> Vec<BTreeSet<VertexId>> {
    (0u32..1 << names.len())
        .filter(|m| m.count_ones() as usize >= min)
        .map(|m| {
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognition::{canonical_mask, catalog, triple_mask, TripleClass};
    use crate::relations::ids;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cotree_counts() {
        assert_eq!(enumerate_cotrees(&ids(["a"])).unwrap().len(), 1);
        assert_eq!(enumerate_cotrees(&ids(["a", "b"])).unwrap().len(), 6);
        assert_eq!(enumerate_cotrees(&ids(["a", "b", "c"])).unwrap().len(), 126);
        let four = enumerate_cotrees(&ids(["a", "b", "c", "d"])).unwrap();
        let distinct: BTreeSet<String> = four.iter().map(|t| format!("{t:?}")).collect();
        assert_eq!(distinct.len(), four.len());
        assert_eq!(four.len(), 4_392);
        assert!(four.iter().all(|t| t.validate().is_ok()));
    }

    #[test]
    fn cotree_cap() {
        assert!(matches!(
            enumerate_cotrees(&ids(["a", "b", "c", "d", "e"])),
            Err(OracleError::SizeCap { .. })
        ));
    }

    #[test]
    fn fitch_cotrees_on_three_leaves_give_the_allowed_classes() {
        let classes: BTreeSet<TripleClass> = enumerate_cotrees(&ids(["a", "b", "c"]))
            .unwrap()
            .into_iter()
            .filter(Cotree::is_fitch_cotree)
            .map(|t| {
                let g = t.evaluate().unwrap().digraph();
                TripleClass::of_mask(triple_mask(g.graph(), [0, 1, 2]))
            })
            .collect();
        assert_eq!(classes.len(), 8);
        assert_eq!(classes, catalog().allowed);
    }

    #[test]
    fn all_cotrees_on_three_leaves_give_more_than_fitch_classes() {
        let classes: BTreeSet<u8> = enumerate_cotrees(&ids(["a", "b", "c"]))
            .unwrap()
            .into_iter()
            .map(|t| {
                let g = t.evaluate().unwrap().digraph();
                canonical_mask(triple_mask(g.graph(), [0, 1, 2]))
            })
            .collect();
        assert!(classes.len() > 8);
    }

    #[test]
    fn sat_examples() {
        let fig2 = PartialTuple::from_names(&["a", "b", "c"], &[], &[("b", "c")], &[("a", "b")]);
        assert_eq!(brute_force_sat(&fig2), Ok(true));
        let cycle = PartialTuple::from_names(&["a", "b", "c"], &[], &[], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(brute_force_sat(&cycle), Ok(false));
        let six = numbered_names(6);
        assert!(matches!(
            brute_force_sat(&PartialTuple::empty(six)),
            Err(OracleError::SizeCap { .. })
        ));
    }

    #[test]
    fn satisfiable_count_at_three_vertices() {
        let names = ids(["a", "b", "c"]);
        let count = all_partial_tuples(&names)
            .filter(|t| brute_force_sat(t).unwrap())
            .count();
        assert_eq!(all_partial_tuples(&names).count(), 125);
        assert_eq!(count, 87);
    }

    #[test]
    fn best_fitch_examples() {
        let names = ids(["a", "b", "c"]);
        let cycle = Digraph::new(
            names.clone(),
            [("a", "b"), ("b", "c"), ("c", "a")]
                .map(|(x, y)| (VertexId::new(x).unwrap(), VertexId::new(y).unwrap())),
        )
        .unwrap();
        let w = crate::completion::reduce_mas_to_fc(&cycle);
        assert_eq!(brute_force_best_fitch(&w, None).unwrap().unwrap().objective, 2);

        let zero = WeightTable::new(names).unwrap();
        assert_eq!(brute_force_best_fitch(&zero, None).unwrap().unwrap().objective, 0);

        let mut w = WeightTable::new(ids(["a", "b"])).unwrap();
        w.set("a", "b", PairWeights { bidir: 1, fwd: 5, rev: 0, none: 2 }).unwrap();
        assert_eq!(brute_force_best_fitch(&w, None).unwrap().unwrap().objective, 5);
    }

    #[test]
    fn mas_examples() {
        let id = |s: &str| VertexId::new(s).unwrap();
        let g = |arcs: &[(&str, &str)], names: &[&str]| {
            Digraph::new(ids(names.iter().copied()), arcs.iter().map(|&(x, y)| (id(x), id(y)))).unwrap()
        };
        let cycle = g(&[("a", "b"), ("b", "c"), ("c", "a")], &["a", "b", "c"]);
        assert_eq!(max_acyclic_subgraph_bruteforce(&cycle), Ok(2));
        let dag = g(&[("a", "b"), ("b", "c"), ("a", "c")], &["a", "b", "c"]);
        assert_eq!(max_acyclic_subgraph_bruteforce(&dag), Ok(3));
        let two = g(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")], &["a", "b", "c", "d"]);
        assert_eq!(max_acyclic_subgraph_bruteforce(&two), Ok(2));
    }

    #[test]
    fn random_fitch_cotrees_are_fitch() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let names = numbered_names(9);
        for _ in 0..200 {
            let t = random_fitch_cotree(&mut rng, &names);
            assert!(t.validate().is_ok());
            assert!(t.is_fitch_cotree(), "{t:?}");
            assert_eq!(t.leaf_count(), 9);
        }
    }

    #[test]
    fn numbered_names_sort_in_index_order() {
        let names = numbered_names(12);
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
