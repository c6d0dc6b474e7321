//! Weighted Fitch completion.
//!
//! Every unordered pair `{x, y}` (with `x < y` by name) is in one of four
//! states: non-adjacent, `x -> y`, `y -> x` or bidirectional. A
//! [`WeightTable`] assigns a weight to each state of each pair, and the
//! task is to find a Fitch graph of maximum total weight, optionally
//! consistent with a partial tuple whose classified pairs are then
//! excluded from the objective.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::recognition::{arc_bit, catalog};
use crate::relations::{Digraph, IndexGraph, IndexedTuple, PartialTuple, ValidationReport, VertexId};
use crate::satisfiability::{build_fitch_cotree, Refutation, SatResult};

pub use crate::relations::PairState;

/// Largest accepted weight magnitude; keeps every objective sum within `i64`.
pub const MAX_WEIGHT: i64 = 1 << 40;

/// Default vertex cap of [`solve_exact`].
pub const DEFAULT_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("vertex sets differ")]
    VertexMismatch,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph disagrees with the base tuple on pair {{{0}, {1}}}")]
    BaseDisagreement(VertexId, VertexId),
    #[error("{n} vertices exceed the solver cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("base tuple is invalid: {0}")]
    InvalidBase(ValidationReport),
    #[error("base tuple is not Fitch-satisfiable: {0}")]
    BaseUnsatisfiable(Refutation),
    #[error("weight {0} exceeds the supported magnitude")]
    WeightOutOfRange(i128),
    #[error("self-pair on vertex {0}")]
    SelfPair(VertexId),
}

/// Weights of the four states of one pair, oriented from the smaller name
/// to the larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairWeights {
    pub bidir: i64,
    pub fwd: i64,
    pub rev: i64,
    pub none: i64,
}

impl PairWeights {
    pub fn get(&self, state: PairState) -> i64 {
        match state {
            PairState::None => self.none,
            PairState::Fwd => self.fwd,
            PairState::Rev => self.rev,
            PairState::Bidir => self.bidir,
        }
    }

    /// The same weights seen from the other endpoint.
    pub fn reversed(self) -> Self {
        PairWeights {
            fwd: self.rev,
            rev: self.fwd,
            ..self
        }
    }

    pub fn max(&self) -> i64 {
        self.bidir.max(self.fwd).max(self.rev).max(self.none)
    }

    pub fn max_abs(&self) -> i64 {
        [self.bidir, self.fwd, self.rev, self.none]
            .iter()
            .map(|w| w.abs())
            .max()
            .unwrap_or(0)
    }
}

/// Per-pair state weights over a vertex set. Unlisted pairs weigh zero.
///
/// Weights are integers; a table read from decimal input records the
/// number of decimal places in `decimals`, so the true weight is
/// `w / 10^decimals`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightTable {
    names: Vec<VertexId>,
    weights: BTreeMap<(usize, usize), PairWeights>,
    pub decimals: u32,
}

impl WeightTable {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self, CompletionError> {
        let mut names: Vec<VertexId> = vertices.into_iter().collect();
        names.sort();
        names.dedup();
        Ok(WeightTable {
            names,
            weights: BTreeMap::new(),
            decimals: 0,
        })
    }

    pub fn names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    /// Sets the weights of `{x, y}`, where `fwd` refers to `x -> y`.
    pub fn set(&mut self, x: &str, y: &str, weights: PairWeights) -> Result<(), CompletionError> {
        let i = self.index_of(x).ok_or_else(|| CompletionError::UnknownVertex(x.to_string()))?;
        let j = self.index_of(y).ok_or_else(|| CompletionError::UnknownVertex(y.to_string()))?;
        self.set_indexed(i, j, weights)
    }

    pub fn set_indexed(&mut self, i: usize, j: usize, weights: PairWeights) -> Result<(), CompletionError> {
        if i == j {
            return Err(CompletionError::SelfPair(self.names[i].clone()));
        }
        for w in [weights.bidir, weights.fwd, weights.rev, weights.none] {
            if w.unsigned_abs() > MAX_WEIGHT as u64 {
                return Err(CompletionError::WeightOutOfRange(w as i128));
            }
        }
        if i < j {
            self.weights.insert((i, j), weights);
        } else {
            self.weights.insert((j, i), weights.reversed());
        }
        Ok(())
    }

    /// Weights of `{i, j}` oriented from `min(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> PairWeights {
        let key = (i.min(j), i.max(j));
        self.weights.get(&key).copied().unwrap_or_default()
    }

    /// Listed pairs with their weights, `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), PairWeights)> + '_ {
        self.weights.iter().map(|(&k, &w)| (k, w))
    }

    pub fn max_abs_weight(&self) -> i64 {
        self.weights.values().map(PairWeights::max_abs).max().unwrap_or(0)
    }
}

/// A Fitch graph with its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub graph: Digraph,
    pub objective: i64,
    pub optimal: bool,
}

fn base_states(w_names: &[VertexId], base: Option<&PartialTuple>) -> Result<BTreeMap<(usize, usize), PairState>, CompletionError> {
    let Some(base) = base else {
        return Ok(BTreeMap::new());
    };
    let indexed = base.indexed().map_err(CompletionError::InvalidBase)?;
    if base.names() != w_names {
        return Err(CompletionError::VertexMismatch);
    }
    Ok(indexed.classified())
}

/// Objective of `f`: the sum of the state weights of all pairs not
/// classified by `base` (all pairs without a base).
pub fn score(f: &Digraph, w: &WeightTable, base: Option<&PartialTuple>) -> Result<i64, CompletionError> {
    if f.names() != w.names() {
        return Err(CompletionError::VertexMismatch);
    }
    let fixed = base_states(w.names(), base)?;
    let g = f.graph();
    let n = f.vertex_count();
    let mut total = 0;
    for i in 0..n {
        for j in i + 1..n {
            let state = PairState::from_arcs(g.has_arc(i, j), g.has_arc(j, i));
            match fixed.get(&(i, j)) {
                Some(&s) if s == state => {}
                Some(_) => {
                    return Err(CompletionError::BaseDisagreement(
                        f.names()[i].clone(),
                        f.names()[j].clone(),
                    ))
                }
                None => total += w.get(i, j).get(state),
            }
        }
    }
    Ok(total)
}

/// Exact maximum-weight Fitch graph by branch and bound, for at most
/// [`DEFAULT_CAP`] vertices.
pub fn solve_exact(w: &WeightTable, base: Option<&PartialTuple>) -> Result<Solution, CompletionError> {
    solve_exact_capped(w, base, DEFAULT_CAP)
}

/// Branch and bound over the pairs in lexicographic order, states tried
/// in the order none, forward, reverse, bidirectional.
///
/// A branch is cut as soon as it completes a forbidden triple, or when
/// its score plus the best weight of every remaining pair cannot beat the
/// incumbent. Only strict improvements replace the incumbent, so among
/// all optima the one with the smallest state sequence is returned.
pub fn solve_exact_capped(w: &WeightTable, base: Option<&PartialTuple>, cap: usize) -> Result<Solution, CompletionError> {
    let n = w.vertex_count();
    if n > cap || n > 64 {
        return Err(CompletionError::CapExceeded { n, cap: cap.min(64) });
    }
    let fixed = base_states(w.names(), base)?;
    if let Some(base) = base {
        if let Ok(SatResult::Unsatisfiable(r)) = build_fitch_cotree(base) {
            return Err(CompletionError::BaseUnsatisfiable(r));
        }
    }

    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let choices: Vec<(PairState, i64)> = match fixed.get(&(i, j)) {
                Some(&s) => vec![(s, 0)],
                None => {
                    let pw = w.get(i, j);
                    PairState::ALL.iter().map(|&s| (s, pw.get(s))).collect()
                }
            };
            pairs.push(PairSlot { i, j, choices });
        }
    }
    // best achievable weight of pairs[k..]
    let mut optimistic = vec![0i64; pairs.len() + 1];
    for k in (0..pairs.len()).rev() {
        let best = pairs[k].choices.iter().map(|c| c.1).max().expect("nonempty choices");
        optimistic[k] = optimistic[k + 1] + best;
    }

    let mut search = Search {
        pairs: &pairs,
        optimistic: &optimistic,
        adjacency: vec![0u64; n],
        current: Vec::with_capacity(pairs.len()),
        best: None,
    };
    search.descend(0, 0);
    let (objective, states) = search
        .best
        .expect("a satisfiable base admits at least one Fitch graph");

    let mut arcs = Vec::new();
    for (slot, state) in pairs.iter().zip(states) {
        if state.forward() {
            arcs.push((slot.i, slot.j));
        }
        if state.backward() {
            arcs.push((slot.j, slot.i));
        }
    }
    let graph = IndexGraph::from_arcs(n, arcs).expect("pairs are in range");
    Ok(Solution {
        graph: Digraph::from_parts(w.names().to_vec(), graph).expect("sorted names"),
        objective,
        optimal: true,
    })
}

struct PairSlot {
    i: usize,
    j: usize,
    choices: Vec<(PairState, i64)>,
}

struct Search<'a> {
    pairs: &'a [PairSlot],
    optimistic: &'a [i64],
    adjacency: Vec<u64>,
    current: Vec<PairState>,
    best: Option<(i64, Vec<PairState>)>,
}

impl Search<'_> {
    fn has(&self, x: usize, y: usize) -> bool {
        self.adjacency[x] >> y & 1 == 1
    }

    /// Whether every triple `{a, b, c}` with `a < b` is allowed, where
    /// `(b, c)` is the pair just assigned.
    fn triples_ok(&self, b: usize, c: usize) -> bool {
        let cat = catalog();
        (0..b).all(|a| {
            let v = [a, b, c];
            let mut mask = 0u8;
            for x in 0..3 {
                for y in 0..3 {
                    if x != y && self.has(v[x], v[y]) {
                        mask |= arc_bit(x, y);
                    }
                }
            }
            !cat.is_forbidden_mask(mask)
        })
    }

    fn descend(&mut self, k: usize, score: i64) {
        if let Some((best, _)) = &self.best {
            if score + self.optimistic[k] <= *best {
                return;
            }
        }
        if k == self.pairs.len() {
            self.best = Some((score, self.current.clone()));
            return;
        }
        let slot = &self.pairs[k];
        let (i, j) = (slot.i, slot.j);
        for &(state, weight) in &slot.choices {
            if state.forward() {
                self.adjacency[i] |= 1 << j;
            }
            if state.backward() {
                self.adjacency[j] |= 1 << i;
            }
            if self.triples_ok(i, j) {
                self.current.push(state);
                self.descend(k + 1, score + weight);
                self.current.pop();
            }
            self.adjacency[i] &= !(1 << j);
            self.adjacency[j] &= !(1 << i);
        }
    }
}

/// Weights encoding a maximum acyclic subgraph instance: one point per arc
/// of `g` kept in its orientation, nothing for non-adjacent pairs, and
/// `-|V|^2` for every bidirectional pair.
pub fn reduce_mas_to_fc(g: &Digraph) -> WeightTable {
    let n = g.vertex_count();
    let penalty = -((n * n) as i64);
    let mut w = WeightTable::new(g.names().iter().cloned()).expect("names of a digraph");
    let arcs = g.graph();
    for i in 0..n {
        for j in i + 1..n {
            let weights = PairWeights {
                bidir: penalty,
                fwd: arcs.has_arc(i, j) as i64,
                rev: arcs.has_arc(j, i) as i64,
                none: 0,
            };
            w.set_indexed(i, j, weights).expect("small weights");
        }
    }
    w
}

/// The weight `m0 = |V|^2 (W + 1) + 1` used to pin classified pairs, where
/// `W` is the largest absolute weight of `w`.
pub fn pinning_weight(w: &WeightTable) -> Result<i64, CompletionError> {
    let n = w.vertex_count() as i128;
    let m0 = n * n * (w.max_abs_weight() as i128 + 1) + 1;
    if m0 > MAX_WEIGHT as i128 {
        return Err(CompletionError::WeightOutOfRange(m0));
    }
    Ok(m0 as i64)
}

/// Folds the classified pairs of `t` into the weights: the state `t`
/// prescribes gets `m0`, the other three `-m0`. Unclassified pairs keep
/// their weights.
pub fn embed_partial_in_weights(t: &PartialTuple, w: &WeightTable) -> Result<WeightTable, CompletionError> {
    let fixed = base_states(w.names(), Some(t))?;
    let m0 = pinning_weight(w)?;
    let mut out = w.clone();
    for ((i, j), state) in fixed {
        let pick = |s: PairState| if s == state { m0 } else { -m0 };
        let weights = PairWeights {
            bidir: pick(PairState::Bidir),
            fwd: pick(PairState::Fwd),
            rev: pick(PairState::Rev),
            none: pick(PairState::None),
        };
        out.set_indexed(i, j, weights)?;
    }
    Ok(out)
}

/// The pair state of `{i, j}` (`i < j`) in an index tuple, if classified.
pub fn classified_state(t: &IndexedTuple, i: usize, j: usize) -> Option<PairState> {
    t.classified().get(&(i.min(j), i.max(j))).copied()
}
