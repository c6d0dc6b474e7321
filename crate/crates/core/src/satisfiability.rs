//! Fitch-satisfiability of partial tuples.
//!
//! [`build_fitch_cotree`] decides whether a partial tuple `(E0, E1, Efwd)`
//! extends to a full tuple explained by a Fitch-cotree, and builds such a
//! cotree when it does. Each call looks at three derived graphs:
//!
//! - `G0 = (V, E1 ∪ Efwd)`: if it has no arcs, every pair can be made
//!   non-adjacent and a star with root `0` explains the tuple (rule S1).
//! - `G1 = (V, E0 ∪ Efwd)`: if it is disconnected, its components are
//!   solved independently and joined under a root `1` (rule S2).
//! - `Gfwd = (V, E0 ∪ E1 ∪ Efwd)`: if it has several strongly connected
//!   components, a source component `C` of the condensation whose `G0`
//!   restriction is edge-less is split off and placed left of the rest
//!   under a root `D` (rule S3).
//!
//! If no rule applies the tuple is not satisfiable. Which applicable rule
//! is tried first does not change the verdict, so the order is a parameter.
//! Every call strictly shrinks the vertex set and costs `O(n + m)`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cotree::{Cotree, CotreeLabel};
use crate::relations::{
    connected_components, quotient, strongly_connected_components, topological_order, DerivedKind, FullTuple,
    IndexGraph, IndexedTuple, Partition, PartialTuple, ValidationReport, VertexId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    S1,
    S2,
    S3,
}

impl Rule {
    /// All six orders in which the rules can be tried.
    pub fn all_orders() -> [[Rule; 3]; 6] {
        use Rule::*;
        [
            [S1, S2, S3],
            [S1, S3, S2],
            [S2, S1, S3],
            [S2, S3, S1],
            [S3, S1, S2],
            [S3, S2, S1],
        ]
    }
}

/// Why a recursive call found its sub-tuple unsatisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnsatStage {
    /// `G0` has arcs, `G1` is connected and `Gfwd` is strongly connected.
    AllRulesFailed,
    /// `Gfwd` has several strongly connected components, but each of them
    /// contains an `E1` or `Efwd` pair.
    NoEdgelessScc,
    /// Components with edge-less `G0` restriction exist, but none is a
    /// source of the condensation.
    NoValidSource,
}

impl fmt::Display for UnsatStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnsatStage::AllRulesFailed => "no rule applies",
            UnsatStage::NoEdgelessScc => "no strongly connected component with edge-less G0",
            UnsatStage::NoValidSource => "no edge-less strongly connected component is a source",
        })
    }
}

/// The failing recursive call: its stage and vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub stage: UnsatStage,
    pub context: BTreeSet<VertexId>,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.context.iter().map(VertexId::as_str).collect();
        write!(f, "{} on {{{}}}", self.stage, names.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Satisfiable(Cotree),
    Unsatisfiable(Refutation),
}

impl SatResult {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, SatResult::Satisfiable(_))
    }

    pub fn cotree(&self) -> Option<&Cotree> {
        match self {
            SatResult::Satisfiable(t) => Some(t),
            SatResult::Unsatisfiable(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub rule_order: [Rule; 3],
    /// Contract the result to discriminating form.
    pub contract: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            rule_order: [Rule::S1, Rule::S2, Rule::S3],
            contract: true,
        }
    }
}

/// Call statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildStats {
    pub calls: usize,
    pub max_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("invalid tuple: {0}")]
    Invalid(ValidationReport),
    #[error("not Fitch-satisfiable: {0}")]
    Unsatisfiable(Refutation),
}

/// Decides Fitch-satisfiability with the default rule order S1, S2, S3 and
/// returns a discriminating Fitch-cotree when satisfiable.
pub fn build_fitch_cotree(t: &PartialTuple) -> Result<SatResult, ValidationReport> {
    build_fitch_cotree_with(t, BuildOptions::default())
}

pub fn build_fitch_cotree_with(t: &PartialTuple, options: BuildOptions) -> Result<SatResult, ValidationReport> {
    build_fitch_cotree_traced(t, options).map(|(r, _)| r)
}

pub fn build_fitch_cotree_traced(
    t: &PartialTuple,
    options: BuildOptions,
) -> Result<(SatResult, BuildStats), ValidationReport> {
    let indexed = t.indexed()?;
    Ok(build_indexed(&t.names(), &indexed, options))
}

/// As [`build_fitch_cotree_traced`] on an already validated index tuple;
/// vertex `i` is named `names[i]`.
pub fn build_indexed(names: &[VertexId], t: &IndexedTuple, options: BuildOptions) -> (SatResult, BuildStats) {
    assert_eq!(names.len(), t.n, "one name per vertex");
    if t.n == 0 {
        return (
            SatResult::Unsatisfiable(Refutation {
                stage: UnsatStage::AllRulesFailed,
                context: BTreeSet::new(),
            }),
            BuildStats::default(),
        );
    }
    let mut builder = Builder {
        names,
        order: options.rule_order,
        stats: BuildStats::default(),
    };
    let root = Sub {
        vertices: (0..t.n).collect(),
        tuple: t.clone(),
    };
    let result = match builder.build(root, 1) {
        Ok(tree) if options.contract => SatResult::Satisfiable(tree.contract_to_discriminating()),
        Ok(tree) => SatResult::Satisfiable(tree),
        Err(refutation) => SatResult::Unsatisfiable(refutation),
    };
    (result, builder.stats)
}

/// Completes `t` to the full tuple explained by the cotree of
/// [`build_fitch_cotree`].
pub fn complete_tuple(t: &PartialTuple) -> Result<FullTuple, SatError> {
    match build_fitch_cotree(t).map_err(SatError::Invalid)? {
        SatResult::Satisfiable(tree) => Ok(tree.evaluate().expect("built cotrees are well-formed")),
        SatResult::Unsatisfiable(r) => Err(SatError::Unsatisfiable(r)),
    }
}

/// Sub-tuple of a recursive call. `vertices[i]` is the original index of
/// local vertex `i`; the list is increasing, so local order is name order.
struct Sub {
    vertices: Vec<usize>,
    tuple: IndexedTuple,
}

impl Sub {
    /// Splits into the sub-tuples induced by the blocks of `p`. Pairs
    /// between different blocks are dropped.
    fn split(&self, p: &Partition) -> Vec<Sub> {
        let owner = p.block_of();
        let mut local = vec![0; self.vertices.len()];
        let mut parts: Vec<Sub> = p
            .blocks()
            .iter()
            .map(|block| {
                for (i, &v) in block.iter().enumerate() {
                    local[v] = i;
                }
                Sub {
                    vertices: block.iter().map(|&v| self.vertices[v]).collect(),
                    tuple: IndexedTuple {
                        n: block.len(),
                        ..Default::default()
                    },
                }
            })
            .collect();
        let t = &self.tuple;
        let route = |pairs: &[(usize, usize)], parts: &mut Vec<Sub>, pick: fn(&mut IndexedTuple) -> &mut Vec<(usize, usize)>| {
            for &(x, y) in pairs {
                if owner[x] == owner[y] {
                    pick(&mut parts[owner[x]].tuple).push((local[x], local[y]));
                }
            }
        };
        route(&t.e0, &mut parts, |t| &mut t.e0);
        route(&t.e1, &mut parts, |t| &mut t.e1);
        route(&t.efwd, &mut parts, |t| &mut t.efwd);
        parts
    }
}

enum Attempt {
    Built(Result<Cotree, Refutation>),
    NotApplicable(UnsatStage),
}

struct Builder<'a> {
    names: &'a [VertexId],
    order: [Rule; 3],
    stats: BuildStats,
}

impl Builder<'_> {
    fn build(&mut self, sub: Sub, depth: usize) -> Result<Cotree, Refutation> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if sub.vertices.len() == 1 {
            return Ok(Cotree::Leaf(self.names[sub.vertices[0]].clone()));
        }
        let mut stage = UnsatStage::AllRulesFailed;
        for rule in self.order {
            let attempt = match rule {
                Rule::S1 => self.try_s1(&sub),
                Rule::S2 => self.try_s2(&sub, depth),
                Rule::S3 => self.try_s3(&sub, depth),
            };
            match attempt {
                Attempt::Built(result) => return result,
                Attempt::NotApplicable(UnsatStage::AllRulesFailed) => {}
                Attempt::NotApplicable(s) => stage = s,
            }
        }
        Err(Refutation {
            stage,
            context: sub.vertices.iter().map(|&v| self.names[v].clone()).collect(),
        })
    }

    fn try_s1(&mut self, sub: &Sub) -> Attempt {
        if !sub.tuple.e1.is_empty() || !sub.tuple.efwd.is_empty() {
            return Attempt::NotApplicable(UnsatStage::AllRulesFailed);
        }
        let leaves = sub
            .vertices
            .iter()
            .map(|&v| Cotree::Leaf(self.names[v].clone()))
            .collect();
        Attempt::Built(Ok(Cotree::inner(CotreeLabel::Zero, leaves)))
    }

    fn try_s2(&mut self, sub: &Sub, depth: usize) -> Attempt {
        let g1 = sub.tuple.derived(DerivedKind::G1);
        let components = connected_components(&g1);
        if components.len() < 2 {
            return Attempt::NotApplicable(UnsatStage::AllRulesFailed);
        }
        let mut children = Vec::with_capacity(components.len());
        for part in sub.split(&components) {
            match self.build(part, depth + 1) {
                Ok(t) => children.push(t),
                Err(r) => return Attempt::Built(Err(r)),
            }
        }
        Attempt::Built(Ok(Cotree::inner(CotreeLabel::One, children)))
    }

    fn try_s3(&mut self, sub: &Sub, depth: usize) -> Attempt {
        let gfwd = sub.tuple.derived(DerivedKind::Gfwd);
        let sccs = strongly_connected_components(&gfwd);
        if sccs.len() < 2 {
            return Attempt::NotApplicable(UnsatStage::AllRulesFailed);
        }
        let owner = sccs.block_of();
        let mut g0_edge = vec![false; sccs.len()];
        for &(x, y) in sub.tuple.e1.iter().chain(&sub.tuple.efwd) {
            if owner[x] == owner[y] {
                g0_edge[owner[x]] = true;
            }
        }
        let candidates: Vec<usize> = (0..sccs.len()).filter(|&b| !g0_edge[b]).collect();
        if candidates.is_empty() {
            return Attempt::NotApplicable(UnsatStage::NoEdgelessScc);
        }
        let condensation = quotient(&gfwd, &sccs).expect("partition of the same vertex set");
        let Some(order) = topological_order(&condensation, Some(&candidates)) else {
            return Attempt::NotApplicable(UnsatStage::NoValidSource);
        };
        let chosen = order[0];
        let mut rest = Vec::with_capacity(sub.vertices.len());
        for (b, block) in sccs.blocks().iter().enumerate() {
            if b != chosen {
                rest.extend_from_slice(block);
            }
        }
        let halves = Partition::new(sub.vertices.len(), vec![sccs.blocks()[chosen].clone(), rest])
            .expect("two-block partition");
        // split() orders blocks by smallest member; keep the chosen one left
        let mut parts = sub.split(&halves);
        let chosen_first = halves.blocks()[0] == sccs.blocks()[chosen];
        if !chosen_first {
            parts.swap(0, 1);
        }
        let mut children = Vec::with_capacity(2);
        for part in parts {
            match self.build(part, depth + 1) {
                Ok(t) => children.push(t),
                Err(r) => return Attempt::Built(Err(r)),
            }
        }
        Attempt::Built(Ok(Cotree::inner(CotreeLabel::Fwd, children)))
    }
}

/// Graph used by the S2 test, exposed for diagnostics.
pub fn g1_components(t: &IndexedTuple) -> Partition {
    connected_components(&t.derived(DerivedKind::G1))
}

/// Graph used by the S3 test, exposed for diagnostics.
pub fn gfwd_components(t: &IndexedTuple) -> (IndexGraph, Partition) {
    let g = t.derived(DerivedKind::Gfwd);
    let p = strongly_connected_components(&g);
    (g, p)
}
