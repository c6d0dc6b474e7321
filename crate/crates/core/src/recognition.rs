//! Fitch graph recognition by scanning all vertex triples against the
//! catalog of forbidden 3-vertex digraphs.
//!
//! The catalog is not transcribed by hand. It is derived by evaluating
//! every 0/1 edge-labeled tree on three leaves: the digraphs obtained this
//! way are the allowed classes, and the remaining isomorphism classes of
//! irreflexive relations on three vertices are forbidden.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use crate::cotree::{Cotree, EdgeLabeledTree, LabeledEdge};
use crate::relations::{Digraph, FullTuple, IndexGraph, VertexId};
use crate::satisfiability::{build_fitch_cotree, SatResult};

/// Bit of the arc `(x, y)` in a triple mask, for `x != y` in `0..3`.
pub const fn arc_bit(x: usize, y: usize) -> u8 {
    // (0,1) (1,0) (0,2) (2,0) (1,2) (2,1)
    let pair = x + y - 1;
    1 << (2 * pair + (x > y) as usize)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Arc mask of the subgraph of `g` induced on `(a, b, c)`, with `a, b, c`
/// playing the roles of `0, 1, 2`.
pub fn triple_mask(g: &IndexGraph, vertices: [usize; 3]) -> u8 {
    let mut mask = 0;
    for x in 0..3 {
        for y in 0..3 {
            if x != y && g.has_arc(vertices[x], vertices[y]) {
                mask |= arc_bit(x, y);
            }
        }
    }
    mask
}

fn relabel(mask: u8, perm: [usize; 3]) -> u8 {
    let mut out = 0;
    for x in 0..3 {
        for y in 0..3 {
            if x != y && mask & arc_bit(x, y) != 0 {
                out |= arc_bit(perm[x], perm[y]);
            }
        }
    }
    out
}

/// Smallest mask among all relabellings.
pub fn canonical_mask(mask: u8) -> u8 {
    PERMUTATIONS.iter().map(|&p| relabel(mask, p)).min().expect("six permutations")
}

/// Isomorphism class of a digraph on three vertices, by canonical mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleClass(u8);

impl TripleClass {
    pub fn of_mask(mask: u8) -> Self {
        TripleClass(canonical_mask(mask & 0b11_1111))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn arc_count(self) -> u32 {
        self.0.count_ones()
    }

    /// The name of the forbidden classes whose index is fixed independently
    /// of any drawing: `F2` is the directed 3-cycle, `F3` the directed path
    /// `x -> y -> z` with `x, z` non-adjacent, `F4` the same path with
    /// `x <-> z`.
    pub fn pinned_name(self) -> Option<&'static str> {
        let path = arc_bit(0, 1) | arc_bit(1, 2);
        if self == TripleClass::of_mask(path | arc_bit(2, 0)) {
            Some("F2")
        } else if self == TripleClass::of_mask(path) {
            Some("F3")
        } else if self == TripleClass::of_mask(path | arc_bit(0, 2) | arc_bit(2, 0)) {
            Some("F4")
        } else {
            None
        }
    }
}

impl fmt::Display for TripleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let mut arcs = Vec::new();
        for (x, from) in NAMES.iter().enumerate() {
            for (y, to) in NAMES.iter().enumerate() {
                if x != y && self.0 & arc_bit(x, y) != 0 {
                    arcs.push(format!("{from}->{to}"));
                }
            }
        }
        if let Some(name) = self.pinned_name() {
            write!(f, "{name} ")?;
        }
        write!(f, "{{{}}}", arcs.join(", "))
    }
}

/// The 16 isomorphism classes of irreflexive relations on three vertices,
/// split into those that occur in Fitch graphs and those that do not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleCatalog {
    pub allowed: BTreeSet<TripleClass>,
    pub forbidden: BTreeSet<TripleClass>,
    forbidden_mask: [bool; 64],
}

impl TripleCatalog {
    /// Whether the raw (not necessarily canonical) mask is forbidden.
    pub fn is_forbidden_mask(&self, mask: u8) -> bool {
        self.forbidden_mask[(mask & 0b11_1111) as usize]
    }

    pub fn is_forbidden(&self, class: TripleClass) -> bool {
        self.forbidden.contains(&class)
    }
}

/// All 0/1 edge-labeled trees with leaves `x, y, z`: the star and, for each
/// choice of outgroup, the tree with a cherry on the other two leaves.
fn three_leaf_edge_labeled_trees() -> Vec<EdgeLabeledTree> {
    let names = crate::relations::ids(["x", "y", "z"]);
    let leaf = |i: usize| EdgeLabeledTree::Leaf(names[i].clone());
    let edge = |transfer: bool, child| LabeledEdge { transfer, child };
    let bit = |labels: u32, i: u32| labels >> i & 1 == 1;
    let mut out = Vec::new();
    for labels in 0..8u32 {
        out.push(EdgeLabeledTree::Inner(
            (0..3).map(|i| edge(bit(labels, i as u32), leaf(i))).collect(),
        ));
    }
    for outgroup in 0..3 {
        let (p, q) = match outgroup {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for labels in 0..16u32 {
            let cherry = EdgeLabeledTree::Inner(vec![
                edge(bit(labels, 0), leaf(p)),
                edge(bit(labels, 1), leaf(q)),
            ]);
            out.push(EdgeLabeledTree::Inner(vec![
                edge(bit(labels, 2), leaf(outgroup)),
                edge(bit(labels, 3), cherry),
            ]));
        }
    }
    out
}

/// Derives the catalog from edge-labeled trees on three leaves.
pub fn derive_triple_catalog() -> TripleCatalog {
    let mut allowed = BTreeSet::new();
    for tree in three_leaf_edge_labeled_trees() {
        let g = tree.evaluate().expect("well-formed three-leaf tree");
        allowed.insert(TripleClass::of_mask(triple_mask(g.graph(), [0, 1, 2])));
    }
    let all: BTreeSet<TripleClass> = (0..64u8).map(TripleClass::of_mask).collect();
    let forbidden: BTreeSet<TripleClass> = all.difference(&allowed).copied().collect();
    let mut forbidden_mask = [false; 64];
    for (mask, slot) in forbidden_mask.iter_mut().enumerate() {
        *slot = forbidden.contains(&TripleClass::of_mask(mask as u8));
    }
    TripleCatalog {
        allowed,
        forbidden,
        forbidden_mask,
    }
}

/// Process-wide catalog, derived on first use.
pub fn catalog() -> &'static TripleCatalog {
    static CATALOG: OnceLock<TripleCatalog> = OnceLock::new();
    CATALOG.get_or_init(derive_triple_catalog)
}

/// A triple of vertices inducing a forbidden class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenTriple {
    pub vertices: [usize; 3],
    pub class: TripleClass,
}

/// Lexicographically first triple `a < b < c` inducing a forbidden class.
pub fn first_forbidden_triple(g: &IndexGraph) -> Option<ForbiddenTriple> {
    let cat = catalog();
    let n = g.vertex_count();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mask = triple_mask(g, [a, b, c]);
                if cat.is_forbidden_mask(mask) {
                    return Some(ForbiddenTriple {
                        vertices: [a, b, c],
                        class: TripleClass::of_mask(mask),
                    });
                }
            }
        }
    }
    None
}

/// Whether `g` contains no induced forbidden triple.
pub fn is_fitch_index_graph(g: &IndexGraph) -> bool {
    first_forbidden_triple(g).is_none()
}

/// Outcome of [`recognize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recognition {
    Fitch {
        /// Explaining Fitch-cotree, when requested.
        cotree: Option<Cotree>,
    },
    NotFitch {
        triple: [VertexId; 3],
        class: TripleClass,
    },
}

impl Recognition {
    pub fn is_fitch(&self) -> bool {
        matches!(self, Recognition::Fitch { .. })
    }
}

pub fn is_fitch_graph(g: &Digraph) -> bool {
    is_fitch_index_graph(g.graph())
}

/// Decides whether `g` is a Fitch graph. A negative answer carries the
/// first forbidden triple; with `explain`, a positive one carries a
/// Fitch-cotree built from the full tuple of `g`.
pub fn recognize(g: &Digraph, explain: bool) -> Recognition {
    if let Some(witness) = first_forbidden_triple(g.graph()) {
        let [a, b, c] = witness.vertices;
        let names = g.names();
        return Recognition::NotFitch {
            triple: [names[a].clone(), names[b].clone(), names[c].clone()],
            class: witness.class,
        };
    }
    let cotree = explain.then(|| {
        match build_fitch_cotree(FullTuple::from_digraph(g).as_partial()) {
            Ok(SatResult::Satisfiable(t)) => t,
            other => panic!("Fitch graph without explaining cotree: {other:?}"),
        }
    });
    Recognition::Fitch { cotree }
}
