//! Fitch graphs from partial xenology relations.
//!
//! A partial tuple classifies some vertex pairs as unrelated (`E0`),
//! mutually related (`E1`) or directed (`Efwd`). This crate decides whether
//! such a tuple extends to a Fitch graph and builds an explaining cotree,
//! recognizes Fitch graphs by forbidden triples, and solves weighted Fitch
//! completion exactly for small vertex sets.

pub mod completion;
pub mod cotree;
pub mod format;
pub mod oracle;
pub mod recognition;
pub mod relations;
pub mod satisfiability;

pub use completion::{
    embed_partial_in_weights, reduce_mas_to_fc, score, solve_exact, solve_exact_capped, CompletionError, PairWeights,
    Solution, WeightTable,
};
pub use cotree::{Cotree, CotreeLabel, EdgeLabeledTree};
pub use format::{export_dot, parse_cotree, parse_instance, render_cotree, FormatError, Instance};
pub use recognition::{is_fitch_graph, recognize, Recognition};
pub use relations::{Digraph, FullTuple, PairState, PartialTuple, UnorderedPair, ValidationReport, VertexId};
pub use satisfiability::{build_fitch_cotree, complete_tuple, SatResult};
