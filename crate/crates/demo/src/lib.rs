//! Browser bindings: each function takes instance JSON and returns result JSON.

use fitch_core::completion::{reduce_mas_to_fc, solve_exact_capped};
use fitch_core::format::{parse_instance, render_cotree, render_decimal, render_edge_labeled_tree, Instance};
use fitch_core::recognition::{recognize, Recognition};
use fitch_core::relations::{Digraph, PartialTuple};
use fitch_core::satisfiability::{build_fitch_cotree, SatResult};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Vertex limit of [`solve_weights`], kept low so the page stays responsive.
pub const DEMO_CAP: usize = 6;

fn graph_json(g: &Digraph) -> Value {
    json!({
        "vertices": g.names().iter().map(|v| v.as_str()).collect::<Vec<_>>(),
        "arcs": g.arcs().map(|(x, y)| [x.as_str(), y.as_str()]).collect::<Vec<_>>(),
    })
}

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn check(t: &PartialTuple) -> Result<Value, String> {
    match build_fitch_cotree(t).map_err(|e| e.to_string())? {
        SatResult::Satisfiable(tree) => {
            let full = tree.evaluate().map_err(|e| e.to_string())?;
            let edges = tree.to_edge_labeled_tree().map_err(|e| e.to_string())?;
            Ok(json!({
                "satisfiable": true,
                "cotree": render_cotree(&tree),
                "edgeLabeledTree": render_edge_labeled_tree(&edges),
                "graph": graph_json(&full.digraph()),
            }))
        }
        SatResult::Unsatisfiable(r) => Ok(json!({
            "satisfiable": false,
            "refutation": r.to_string(),
            "context": r.context.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
        })),
    }
}

/// Satisfiability of a partial tuple, with the explaining cotree and the
/// completed graph when satisfiable.
#[wasm_bindgen]
pub fn check_tuple(text: &str) -> String {
    let result = match parse_instance(text) {
        Ok(Instance::Tuple(t)) => check(&t),
        Ok(_) => Err("expected vertices with E0, E1 and Efwd".to_string()),
        Err(e) => Err(e.to_string()),
    };
    result.map(|v| v.to_string()).unwrap_or_else(error)
}

/// Fitch graph test of a digraph given as `vertices` and `arcs`.
#[wasm_bindgen]
pub fn recognize_graph(text: &str) -> String {
    let g = match parse_instance(text) {
        Ok(Instance::Digraph(g)) => g,
        Ok(_) => return error("expected vertices and arcs"),
        Err(e) => return error(e),
    };
    let verdict = match recognize(&g, true) {
        Recognition::Fitch { cotree } => json!({
            "fitch": true,
            "cotree": cotree.map(|t| render_cotree(&t)),
        }),
        Recognition::NotFitch { triple, class } => json!({
            "fitch": false,
            "triple": triple.iter().map(|v| v.as_str()).collect::<Vec<_>>(),
            "class": class.to_string(),
        }),
    };
    let mut out = verdict;
    out["graph"] = graph_json(&g);
    out.to_string()
}

/// Best Fitch graph for a weighted instance. A plain digraph is first
/// turned into the weights of its maximum acyclic subgraph problem.
#[wasm_bindgen]
pub fn solve_weights(text: &str) -> String {
    let (weights, base, reduced) = match parse_instance(text) {
        Ok(Instance::Weighted { weights, base }) => (weights, base, false),
        Ok(Instance::Digraph(g)) => {
            let base = PartialTuple::empty(g.names().iter().cloned());
            (reduce_mas_to_fc(&g), base, true)
        }
        Ok(Instance::Tuple(_)) => return error("expected weights, or a digraph to reduce"),
        Err(e) => return error(e),
    };
    let base = (base.classified_count() > 0).then_some(base);
    match solve_exact_capped(&weights, base.as_ref(), DEMO_CAP) {
        Ok(s) => json!({
            "objective": render_decimal(s.objective, weights.decimals),
            "reducedFromDigraph": reduced,
            "graph": graph_json(&s.graph),
        })
        .to_string(),
        Err(e) => error(e),
    }
}
