//! Text formats: JSON instance files, Newick-like cotrees, DOT.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::completion::{CompletionError, PairWeights, WeightTable, MAX_WEIGHT};
use crate::cotree::{Cotree, CotreeError, CotreeLabel, EdgeLabeledTree};
use crate::relations::{Digraph, GraphError, PartialTuple, UnorderedPair, ValidationReport, VertexId};

/// Most decimal places accepted in a weight.
pub const MAX_DECIMALS: u32 = 9;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("invalid tuple: {0}")]
    Invalid(ValidationReport),
    #[error("newick, offset {offset}: {message}")]
    Newick { offset: usize, message: String },
}

impl FormatError {
    fn field(field: impl Into<String>, message: impl ToString) -> Self {
        FormatError::Field {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Tuple(PartialTuple),
    /// Weights with the tuple of already classified pairs (possibly empty).
    Weighted { weights: WeightTable, base: PartialTuple },
    Digraph(Digraph),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    vertices: Vec<String>,
    #[serde(rename = "E0", default, skip_serializing_if = "Option::is_none")]
    e0: Option<Vec<(String, String)>>,
    #[serde(rename = "E1", default, skip_serializing_if = "Option::is_none")]
    e1: Option<Vec<(String, String)>>,
    #[serde(rename = "Efwd", default, skip_serializing_if = "Option::is_none")]
    efwd: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<RawWeights>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<(String, String)>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    pair: (String, String),
    bidir: serde_json::Number,
    fwd: serde_json::Number,
    rev: serde_json::Number,
    none: serde_json::Number,
}

fn vertex(field: &str, name: &str) -> Result<VertexId, FormatError> {
    VertexId::new(name).map_err(|e: GraphError| FormatError::field(field, e))
}

fn pairs(field: &str, list: Option<Vec<(String, String)>>) -> Result<Vec<(VertexId, VertexId)>, FormatError> {
    list.unwrap_or_default()
        .iter()
        .enumerate()
        .map(|(k, (x, y))| {
            let f = format!("{field}[{k}]");
            Ok((vertex(&f, x)?, vertex(&f, y)?))
        })
        .collect()
}

/// Parses an instance file.
///
/// A file with `arcs` is a digraph; a file with `weights` is a weighted
/// instance whose `E0`/`E1`/`Efwd` form the base; anything else is a
/// partial tuple. Duplicate pairs collapse.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let mut vertices = BTreeSet::new();
    for (k, v) in raw.vertices.iter().enumerate() {
        let field = format!("vertices[{k}]");
        if !vertices.insert(vertex(&field, v)?) {
            return Err(FormatError::field(field, format!("duplicate vertex {v}")));
        }
    }

    if let Some(arcs) = raw.arcs {
        for (field, present) in [
            ("E0", raw.e0.is_some()),
            ("E1", raw.e1.is_some()),
            ("Efwd", raw.efwd.is_some()),
            ("weights", raw.weights.is_some()),
        ] {
            if present {
                return Err(FormatError::field(field, "not allowed together with arcs"));
            }
        }
        let arcs = pairs("arcs", Some(arcs))?;
        return Digraph::new(vertices, arcs)
            .map(Instance::Digraph)
            .map_err(|e| FormatError::field("arcs", e));
    }

    let mut t = PartialTuple::empty(vertices);
    t.e0 = pairs("E0", raw.e0)?
        .into_iter()
        .map(|(x, y)| UnorderedPair::new(x, y))
        .collect();
    t.e1 = pairs("E1", raw.e1)?
        .into_iter()
        .map(|(x, y)| UnorderedPair::new(x, y))
        .collect();
    t.efwd = pairs("Efwd", raw.efwd)?.into_iter().collect();
    let report = t.validate();
    if !report.is_ok() {
        return Err(FormatError::Invalid(report));
    }

    let Some(entries) = raw.weights else {
        return Ok(Instance::Tuple(t));
    };
    let mut parsed = Vec::with_capacity(entries.len());
    for (k, e) in entries.iter().enumerate() {
        let field = format!("weights[{k}]");
        let x = vertex(&field, &e.pair.0)?;
        let y = vertex(&field, &e.pair.1)?;
        let mut values = [(0i128, 0u32); 4];
        for (slot, (name, n)) in values
            .iter_mut()
            .zip([("bidir", &e.bidir), ("fwd", &e.fwd), ("rev", &e.rev), ("none", &e.none)])
        {
            *slot = parse_decimal(&n.to_string()).map_err(|m| FormatError::field(format!("{field}.{name}"), m))?;
        }
        parsed.push((field, x, y, values));
    }
    let decimals = parsed
        .iter()
        .flat_map(|(_, _, _, v)| v.iter().map(|&(_, d)| d))
        .max()
        .unwrap_or(0);
    let mut w = WeightTable::new(t.vertices.iter().cloned()).expect("valid names");
    w.decimals = decimals;
    let mut seen: BTreeMap<(VertexId, VertexId), PairWeights> = BTreeMap::new();
    for (field, x, y, values) in parsed {
        let mut scaled = [0i64; 4];
        for (out, (m, d)) in scaled.iter_mut().zip(values) {
            let v = m * 10i128.pow(decimals - d);
            if v.unsigned_abs() > MAX_WEIGHT as u128 {
                return Err(FormatError::field(&field, CompletionError::WeightOutOfRange(v)));
            }
            *out = v as i64;
        }
        let pw = PairWeights {
            bidir: scaled[0],
            fwd: scaled[1],
            rev: scaled[2],
            none: scaled[3],
        };
        let key_pw = if x <= y { pw } else { pw.reversed() };
        let key = if x <= y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        if let Some(prev) = seen.insert(key, key_pw) {
            if prev != key_pw {
                return Err(FormatError::field(field, format!("conflicting weights for {{{x}, {y}}}")));
            }
        }
        w.set(x.as_str(), y.as_str(), pw).map_err(|e| FormatError::field(&field, e))?;
    }
    Ok(Instance::Weighted { weights: w, base: t })
}

/// Parses a decimal literal into `(mantissa, places)`, exact.
fn parse_decimal(text: &str) -> Result<(i128, u32), String> {
    let bad = || format!("not a finite decimal with at most {MAX_DECIMALS} places: {text}");
    let (mantissa_text, exponent) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (int, frac) = mantissa_text.split_once('.').unwrap_or((mantissa_text, ""));
    let digits = format!("{int}{frac}");
    let mut mantissa = i128::from_str(&digits).map_err(|_| bad())?;
    let mut places = frac.len() as i64 - exponent as i64;
    while places < 0 {
        mantissa = mantissa.checked_mul(10).ok_or_else(bad)?;
        places += 1;
    }
    while places > 0 && mantissa % 10 == 0 {
        mantissa /= 10;
        places -= 1;
    }
    if places > MAX_DECIMALS as i64 {
        return Err(bad());
    }
    Ok((mantissa, places as u32))
}

/// `value / 10^decimals` as an exact decimal literal.
pub fn render_decimal(value: i64, decimals: u32) -> String {
    if decimals == 0 {
        return value.to_string();
    }
    let scale = 10u64.pow(decimals);
    let abs = value.unsigned_abs();
    let sign = if value < 0 { "-" } else { "" };
    format!("{sign}{}.{:0width$}", abs / scale, abs % scale, width = decimals as usize)
}

fn decimal_number(value: i64, decimals: u32) -> serde_json::Number {
    serde_json::Number::from_str(&render_decimal(value, decimals)).expect("decimal literal")
}

fn raw_pairs<'a>(it: impl Iterator<Item = (&'a VertexId, &'a VertexId)>) -> Vec<(String, String)> {
    it.map(|(x, y)| (x.to_string(), y.to_string())).collect()
}

fn raw_tuple(t: &PartialTuple) -> RawInstance {
    RawInstance {
        vertices: t.vertices.iter().map(|v| v.to_string()).collect(),
        e0: Some(raw_pairs(t.e0.iter().map(|p| (p.first(), p.second())))),
        e1: Some(raw_pairs(t.e1.iter().map(|p| (p.first(), p.second())))),
        efwd: Some(raw_pairs(t.efwd.iter().map(|(x, y)| (x, y)))),
        ..RawInstance::default()
    }
}

/// Renders an instance as JSON that [`parse_instance`] reads back.
pub fn render_instance(instance: &Instance) -> String {
    let raw = match instance {
        Instance::Tuple(t) => raw_tuple(t),
        Instance::Weighted { weights, base } => {
            let names = weights.names();
            let mut raw = raw_tuple(base);
            raw.vertices = names.iter().map(|v| v.to_string()).collect();
            raw.weights = Some(
                weights
                    .entries()
                    .map(|((i, j), w)| RawWeights {
                        pair: (names[i].to_string(), names[j].to_string()),
                        bidir: decimal_number(w.bidir, weights.decimals),
                        fwd: decimal_number(w.fwd, weights.decimals),
                        rev: decimal_number(w.rev, weights.decimals),
                        none: decimal_number(w.none, weights.decimals),
                    })
                    .collect(),
            );
            raw
        }
        Instance::Digraph(g) => RawInstance {
            vertices: g.names().iter().map(|v| v.to_string()).collect(),
            arcs: Some(raw_pairs(g.arcs())),
            ..RawInstance::default()
        },
    };
    // one field per line, each value compact
    let value = serde_json::to_value(&raw).expect("serializable");
    let serde_json::Value::Object(fields) = value else {
        unreachable!("instances serialize to objects")
    };
    let lines: Vec<String> = fields
        .iter()
        .map(|(k, v)| match v {
            serde_json::Value::Array(items) if k == "weights" && !items.is_empty() => {
                let items: Vec<String> = items.iter().map(|i| format!("    {i}")).collect();
                format!("  \"{k}\": [\n{}\n  ]", items.join(",\n"))
            }
            _ => format!("  \"{k}\": {v}"),
        })
        .collect();
    format!("{{\n{}\n}}", lines.join(",\n"))
}

pub fn render_tuple(t: &PartialTuple) -> String {
    render_instance(&Instance::Tuple(t.clone()))
}

fn label_char(label: CotreeLabel) -> char {
    match label {
        CotreeLabel::Zero => '0',
        CotreeLabel::One => '1',
        CotreeLabel::Fwd => 'D',
    }
}

/// Newick-like text: `(children)label` with labels `0`, `1`, `D`, ending in `;`.
pub fn render_cotree(c: &Cotree) -> String {
    fn go(c: &Cotree, out: &mut String) {
        match c {
            Cotree::Leaf(v) => out.push_str(v.as_str()),
            Cotree::Inner { label, children } => {
                out.push('(');
                for (k, child) in children.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    go(child, out);
                }
                out.push(')');
                out.push(label_char(*label));
            }
        }
    }
    let mut out = String::new();
    go(c, &mut out);
    out.push(';');
    out
}

struct NewickParser<'a> {
    text: &'a str,
    pos: usize,
}

impl NewickParser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Newick {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), FormatError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn node(&mut self) -> Result<Cotree, FormatError> {
        if self.peek() == Some('(') {
            self.pos += 1;
            let mut children = vec![self.node()?];
            while self.peek() == Some(',') {
                self.pos += 1;
                children.push(self.node()?);
            }
            self.expect(')')?;
            if children.len() < 2 {
                return self.error("inner vertex needs at least two children");
            }
            let label = match self.peek() {
                Some('0') => CotreeLabel::Zero,
                Some('1') => CotreeLabel::One,
                Some('D') => CotreeLabel::Fwd,
                _ => return self.error("expected label 0, 1 or D"),
            };
            self.pos += 1;
            Ok(Cotree::inner(label, children))
        } else {
            self.skip_ws();
            let rest = &self.text[self.pos..];
            let len = rest
                .find(|c: char| c.is_whitespace() || crate::relations::RESERVED_CHARS.contains(&c))
                .unwrap_or(rest.len());
            if len == 0 {
                return self.error("expected a leaf name or '('");
            }
            let name = &rest[..len];
            self.pos += len;
            Ok(Cotree::Leaf(VertexId::new(name).expect("delimited name is valid")))
        }
    }
}

/// Parses the output of [`render_cotree`]; whitespace between tokens is ignored.
pub fn parse_cotree(text: &str) -> Result<Cotree, FormatError> {
    let mut p = NewickParser { text, pos: 0 };
    let tree = p.node()?;
    p.expect(';')?;
    if p.peek().is_some() {
        return p.error("trailing input after ';'");
    }
    match tree.validate() {
        Ok(()) => Ok(tree),
        Err(CotreeError::DuplicateLeaf(v)) => p.error(format!("duplicate leaf {v}")),
        Err(e) => p.error(e.to_string()),
    }
}

/// Edge-labeled tree as Newick with `:0`/`:1` edge labels.
pub fn render_edge_labeled_tree(t: &EdgeLabeledTree) -> String {
    fn go(t: &EdgeLabeledTree, out: &mut String) {
        match t {
            EdgeLabeledTree::Leaf(v) => out.push_str(v.as_str()),
            EdgeLabeledTree::Inner(edges) => {
                out.push('(');
                for (k, e) in edges.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    go(&e.child, out);
                    out.push_str(if e.transfer { ":1" } else { ":0" });
                }
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut out);
    out.push(';');
    out
}

fn dot_id(name: &str) -> String {
    let plain = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if plain && !["node", "edge", "graph", "digraph", "subgraph", "strict"].contains(&name.to_ascii_lowercase().as_str()) {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// DOT digraph; vertices and arcs in lexicographic order.
pub fn export_dot(g: &Digraph) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.names() {
        writeln!(out, "  {};", dot_id(v.as_str())).expect("string write");
    }
    for (x, y) in g.arcs() {
        writeln!(out, "  {} -> {};", dot_id(x.as_str()), dot_id(y.as_str())).expect("string write");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::ids;

    fn fig2() -> PartialTuple {
        PartialTuple::from_names(&["a", "b", "c"], &[], &[("b", "c")], &[("a", "b")])
    }

    #[test]
    fn parse_examples() {
        let text = r#"{"vertices":["a","b","c"],"E1":[["b","c"]],"Efwd":[["a","b"]]}"#;
        assert_eq!(parse_instance(text).unwrap(), Instance::Tuple(fig2()));

        let bare = parse_instance(r#"{"vertices":["a","b"]}"#).unwrap();
        assert_eq!(bare, Instance::Tuple(PartialTuple::from_names(&["a", "b"], &[], &[], &[])));

        let anti = parse_instance(r#"{"vertices":["a","b"],"Efwd":[["a","b"],["b","a"]]}"#);
        assert!(matches!(anti, Err(FormatError::Invalid(_))), "{anti:?}");
    }

    #[test]
    fn duplicates_collapse() {
        let text = r#"{"vertices":["a","b"],"E1":[["a","b"],["b","a"]]}"#;
        let Instance::Tuple(t) = parse_instance(text).unwrap() else { panic!() };
        assert_eq!(t.e1.len(), 1);
    }

    #[test]
    fn rejects_unknown_fields_with_position() {
        let err = parse_instance("{\"vertices\":[\"a\"],\n\"E2\":[]}").unwrap_err();
        let FormatError::Syntax { line, message, .. } = err else { panic!("{err:?}") };
        assert_eq!(line, 2);
        assert!(message.contains("E2"), "{message}");
    }

    #[test]
    fn field_context() {
        let err = parse_instance(r#"{"vertices":["a","b"],"Efwd":[["a","b"],["a","b c"]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("Efwd[1]"), "{err}");
        let err = parse_instance(r#"{"vertices":["a","a"]}"#).unwrap_err();
        assert!(err.to_string().starts_with("vertices[1]"), "{err}");
    }

    #[test]
    fn weights_scale_decimals() {
        let text = r#"{"vertices":["a","b","c"],"weights":[
            {"pair":["b","a"],"bidir":1,"fwd":0.25,"rev":-2,"none":0},
            {"pair":["a","c"],"bidir":1e1,"fwd":0,"rev":0,"none":0.5}]}"#;
        let Instance::Weighted { weights, base } = parse_instance(text).unwrap() else { panic!() };
        assert_eq!(weights.decimals, 2);
        assert_eq!(base.classified_count(), 0);
        // fwd of ["b","a"] is b -> a, the table's rev for {a, b}
        assert_eq!(weights.get(0, 1), PairWeights { bidir: 100, fwd: -200, rev: 25, none: 0 });
        assert_eq!(weights.get(0, 2), PairWeights { bidir: 1000, fwd: 0, rev: 0, none: 50 });
    }

    #[test]
    fn weight_errors() {
        let many = r#"{"vertices":["a","b"],"weights":[{"pair":["a","b"],"bidir":0.0000000001,"fwd":0,"rev":0,"none":0}]}"#;
        assert!(parse_instance(many).unwrap_err().to_string().contains("weights[0].bidir"));
        let big = r#"{"vertices":["a","b"],"weights":[{"pair":["a","b"],"bidir":1e20,"fwd":0,"rev":0,"none":0}]}"#;
        assert!(parse_instance(big).is_err());
        let missing = r#"{"vertices":["a","b"],"weights":[{"pair":["a","b"],"bidir":1}]}"#;
        assert!(matches!(parse_instance(missing), Err(FormatError::Syntax { .. })));
        let clash = r#"{"vertices":["a","b"],"weights":[
            {"pair":["a","b"],"bidir":1,"fwd":0,"rev":0,"none":0},
            {"pair":["b","a"],"bidir":2,"fwd":0,"rev":0,"none":0}]}"#;
        assert!(parse_instance(clash).unwrap_err().to_string().contains("conflicting"));
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(parse_decimal("12"), Ok((12, 0)));
        assert_eq!(parse_decimal("-0.50"), Ok((-5, 1)));
        assert_eq!(parse_decimal("2.5E-1"), Ok((25, 2)));
        assert_eq!(parse_decimal("3e2"), Ok((300, 0)));
        assert_eq!(decimal_number(-5, 2).to_string(), "-0.05");
        assert_eq!(decimal_number(1234, 3).to_string(), "1.234");
    }

    #[test]
    fn weighted_round_trip() {
        let text = r#"{"vertices":["a","b","c"],"Efwd":[["a","b"]],"weights":[
            {"pair":["c","a"],"bidir":-1.5,"fwd":2,"rev":0,"none":0.25}]}"#;
        let first = parse_instance(text).unwrap();
        assert_eq!(parse_instance(&render_instance(&first)).unwrap(), first);
    }

    #[test]
    fn digraph_instances() {
        let g = parse_instance(r#"{"vertices":["a","b"],"arcs":[["a","b"],["b","a"]]}"#).unwrap();
        let Instance::Digraph(d) = &g else { panic!() };
        assert!(d.has_arc("a", "b") && d.has_arc("b", "a"));
        assert_eq!(parse_instance(&render_instance(&g)).unwrap(), g);
        assert!(parse_instance(r#"{"vertices":["a","b"],"arcs":[],"E1":[]}"#).is_err());
        assert!(parse_instance(r#"{"vertices":["a"],"arcs":[["a","a"]]}"#).is_err());
    }

    #[test]
    fn newick_examples() {
        use CotreeLabel::*;
        let left = Cotree::inner(One, vec![Cotree::inner(Fwd, vec![Cotree::leaf("a"), Cotree::leaf("b")]), Cotree::leaf("c")]);
        let right = Cotree::inner(Fwd, vec![Cotree::leaf("a"), Cotree::inner(One, vec![Cotree::leaf("b"), Cotree::leaf("c")])]);
        assert_eq!(render_cotree(&left), "((a,b)D,c)1;");
        assert_eq!(render_cotree(&right), "(a,(b,c)1)D;");
        assert_eq!(render_cotree(&Cotree::leaf("a")), "a;");
        for t in [left, right, Cotree::leaf("a")] {
            assert_eq!(parse_cotree(&render_cotree(&t)).unwrap(), t);
        }
        assert_eq!(parse_cotree(" ( a , b ) 0 ; ").unwrap(), Cotree::inner(Zero, vec![Cotree::leaf("a"), Cotree::leaf("b")]));
    }

    #[test]
    fn newick_errors() {
        for bad in ["(a)1;", "(a,b);", "(a,b)2;", "(a,b)1", "(a,a)1;", "(a,b)1;x", "();", ";"] {
            assert!(parse_cotree(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn dot_examples() {
        let id = |s: &str| VertexId::new(s).unwrap();
        let one = Digraph::new(ids(["a", "b"]), [(id("a"), id("b"))]).unwrap();
        assert!(export_dot(&one).contains("  a -> b;\n"));
        let lone = export_dot(&Digraph::new(ids(["a"]), []).unwrap());
        assert_eq!(lone, "digraph G {\n  a;\n}\n");
        let both = export_dot(&Digraph::new(ids(["a", "b"]), [(id("a"), id("b")), (id("b"), id("a"))]).unwrap());
        assert!(both.contains("a -> b;") && both.contains("b -> a;"));
        let odd = export_dot(&Digraph::new(ids(["x-1", "node"]), []).unwrap());
        assert!(odd.contains("\"x-1\";") && odd.contains("\"node\";"));
    }
}
