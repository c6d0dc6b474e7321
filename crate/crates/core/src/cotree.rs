//! Ordered labeled cotrees and 0/1 edge-labeled trees.
//!
//! A cotree classifies every pair of leaves by the label of their lowest
//! common ancestor: `Zero` for non-adjacent pairs, `One` for bidirectional
//! pairs and `Fwd` for a single arc pointing from the left leaf to the
//! right one. Child order matters only below `Fwd` vertices, but it is
//! preserved everywhere so that output is reproducible.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::relations::{Digraph, FullTuple, PartialTuple, UnorderedPair, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CotreeLabel {
    Zero,
    One,
    Fwd,
}

impl CotreeLabel {
    pub const ALL: [CotreeLabel; 3] = [CotreeLabel::Zero, CotreeLabel::One, CotreeLabel::Fwd];
}

/// Position of a tree vertex as the sequence of child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitchCondition {
    /// A `Zero` vertex has an inner descendant with a different label.
    ZeroAboveNonZero,
    /// A `One` vertex lies below a non-right-most child of a `Fwd` vertex.
    OneLeftOfFwd,
}

/// Two inner vertices `ancestor` and `descendant` witnessing that a cotree
/// is not a Fitch-cotree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitchViolation {
    pub condition: FitchCondition,
    pub ancestor: NodePath,
    pub descendant: NodePath,
}

impl fmt::Display for FitchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.condition {
            FitchCondition::ZeroAboveNonZero => "non-zero vertex below a 0-vertex",
            FitchCondition::OneLeftOfFwd => "1-vertex below a non-right-most child of a D-vertex",
        };
        write!(f, "{what}: {} above {}", self.ancestor, self.descendant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CotreeError {
    #[error("inner vertex at {0} has fewer than two children")]
    UnaryInner(NodePath),
    #[error("leaf {0} occurs more than once")]
    DuplicateLeaf(VertexId),
    #[error("at least two trees are needed to join under a new root")]
    TooFewTrees,
    #[error("not a Fitch-cotree ({0})")]
    NotFitch(FitchViolation),
}

/// An ordered rooted tree with labeled inner vertices and named leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cotree {
    Leaf(VertexId),
    Inner {
        label: CotreeLabel,
        children: Vec<Cotree>,
    },
}

impl Cotree {
    /// Leaf from a string; panics on an invalid name.
    pub fn leaf(name: &str) -> Cotree {
        Cotree::Leaf(VertexId::new(name).expect("valid vertex name"))
    }

    /// Inner vertex without any checks; see [`Cotree::validate`].
    pub fn inner(label: CotreeLabel, children: Vec<Cotree>) -> Cotree {
        Cotree::Inner { label, children }
    }

    pub fn label(&self) -> Option<CotreeLabel> {
        match self {
            Cotree::Leaf(_) => None,
            Cotree::Inner { label, .. } => Some(*label),
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&VertexId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a VertexId>) {
        match self {
            Cotree::Leaf(v) => out.push(v),
            Cotree::Inner { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Cotree::Leaf(_) => 1,
            Cotree::Inner { children, .. } => children.iter().map(Cotree::leaf_count).sum(),
        }
    }

    pub fn inner_count(&self) -> usize {
        match self {
            Cotree::Leaf(_) => 0,
            Cotree::Inner { children, .. } => 1 + children.iter().map(Cotree::inner_count).sum::<usize>(),
        }
    }

    /// Checks that inner vertices have at least two children and leaves are
    /// distinct.
    pub fn validate(&self) -> Result<(), CotreeError> {
        fn walk<'a>(
            t: &'a Cotree,
            path: &mut Vec<usize>,
            seen: &mut BTreeSet<&'a VertexId>,
        ) -> Result<(), CotreeError> {
            match t {
                Cotree::Leaf(v) => {
                    if !seen.insert(v) {
                        return Err(CotreeError::DuplicateLeaf(v.clone()));
                    }
                }
                Cotree::Inner { children, .. } => {
                    if children.len() < 2 {
                        return Err(CotreeError::UnaryInner(NodePath(path.clone())));
                    }
                    for (i, c) in children.iter().enumerate() {
                        path.push(i);
                        walk(c, path, seen)?;
                        path.pop();
                    }
                }
            }
            Ok(())
        }
        walk(self, &mut Vec::new(), &mut BTreeSet::new())
    }

    pub fn is_fitch_cotree(&self) -> bool {
        self.fitch_violation().is_none()
    }

    /// First violation of the Fitch-cotree conditions in preorder, if any.
    pub fn fitch_violation(&self) -> Option<FitchViolation> {
        fn walk(
            t: &Cotree,
            path: &mut Vec<usize>,
            zero_above: Option<&NodePath>,
            fwd_left_above: Option<&NodePath>,
        ) -> Option<FitchViolation> {
            let Cotree::Inner { label, children } = t else {
                return None;
            };
            let here = || NodePath(path.clone());
            if let Some(anc) = zero_above {
                if *label != CotreeLabel::Zero {
                    return Some(FitchViolation {
                        condition: FitchCondition::ZeroAboveNonZero,
                        ancestor: anc.clone(),
                        descendant: here(),
                    });
                }
            }
            if let Some(anc) = fwd_left_above {
                if *label == CotreeLabel::One {
                    return Some(FitchViolation {
                        condition: FitchCondition::OneLeftOfFwd,
                        ancestor: anc.clone(),
                        descendant: here(),
                    });
                }
            }
            let me = here();
            let zero = match (zero_above, label) {
                (Some(a), _) => Some(a.clone()),
                (None, CotreeLabel::Zero) => Some(me.clone()),
                _ => None,
            };
            let last = children.len().saturating_sub(1);
            for (i, c) in children.iter().enumerate() {
                let fwd_left = match fwd_left_above {
                    Some(a) => Some(a.clone()),
                    None if *label == CotreeLabel::Fwd && i < last => Some(me.clone()),
                    None => None,
                };
                path.push(i);
                let found = walk(c, path, zero.as_ref(), fwd_left.as_ref());
                path.pop();
                if found.is_some() {
                    return found;
                }
            }
            None
        }
        walk(self, &mut Vec::new(), None, None)
    }

    /// The full tuple explained by this cotree.
    pub fn evaluate(&self) -> Result<FullTuple, CotreeError> {
        self.validate()?;
        let mut t = PartialTuple::empty(self.leaves().into_iter().cloned());
        fn walk<'a>(node: &'a Cotree, t: &mut PartialTuple) -> Vec<&'a VertexId> {
            match node {
                Cotree::Leaf(v) => vec![v],
                Cotree::Inner { label, children } => {
                    let groups: Vec<Vec<&VertexId>> = children.iter().map(|c| walk(c, t)).collect();
                    for (i, left) in groups.iter().enumerate() {
                        for right in &groups[i + 1..] {
                            for &x in left {
                                for &y in right {
                                    match label {
                                        CotreeLabel::Zero => {
                                            t.e0.insert(UnorderedPair::new(x.clone(), y.clone()));
                                        }
                                        CotreeLabel::One => {
                                            t.e1.insert(UnorderedPair::new(x.clone(), y.clone()));
                                        }
                                        CotreeLabel::Fwd => {
                                            t.efwd.insert((x.clone(), y.clone()));
                                        }
                                    }
                                }
                            }
                        }
                    }
                    groups.into_iter().flatten().collect()
                }
            }
        }
        walk(self, &mut t);
        Ok(FullTuple::new(t).expect("cotree evaluation classifies every pair once"))
    }

    /// Contracts every inner edge joining two equal labels, splicing the
    /// lower vertex's children into its parent's child list in place.
    pub fn contract_to_discriminating(&self) -> Cotree {
        match self {
            Cotree::Leaf(v) => Cotree::Leaf(v.clone()),
            Cotree::Inner { label, children } => {
                let mut merged = Vec::with_capacity(children.len());
                for child in children {
                    match child.contract_to_discriminating() {
                        Cotree::Inner {
                            label: l,
                            children: grand,
                        } if l == *label => merged.extend(grand),
                        other => merged.push(other),
                    }
                }
                Cotree::Inner {
                    label: *label,
                    children: merged,
                }
            }
        }
    }

    pub fn is_discriminating(&self) -> bool {
        match self {
            Cotree::Leaf(_) => true,
            Cotree::Inner { label, children } => children
                .iter()
                .all(|c| c.label() != Some(*label) && c.is_discriminating()),
        }
    }

    /// Joins `trees` under a new root labeled `label`, in the given order.
    pub fn join_under_root(trees: Vec<Cotree>, label: CotreeLabel) -> Result<Cotree, CotreeError> {
        if trees.len() < 2 {
            return Err(CotreeError::TooFewTrees);
        }
        let mut seen = BTreeSet::new();
        for t in &trees {
            for v in t.leaves() {
                if !seen.insert(v) {
                    return Err(CotreeError::DuplicateLeaf(v.clone()));
                }
            }
        }
        Ok(Cotree::Inner {
            label,
            children: trees,
        })
    }

    /// An edge-labeled tree explaining the same Fitch graph.
    ///
    /// The tree is first contracted to discriminating form. `One` vertices
    /// attach their children by transfer edges and `Zero` vertices by
    /// plain edges. A `Fwd` vertex with children `c1..ck` becomes a path
    /// `r1 -> r2 -> ... -> r(k-1)` of transfer edges where `ri` carries `ci`
    /// by a plain edge and the last path vertex carries `ck` by a transfer
    /// edge.
    pub fn to_edge_labeled_tree(&self) -> Result<EdgeLabeledTree, CotreeError> {
        self.validate()?;
        if let Some(v) = self.fitch_violation() {
            return Err(CotreeError::NotFitch(v));
        }
        fn convert(t: &Cotree) -> EdgeLabeledTree {
            match t {
                Cotree::Leaf(v) => EdgeLabeledTree::Leaf(v.clone()),
                Cotree::Inner { label, children } => {
                    let converted: Vec<EdgeLabeledTree> = children.iter().map(convert).collect();
                    match label {
                        CotreeLabel::Zero | CotreeLabel::One => {
                            let transfer = *label == CotreeLabel::One;
                            EdgeLabeledTree::Inner(
                                converted
                                    .into_iter()
                                    .map(|child| LabeledEdge { transfer, child })
                                    .collect(),
                            )
                        }
                        CotreeLabel::Fwd => {
                            let mut rest = converted.into_iter().rev();
                            let mut spine = rest.next().expect("inner vertex has children");
                            for left in rest {
                                spine = EdgeLabeledTree::Inner(vec![
                                    LabeledEdge {
                                        transfer: false,
                                        child: left,
                                    },
                                    LabeledEdge {
                                        transfer: true,
                                        child: spine,
                                    },
                                ]);
                            }
                            spine
                        }
                    }
                }
            }
        }
        Ok(convert(&self.contract_to_discriminating()))
    }
}

/// Edge of an [`EdgeLabeledTree`]; `transfer` is the label 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledEdge {
    pub transfer: bool,
    pub child: EdgeLabeledTree,
}

/// Rooted tree with 0/1 edge labels and named leaves. Child order carries
/// no meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeLabeledTree {
    Leaf(VertexId),
    Inner(Vec<LabeledEdge>),
}

impl EdgeLabeledTree {
    pub fn leaves(&self) -> Vec<&VertexId> {
        fn walk<'a>(t: &'a EdgeLabeledTree, out: &mut Vec<&'a VertexId>) {
            match t {
                EdgeLabeledTree::Leaf(v) => out.push(v),
                EdgeLabeledTree::Inner(edges) => {
                    for e in edges {
                        walk(&e.child, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Checks distinct leaves and that no non-root inner vertex is unary.
    pub fn validate(&self) -> Result<(), CotreeError> {
        fn walk<'a>(
            t: &'a EdgeLabeledTree,
            path: &mut Vec<usize>,
            seen: &mut BTreeSet<&'a VertexId>,
        ) -> Result<(), CotreeError> {
            match t {
                EdgeLabeledTree::Leaf(v) => {
                    if !seen.insert(v) {
                        return Err(CotreeError::DuplicateLeaf(v.clone()));
                    }
                }
                EdgeLabeledTree::Inner(edges) => {
                    let min = if path.is_empty() { 1 } else { 2 };
                    if edges.len() < min {
                        return Err(CotreeError::UnaryInner(NodePath(path.clone())));
                    }
                    for (i, e) in edges.iter().enumerate() {
                        path.push(i);
                        walk(&e.child, path, seen)?;
                        path.pop();
                    }
                }
            }
            Ok(())
        }
        walk(self, &mut Vec::new(), &mut BTreeSet::new())
    }

    /// The Fitch graph: arc `(x, y)` iff the path from `lca(x, y)` down to
    /// `y` has a transfer edge.
    pub fn evaluate(&self) -> Result<Digraph, CotreeError> {
        self.validate()?;
        // (leaf, transfer edge on the path from the current vertex)
        fn walk<'a>(t: &'a EdgeLabeledTree, arcs: &mut Vec<(VertexId, VertexId)>) -> Vec<(&'a VertexId, bool)> {
            match t {
                EdgeLabeledTree::Leaf(v) => vec![(v, false)],
                EdgeLabeledTree::Inner(edges) => {
                    let groups: Vec<Vec<(&VertexId, bool)>> = edges
                        .iter()
                        .map(|e| {
                            walk(&e.child, arcs)
                                .into_iter()
                                .map(|(v, hgt)| (v, hgt || e.transfer))
                                .collect()
                        })
                        .collect();
                    for (i, from) in groups.iter().enumerate() {
                        for (j, to) in groups.iter().enumerate() {
                            if i == j {
                                continue;
                            }
                            for &(x, _) in from {
                                for &(y, hgt) in to {
                                    if hgt {
                                        arcs.push((x.clone(), y.clone()));
                                    }
                                }
                            }
                        }
                    }
                    groups.into_iter().flatten().collect()
                }
            }
        }
        let mut arcs = Vec::new();
        walk(self, &mut arcs);
        let vertices = self.leaves().into_iter().cloned();
        Ok(Digraph::new(vertices, arcs).expect("leaves validated"))
    }
}
