//! Vertex names, digraphs, relation tuples and the graph primitives the
//! rest of the crate is built on: (strongly) connected components,
//! quotients and topological orders.
//!
//! Vertices of every graph are identified by indices `0..n`. Named values
//! ([`Digraph`], [`PartialTuple`]) keep their names sorted, so index order
//! coincides with the lexicographic order of names and all tie-breaking
//! can be done on indices.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Characters that may not appear in a vertex name.
pub const RESERVED_CHARS: &[char] = &['(', ')', ',', ';', ':'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("self-loop on vertex {0}")]
    SelfLoop(String),
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("partition does not match the vertex set")]
    PartitionMismatch,
}

/// A vertex name: non-empty, no whitespace, none of `( ) , ; :`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Result<Self, GraphError> {
        let name = name.into();
        let valid = !name.is_empty()
            && !name
                .chars()
                .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c));
        if valid {
            Ok(VertexId(name))
        } else {
            Err(GraphError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Builds a list of vertex ids from string literals. Panics on invalid names,
/// so it is meant for tests and fixed examples.
pub fn ids<'a>(names: impl IntoIterator<Item = &'a str>) -> Vec<VertexId> {
    names
        .into_iter()
        .map(|n| VertexId::new(n).expect("valid vertex name"))
        .collect()
}

/// Irreflexive digraph on the vertices `0..n`.
///
/// Adjacency lists are kept sorted and free of duplicates, so two graphs
/// with the same arcs compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexGraph {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    arc_count: usize,
}

impl IndexGraph {
    pub fn edgeless(n: usize) -> Self {
        IndexGraph {
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    pub fn from_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (x, y) in arcs {
            for index in [x, y] {
                if index >= n {
                    return Err(GraphError::IndexOutOfRange { index, n });
                }
            }
            if x == y {
                return Err(GraphError::SelfLoop(x.to_string()));
            }
            succ[x].push(y);
            pred[y].push(x);
        }
        let mut arc_count = 0;
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        for list in &succ {
            arc_count += list.len();
        }
        Ok(IndexGraph {
            succ,
            pred,
            arc_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn is_edgeless(&self) -> bool {
        self.arc_count == 0
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.succ
            .get(x)
            .is_some_and(|list| list.binary_search(&y).is_ok())
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn predecessors(&self, x: usize) -> &[usize] {
        &self.pred[x]
    }

    pub fn in_degree(&self, x: usize) -> usize {
        self.pred[x].len()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, list)| list.iter().map(move |&y| (x, y)))
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> IndexGraph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let arcs = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let local = &local;
            self.succ[v]
                .iter()
                .filter(move |&&w| local[w] != usize::MAX)
                .map(move |&w| (i, local[w]))
        });
        IndexGraph::from_arcs(vertices.len(), arcs.collect::<Vec<_>>())
            .expect("induced subgraph of a valid graph")
    }

    /// The same graph with every bidirectional pair removed.
    pub fn without_bidirectional(&self) -> IndexGraph {
        let arcs: Vec<_> = self.arcs().filter(|&(x, y)| !self.has_arc(y, x)).collect();
        IndexGraph::from_arcs(self.vertex_count(), arcs).expect("subgraph of a valid graph")
    }
}

/// A partition of `0..n` into blocks. Each block is sorted and blocks are
/// ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes the given blocks. Returns `None` unless they are
    /// nonempty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return None;
            }
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n || seen[v] {
                    return None;
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Some(Partition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// For every vertex, the index of the block containing it.
    pub fn block_of(&self) -> Vec<usize> {
        let mut owner = vec![0; self.vertex_count()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                owner[v] = b;
            }
        }
        owner
    }

    fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(v);
        }
        let mut blocks: Vec<_> = by_label.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { blocks }
    }
}

/// Weakly connected components, arc orientation ignored.
pub fn connected_components(g: &IndexGraph) -> Partition {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &w in g.successors(v).iter().chain(g.predecessors(v)) {
                if label[w] == usize::MAX {
                    label[w] = start;
                    stack.push(w);
                }
            }
        }
    }
    Partition::from_labels(&label)
}

/// Strongly connected components (iterative Tarjan).
pub fn strongly_connected_components(g: &IndexGraph) -> Partition {
    const UNVISITED: usize = usize::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![0; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_component = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = g.successors(v).get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component[w] = next_component;
                    if w == v {
                        break;
                    }
                }
                next_component += 1;
            }
        }
    }
    Partition::from_labels(&component)
}

/// Quotient digraph: block `i` has an arc to block `j != i` iff some arc of
/// `g` leads from a member of `i` to a member of `j`.
pub fn quotient(g: &IndexGraph, p: &Partition) -> Result<IndexGraph, GraphError> {
    if p.vertex_count() != g.vertex_count() {
        return Err(GraphError::PartitionMismatch);
    }
    let owner = p.block_of();
    let arcs: Vec<_> = g
        .arcs()
        .map(|(x, y)| (owner[x], owner[y]))
        .filter(|(bx, by)| bx != by)
        .collect();
    IndexGraph::from_arcs(p.len(), arcs)
}

/// Kahn's algorithm, always emitting the smallest available vertex.
///
/// With `required_source`, the smallest vertex of that set with in-degree 0
/// is emitted first. Returns `None` if `g` has a cycle or no vertex of the
/// required set is a source.
pub fn topological_order(g: &IndexGraph, required_source: Option<&[usize]>) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut remaining: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
    let mut order = Vec::with_capacity(n);
    let mut ready: BinaryHeap<Reverse<usize>> = BinaryHeap::new();

    let first = match required_source {
        Some(set) => {
            let first = set.iter().copied().filter(|&v| v < n && remaining[v] == 0).min()?;
            Some(first)
        }
        None => None,
    };
    for (v, &d) in remaining.iter().enumerate() {
        if d == 0 && Some(v) != first {
            ready.push(Reverse(v));
        }
    }
    let mut emit = |v: usize, ready: &mut BinaryHeap<Reverse<usize>>, order: &mut Vec<usize>| {
        order.push(v);
        for &w in g.successors(v) {
            remaining[w] -= 1;
            if remaining[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    };
    if let Some(v) = first {
        emit(v, &mut ready, &mut order);
    }
    while let Some(Reverse(v)) = ready.pop() {
        emit(v, &mut ready, &mut order);
    }
    (order.len() == n).then_some(order)
}

/// A digraph with named vertices. Names are kept sorted; vertex `i` of
/// [`Digraph::graph`] is `names()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    names: Vec<VertexId>,
    graph: IndexGraph,
}

impl Digraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let names = sorted_unique(vertices)?;
        let lookup = |v: &VertexId| {
            names
                .binary_search(v)
                .map_err(|_| GraphError::UnknownVertex(v.to_string()))
        };
        let mut index_arcs = Vec::new();
        for (x, y) in arcs {
            if x == y {
                return Err(GraphError::SelfLoop(x.to_string()));
            }
            index_arcs.push((lookup(&x)?, lookup(&y)?));
        }
        let graph = IndexGraph::from_arcs(names.len(), index_arcs)?;
        Ok(Digraph { names, graph })
    }

    /// Pairs sorted names with a graph on the same number of vertices.
    pub fn from_parts(names: Vec<VertexId>, graph: IndexGraph) -> Result<Self, GraphError> {
        if names.len() != graph.vertex_count() || names.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::PartitionMismatch);
        }
        Ok(Digraph { names, graph })
    }

    pub fn names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn graph(&self) -> &IndexGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn has_arc(&self, x: &str, y: &str) -> bool {
        match (self.index_of(x), self.index_of(y)) {
            (Some(x), Some(y)) => self.graph.has_arc(x, y),
            _ => false,
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> + '_ {
        self.graph.arcs().map(|(x, y)| (&self.names[x], &self.names[y]))
    }

    /// Names of the members of each block.
    pub fn named_blocks(&self, p: &Partition) -> Vec<Vec<VertexId>> {
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|&v| self.names[v].clone()).collect())
            .collect()
    }

    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Digraph {
            names: sorted.iter().map(|&v| self.names[v].clone()).collect(),
            graph: self.graph.induced(&sorted),
        }
    }
}

fn sorted_unique(vertices: impl IntoIterator<Item = VertexId>) -> Result<Vec<VertexId>, GraphError> {
    let mut names: Vec<VertexId> = vertices.into_iter().collect();
    names.sort();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(GraphError::DuplicateVertex(w[0].clone()));
    }
    Ok(names)
}

/// Unordered pair, stored with its endpoints in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnorderedPair(VertexId, VertexId);

impl UnorderedPair {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            UnorderedPair(a, b)
        } else {
            UnorderedPair(b, a)
        }
    }

    pub fn first(&self) -> &VertexId {
        &self.0
    }

    pub fn second(&self) -> &VertexId {
        &self.1
    }
}

impl fmt::Display for UnorderedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    E0,
    E1,
    Efwd,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::E0 => "E0",
            Relation::E1 => "E1",
            Relation::Efwd => "Efwd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfPair { relation: Relation, vertex: VertexId },
    UnknownVertex { relation: Relation, vertex: VertexId },
    Antisymmetry { x: VertexId, y: VertexId },
    Overlap { pair: UnorderedPair, first: Relation, second: Relation },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfPair { relation, vertex } => {
                write!(f, "{relation}: self-pair on {vertex}")
            }
            Violation::UnknownVertex { relation, vertex } => {
                write!(f, "{relation}: unknown vertex {vertex}")
            }
            Violation::Antisymmetry { x, y } => {
                write!(f, "Efwd: both ({x}, {y}) and ({y}, {x}) present")
            }
            Violation::Overlap { pair, first, second } => {
                write!(f, "pair {pair} appears in both {first} and {second}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("OK");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Four-way state of an unordered pair `{x, y}` with `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairState {
    /// Not adjacent.
    None,
    /// Arc `x -> y` only.
    Fwd,
    /// Arc `y -> x` only.
    Rev,
    /// Both arcs.
    Bidir,
}

impl PairState {
    pub const ALL: [PairState; 4] = [PairState::None, PairState::Fwd, PairState::Rev, PairState::Bidir];

    pub fn from_arcs(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (false, false) => PairState::None,
            (true, false) => PairState::Fwd,
            (false, true) => PairState::Rev,
            (true, true) => PairState::Bidir,
        }
    }

    pub fn forward(self) -> bool {
        matches!(self, PairState::Fwd | PairState::Bidir)
    }

    pub fn backward(self) -> bool {
        matches!(self, PairState::Rev | PairState::Bidir)
    }

    pub fn reversed(self) -> Self {
        match self {
            PairState::Fwd => PairState::Rev,
            PairState::Rev => PairState::Fwd,
            s => s,
        }
    }
}

/// Which of the three derived graphs of a tuple to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedKind {
    /// `E1` (both orientations) and `Efwd`.
    G0,
    /// `E0` (both orientations) and `Efwd`.
    G1,
    /// `E0`, `E1` (both orientations) and `Efwd`.
    Gfwd,
}

/// A partial xenology tuple `(E0, E1, Efwd)` on named vertices.
///
/// The value may violate the tuple invariants; see [`PartialTuple::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialTuple {
    pub vertices: BTreeSet<VertexId>,
    pub e0: BTreeSet<UnorderedPair>,
    pub e1: BTreeSet<UnorderedPair>,
    pub efwd: BTreeSet<(VertexId, VertexId)>,
}

impl PartialTuple {
    pub fn empty(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        PartialTuple {
            vertices: vertices.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Convenience constructor from string slices; panics on invalid names.
    pub fn from_names(vertices: &[&str], e0: &[(&str, &str)], e1: &[(&str, &str)], efwd: &[(&str, &str)]) -> Self {
        let id = |s: &str| VertexId::new(s).expect("valid vertex name");
        let unordered = |pairs: &[(&str, &str)]| {
            pairs
                .iter()
                .map(|&(a, b)| UnorderedPair::new(id(a), id(b)))
                .collect()
        };
        PartialTuple {
            vertices: vertices.iter().map(|&v| id(v)).collect(),
            e0: unordered(e0),
            e1: unordered(e1),
            efwd: efwd.iter().map(|&(a, b)| (id(a), id(b))).collect(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let check_endpoints = |relation: Relation, a: &VertexId, b: &VertexId, out: &mut Vec<Violation>| {
            for v in [a, b] {
                if !self.vertices.contains(v) {
                    out.push(Violation::UnknownVertex {
                        relation,
                        vertex: v.clone(),
                    });
                }
            }
            if a == b {
                out.push(Violation::SelfPair {
                    relation,
                    vertex: a.clone(),
                });
            }
        };
        for (relation, set) in [(Relation::E0, &self.e0), (Relation::E1, &self.e1)] {
            for pair in set {
                check_endpoints(relation, &pair.0, &pair.1, &mut violations);
            }
        }
        for (x, y) in &self.efwd {
            check_endpoints(Relation::Efwd, x, y, &mut violations);
            if x < y && self.efwd.contains(&(y.clone(), x.clone())) {
                violations.push(Violation::Antisymmetry {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
        let mut owner: BTreeMap<UnorderedPair, Relation> = BTreeMap::new();
        let all = self
            .e0
            .iter()
            .map(|p| (p.clone(), Relation::E0))
            .chain(self.e1.iter().map(|p| (p.clone(), Relation::E1)))
            .chain(self.efwd.iter().map(|(x, y)| {
                (UnorderedPair::new(x.clone(), y.clone()), Relation::Efwd)
            }));
        for (pair, relation) in all {
            match owner.get(&pair) {
                // two orientations within Efwd are reported as antisymmetry
                Some(&first) if !(first == Relation::Efwd && relation == Relation::Efwd) => {
                    violations.push(Violation::Overlap {
                        pair,
                        first,
                        second: relation,
                    });
                }
                Some(_) => {}
                None => {
                    owner.insert(pair, relation);
                }
            }
        }
        ValidationReport { violations }
    }

    /// Index form of a valid tuple, vertices numbered in lexicographic order.
    pub fn indexed(&self) -> Result<IndexedTuple, ValidationReport> {
        let report = self.validate();
        if !report.is_ok() {
            return Err(report);
        }
        let names: Vec<&VertexId> = self.vertices.iter().collect();
        let at = |v: &VertexId| names.binary_search(&v).expect("validated endpoint");
        let unordered = |set: &BTreeSet<UnorderedPair>| -> Vec<(usize, usize)> {
            set.iter().map(|p| (at(&p.0), at(&p.1))).collect()
        };
        Ok(IndexedTuple {
            n: names.len(),
            e0: unordered(&self.e0),
            e1: unordered(&self.e1),
            efwd: self.efwd.iter().map(|(x, y)| (at(x), at(y))).collect(),
        })
    }

    /// Sorted vertex names; index `i` of [`PartialTuple::indexed`] is entry `i`.
    pub fn names(&self) -> Vec<VertexId> {
        self.vertices.iter().cloned().collect()
    }

    /// Rebuilds a named tuple from its index form.
    pub fn from_indexed(names: &[VertexId], t: &IndexedTuple) -> Self {
        let unordered = |pairs: &[(usize, usize)]| {
            pairs
                .iter()
                .map(|&(a, b)| UnorderedPair::new(names[a].clone(), names[b].clone()))
                .collect()
        };
        PartialTuple {
            vertices: names.iter().cloned().collect(),
            e0: unordered(&t.e0),
            e1: unordered(&t.e1),
            efwd: t
                .efwd
                .iter()
                .map(|&(x, y)| (names[x].clone(), names[y].clone()))
                .collect(),
        }
    }

    /// Number of classified pairs.
    pub fn classified_count(&self) -> usize {
        self.e0.len() + self.e1.len() + self.efwd.len()
    }

    /// Sub-tuple induced on `subset`.
    pub fn induced(&self, subset: &BTreeSet<VertexId>) -> PartialTuple {
        let inside = |a: &VertexId, b: &VertexId| subset.contains(a) && subset.contains(b);
        PartialTuple {
            vertices: self.vertices.intersection(subset).cloned().collect(),
            e0: self.e0.iter().filter(|p| inside(&p.0, &p.1)).cloned().collect(),
            e1: self.e1.iter().filter(|p| inside(&p.0, &p.1)).cloned().collect(),
            efwd: self.efwd.iter().filter(|(x, y)| inside(x, y)).cloned().collect(),
        }
    }

    /// Component-wise inclusion: every pair classified here is classified
    /// identically in `other`.
    pub fn is_extended_by(&self, other: &PartialTuple) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.e0.is_subset(&other.e0)
            && self.e1.is_subset(&other.e1)
            && self.efwd.is_subset(&other.efwd)
    }
}

/// Derived graph of a tuple, see [`DerivedKind`].
pub fn derived_graph(t: &PartialTuple, kind: DerivedKind) -> Result<Digraph, ValidationReport> {
    let indexed = t.indexed()?;
    Ok(Digraph {
        names: t.names(),
        graph: indexed.derived(kind),
    })
}

/// A valid tuple on the vertices `0..n`. Pairs of `e0` and `e1` are stored
/// as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexedTuple {
    pub n: usize,
    pub e0: Vec<(usize, usize)>,
    pub e1: Vec<(usize, usize)>,
    pub efwd: Vec<(usize, usize)>,
}

impl IndexedTuple {
    pub fn derived(&self, kind: DerivedKind) -> IndexGraph {
        let sym = |pairs: &[(usize, usize)]| -> Vec<(usize, usize)> {
            pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
        };
        let mut arcs = self.efwd.clone();
        if kind != DerivedKind::G1 {
            arcs.extend(sym(&self.e1));
        }
        if kind != DerivedKind::G0 {
            arcs.extend(sym(&self.e0));
        }
        IndexGraph::from_arcs(self.n, arcs).expect("valid tuple")
    }

    /// The pair state of every classified pair, keyed by `(min, max)`.
    /// `E0` maps to [`PairState::None`] and `E1` to [`PairState::Bidir`].
    pub fn classified(&self) -> BTreeMap<(usize, usize), PairState> {
        let mut map = BTreeMap::new();
        for &p in &self.e0 {
            map.insert(p, PairState::None);
        }
        for &p in &self.e1 {
            map.insert(p, PairState::Bidir);
        }
        for &(x, y) in &self.efwd {
            if x < y {
                map.insert((x, y), PairState::Fwd);
            } else {
                map.insert((y, x), PairState::Rev);
            }
        }
        map
    }
}

/// A tuple that classifies every unordered pair exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullTuple(PartialTuple);

impl FullTuple {
    /// Checks that `t` is valid and classifies every pair.
    pub fn new(t: PartialTuple) -> Result<Self, PartialTuple> {
        let n = t.vertices.len();
        if t.validate().is_ok() && t.classified_count() == n * n.saturating_sub(1) / 2 {
            Ok(FullTuple(t))
        } else {
            Err(t)
        }
    }

    /// Classifies every pair of `g`: both arcs to `E1`, one arc to `Efwd`,
    /// none to `E0`.
    pub fn from_digraph(g: &Digraph) -> Self {
        let names = g.names();
        let mut t = PartialTuple::empty(names.iter().cloned());
        for x in 0..names.len() {
            for y in x + 1..names.len() {
                let pair = || UnorderedPair::new(names[x].clone(), names[y].clone());
                match PairState::from_arcs(g.graph().has_arc(x, y), g.graph().has_arc(y, x)) {
                    PairState::None => {
                        t.e0.insert(pair());
                    }
                    PairState::Bidir => {
                        t.e1.insert(pair());
                    }
                    PairState::Fwd => {
                        t.efwd.insert((names[x].clone(), names[y].clone()));
                    }
                    PairState::Rev => {
                        t.efwd.insert((names[y].clone(), names[x].clone()));
                    }
                }
            }
        }
        FullTuple(t)
    }

    /// The digraph `(V, E1 ∪ Efwd)` with `E1` taken in both orientations.
    pub fn digraph(&self) -> Digraph {
        derived_graph(&self.0, DerivedKind::G0).expect("full tuples are valid")
    }

    pub fn as_partial(&self) -> &PartialTuple {
        &self.0
    }

    pub fn into_partial(self) -> PartialTuple {
        self.0
    }
}

impl std::ops::Deref for FullTuple {
    type Target = PartialTuple;

    fn deref(&self) -> &PartialTuple {
        &self.0
    }
}
