//! Static undirected graphs over totally ordered process identifiers.
//!
//! Identifiers compare by length first and then byte-wise, so `p2 < p10`.
//! All collections are ordered, which makes every traversal and every
//! printed form deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::GraphError;

/// Opaque process identifier matching `[A-Za-z0-9_]+`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') {
            return Err(GraphError::InvalidId(id));
        }
        Ok(VertexId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_bytes().cmp(other.0.as_bytes()))
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for VertexId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VertexId::new(s)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        VertexId::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Shorthand for building identifiers in tests and fixtures. Panics on an
/// invalid identifier.
pub fn vid(id: &str) -> VertexId {
    VertexId::new(id).expect("valid vertex identifier")
}

/// Undirected edge stored with its endpoints in increasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Edge { lo: a, hi: b }),
            Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    /// Panicking constructor for fixtures.
    pub fn of(a: &str, b: &str) -> Edge {
        Edge::new(vid(a), vid(b)).expect("distinct endpoints")
    }

    pub fn lo(&self) -> &VertexId {
        &self.lo
    }

    pub fn hi(&self) -> &VertexId {
        &self.hi
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.lo == v || &self.hi == v
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if &self.lo == v {
            Some(&self.hi)
        } else if &self.hi == v {
            Some(&self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// A set of vertices. Orders canonically: by cardinality, then
/// lexicographically on the sorted member lists.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn of(ids: &[&str]) -> Self {
        ids.iter().map(|s| vid(s)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: &VertexId) -> bool {
        self.0.remove(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexId> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<VertexId> {
        &self.0
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl From<BTreeSet<VertexId>> for VertexSet {
    fn from(set: BTreeSet<VertexId>) -> Self {
        VertexSet(set)
    }
}

impl IntoIterator for VertexSet {
    type Item = VertexId;
    type IntoIter = std::collections::btree_set::IntoIter<VertexId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a VertexId;
    type IntoIter = std::collections::btree_set::Iter<'a, VertexId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Simple undirected graph: no self-loops, no parallel edges.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct StaticGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl StaticGraph {
    pub fn new() -> Self {
        StaticGraph::default()
    }

    /// Builds a graph, rejecting edges whose endpoints are not listed.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut g = StaticGraph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for e in edges {
            for end in [e.lo(), e.hi()] {
                if !g.contains_vertex(end) {
                    return Err(GraphError::UnknownVertex(end.clone()));
                }
            }
            g.insert_edge(e);
        }
        Ok(g)
    }

    /// Fixture constructor from string ids; panics on invalid input.
    pub fn from_strs(vertices: &[&str], edges: &[(&str, &str)]) -> Self {
        StaticGraph::from_parts(
            vertices.iter().map(|v| vid(v)),
            edges.iter().map(|(a, b)| Edge::of(a, b)),
        )
        .expect("well-formed fixture graph")
    }

    pub fn single(v: VertexId) -> Self {
        let mut g = StaticGraph::new();
        g.add_vertex(v);
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Inserts an edge together with any missing endpoint. Returns whether
    /// the edge is new.
    pub fn insert_edge(&mut self, e: Edge) -> bool {
        let Edge { lo, hi } = e;
        let fresh = self.adj.entry(lo.clone()).or_default().insert(hi.clone());
        self.adj.entry(hi).or_default().insert(lo);
        fresh
    }

    pub fn remove_edge(&mut self, e: &Edge) -> bool {
        let removed = self
            .adj
            .get_mut(e.lo())
            .map(|n| n.remove(e.hi()))
            .unwrap_or(false);
        if removed {
            if let Some(n) = self.adj.get_mut(e.hi()) {
                n.remove(e.lo());
            }
        }
        removed
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.keys()
    }

    /// Edges in increasing edge order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(u, ns)| {
            ns.range((std::ops::Bound::Excluded(u), std::ops::Bound::Unbounded))
                .map(move |v| Edge {
                    lo: u.clone(),
                    hi: v.clone(),
                })
        })
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.adj.contains_key(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.adj.get(e.lo()).is_some_and(|n| n.contains(e.hi()))
    }

    /// Neighborhood of `v` (empty for unknown vertices).
    pub fn neighbors<'a>(&'a self, v: &VertexId) -> impl Iterator<Item = &'a VertexId> + 'a {
        self.adj.get(v).into_iter().flatten()
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.adj.get(v).map_or(0, BTreeSet::len)
    }

    /// True iff every vertex and edge of `self` belongs to `other`.
    pub fn is_subgraph_of(&self, other: &StaticGraph) -> bool {
        self.adj.iter().all(|(v, ns)| {
            other
                .adj
                .get(v)
                .is_some_and(|ons| ns.is_subset(ons))
        })
    }

    /// Adds every vertex and edge of `other`. Returns whether an edge was new.
    pub fn merge(&mut self, other: &StaticGraph) -> bool {
        let mut grew = false;
        for v in other.vertices() {
            self.add_vertex(v.clone());
        }
        for e in other.edges() {
            grew |= self.insert_edge(e);
        }
        grew
    }

    /// The spanning subgraph (same vertices) keeping only `keep` edges.
    pub fn spanning_with(&self, keep: impl IntoIterator<Item = Edge>) -> StaticGraph {
        let mut g = StaticGraph {
            adj: self.adj.keys().map(|v| (v.clone(), BTreeSet::new())).collect(),
        };
        for e in keep {
            debug_assert!(self.contains_edge(&e));
            g.insert_edge(e);
        }
        g
    }

    fn bfs_distances(&self, source: &VertexId) -> BTreeMap<&VertexId, usize> {
        let mut dist = BTreeMap::new();
        let Some((root, _)) = self.adj.get_key_value(source) else {
            return dist;
        };
        dist.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            for w in &self.adj[u] {
                if !dist.contains_key(w) {
                    dist.insert(w, d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices reachable from `v`, as an induced subgraph.
    pub fn component_of(&self, v: &VertexId) -> StaticGraph {
        let reach: BTreeSet<&VertexId> = self.bfs_distances(v).into_keys().collect();
        let mut g = StaticGraph::new();
        for u in &reach {
            g.add_vertex((*u).clone());
        }
        for e in self.edges() {
            if reach.contains(e.lo()) {
                g.insert_edge(e);
            }
        }
        g
    }

    pub fn is_connected(&self) -> Result<bool, GraphError> {
        let first = self.adj.keys().next().ok_or(GraphError::Empty)?;
        Ok(self.bfs_distances(first).len() == self.adj.len())
    }

    /// Largest shortest-path hop count over all vertex pairs.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        if !self.is_connected()? {
            return Err(GraphError::Disconnected);
        }
        Ok(self
            .adj
            .keys()
            .map(|v| self.bfs_distances(v).into_values().max().unwrap_or(0))
            .max()
            .unwrap_or(0))
    }

    /// Hop distance between two vertices, `None` when disconnected.
    pub fn distance(&self, from: &VertexId, to: &VertexId) -> Option<usize> {
        self.bfs_distances(from).get(to).copied()
    }

    /// True iff removing `cut` from a connected graph disconnects it.
    pub fn is_cut_set(&self, cut: &BTreeSet<Edge>) -> Result<bool, GraphError> {
        if let Some(e) = cut.iter().find(|e| !self.contains_edge(e)) {
            return Err(GraphError::UnknownEdge(e.clone()));
        }
        if !self.is_connected()? {
            return Err(GraphError::Disconnected);
        }
        let rest = self.spanning_with(self.edges().filter(|e| !cut.contains(e)));
        Ok(!rest.is_connected()?)
    }
}

impl fmt::Display for StaticGraph {
    /// Compact, space-free form: `({p1,p2},{p1-p2})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("({")?;
        for (i, v) in self.adj.keys().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("},{")?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("})")
    }
}

impl fmt::Debug for StaticGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense bitmask view used by the exponential routines. Vertex `i` is the
/// `i`-th identifier in increasing order.
#[derive(Clone, Debug)]
pub(crate) struct Indexed {
    pub ids: Vec<VertexId>,
    /// Open neighborhoods.
    pub adj: Vec<u64>,
    /// Edges as index pairs, in edge order.
    pub edges: Vec<(usize, usize)>,
}

pub(crate) const MAX_INDEXED_VERTICES: usize = 64;

impl Indexed {
    pub fn new(g: &StaticGraph) -> Result<Self, GraphError> {
        let n = g.vertex_count();
        if n > MAX_INDEXED_VERTICES {
            return Err(GraphError::Capacity {
                what: "vertices",
                limit: MAX_INDEXED_VERTICES,
                actual: n,
            });
        }
        let ids: Vec<VertexId> = g.vertices().cloned().collect();
        let index: BTreeMap<&VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![0u64; n];
        let mut edges = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            let (a, b) = (index[e.lo()], index[e.hi()]);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            edges.push((a, b));
        }
        Ok(Indexed { ids, adj, edges })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn all(&self) -> u64 {
        full_mask(self.n())
    }

    pub fn closed(&self, v: usize) -> u64 {
        self.adj[v] | (1 << v)
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.ids.binary_search(v).ok()
    }

    pub fn mask_of(&self, set: &VertexSet) -> Result<u64, GraphError> {
        set.iter().try_fold(0u64, |acc, v| {
            self.index_of(v)
                .map(|i| acc | (1 << i))
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
        })
    }

    pub fn set_of(&self, mask: u64) -> VertexSet {
        bits(mask).map(|i| self.ids[i].clone()).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits, ascending.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Connectivity of the spanning subgraph on `n` vertices with adjacency `adj`.
pub(crate) fn mask_connected(adj: &[u64], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let all = full_mask(n);
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen & all == all
}
