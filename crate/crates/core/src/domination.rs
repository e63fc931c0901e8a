//! Dominating sets, their minimal variants, and strong minimal dominating
//! sets (a set that stays minimal dominating in every connected spanning
//! subgraph).
//!
//! Two independent routes decide strength: [`is_smds_bruteforce`] walks every
//! connected spanning subgraph, [`is_smds_via_cutsets`] checks that each
//! dominated vertex loses connectivity when its dominator edges are removed.
//! The second is what [`find_smds`] uses; the first exists to cross-check it.

use std::collections::BTreeSet;

use crate::graph::{bits, mask_connected, Edge, Indexed, StaticGraph, VertexId, VertexSet};
use crate::GraphError;

/// Caps for the exponential routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceLimits {
    /// Spanning-subgraph enumeration visits `2^max_edges` edge subsets.
    pub max_edges: usize,
    /// Exhaustive vertex-subset scans visit `2^max_vertices` subsets.
    pub max_vertices: usize,
}

impl Default for BruteForceLimits {
    fn default() -> Self {
        BruteForceLimits {
            max_edges: 16,
            max_vertices: 12,
        }
    }
}

fn check_members(g: &StaticGraph, m: &VertexSet) -> Result<(), GraphError> {
    match m.iter().find(|v| !g.contains_vertex(v)) {
        Some(v) => Err(GraphError::UnknownVertex(v.clone())),
        None => Ok(()),
    }
}

fn dominates(g: &StaticGraph, m: &VertexSet) -> bool {
    g.vertices()
        .all(|v| m.contains(v) || g.neighbors(v).any(|w| m.contains(w)))
}

/// Every vertex outside `m` has a neighbor inside `m`.
pub fn is_dominating(g: &StaticGraph, m: &VertexSet) -> Result<bool, GraphError> {
    check_members(g, m)?;
    Ok(dominates(g, m))
}

/// Dominating, and dropping any single member breaks domination. Domination
/// is monotone under adding vertices, so single drops cover all strict
/// subsets.
pub fn is_minimal_dominating(g: &StaticGraph, m: &VertexSet) -> Result<bool, GraphError> {
    check_members(g, m)?;
    if !dominates(g, m) {
        return Ok(false);
    }
    let mut probe = m.clone();
    for v in m.iter() {
        probe.remove(v);
        let still = dominates(g, &probe);
        probe.insert(v.clone());
        if still {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All minimal dominating sets, ordered by cardinality and then
/// lexicographically on the sorted identifiers.
///
/// Branches on vertices in identifier order and prunes a branch as soon as
/// some vertex can no longer be dominated or some chosen vertex has lost
/// every private neighbor (adding vertices never restores one).
pub fn minimal_dominating_sets(g: &StaticGraph) -> Result<Vec<VertexSet>, GraphError> {
    if g.is_empty() {
        return Err(GraphError::Empty);
    }
    let ix = Indexed::new(g)?;
    let mut found = Vec::new();
    branch(&ix, 0, 0, ix.all(), &mut found);
    let mut sets: Vec<VertexSet> = found.into_iter().map(|m| ix.set_of(m)).collect();
    sets.sort();
    Ok(sets)
}

fn branch(ix: &Indexed, next: usize, chosen: u64, undecided: u64, out: &mut Vec<u64>) {
    let available = chosen | undecided;
    if (0..ix.n()).any(|v| ix.closed(v) & available == 0) {
        return;
    }
    let lost_private = bits(chosen).any(|s| {
        !bits(ix.closed(s)).any(|u| ix.closed(u) & chosen == 1 << s)
    });
    if lost_private {
        return;
    }
    if next == ix.n() {
        out.push(chosen);
        return;
    }
    let rest = undecided & !(1 << next);
    branch(ix, next + 1, chosen | 1 << next, rest, out);
    branch(ix, next + 1, chosen, rest, out);
}

/// Iterator over the connected spanning subgraphs of a graph.
pub struct SpanningSubgraphs<'g> {
    graph: &'g StaticGraph,
    ix: Indexed,
    next_mask: u64,
    end: u64,
}

impl Iterator for SpanningSubgraphs<'_> {
    type Item = StaticGraph;

    fn next(&mut self) -> Option<StaticGraph> {
        while self.next_mask < self.end {
            let mask = self.next_mask;
            self.next_mask += 1;
            let adj = subgraph_adjacency(&self.ix, mask);
            if mask_connected(&adj, self.ix.n()) {
                let keep = bits(mask).map(|k| {
                    let (a, b) = self.ix.edges[k];
                    Edge::new(self.ix.ids[a].clone(), self.ix.ids[b].clone())
                        .expect("indexed edges are loop-free")
                });
                return Some(self.graph.spanning_with(keep));
            }
        }
        None
    }
}

fn subgraph_adjacency(ix: &Indexed, edge_mask: u64) -> Vec<u64> {
    let mut adj = vec![0u64; ix.n()];
    for k in bits(edge_mask) {
        let (a, b) = ix.edges[k];
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

fn prepare_bruteforce(g: &StaticGraph, limits: BruteForceLimits) -> Result<Indexed, GraphError> {
    if !g.is_connected()? {
        return Err(GraphError::Disconnected);
    }
    let m = g.edge_count();
    if m > limits.max_edges {
        return Err(GraphError::Capacity {
            what: "edges",
            limit: limits.max_edges,
            actual: m,
        });
    }
    Indexed::new(g)
}

/// Every edge subset `E' ⊆ E` whose graph `(V, E')` is connected, each once.
pub fn connected_spanning_subgraphs(
    g: &StaticGraph,
    limits: BruteForceLimits,
) -> Result<SpanningSubgraphs<'_>, GraphError> {
    let ix = prepare_bruteforce(g, limits)?;
    let end = 1u64 << ix.edges.len();
    Ok(SpanningSubgraphs {
        graph: g,
        ix,
        next_mask: 0,
        end,
    })
}

/// Strength by definition: `m` is minimal dominating in every connected
/// spanning subgraph.
pub fn is_smds_bruteforce(
    g: &StaticGraph,
    m: &VertexSet,
    limits: BruteForceLimits,
) -> Result<bool, GraphError> {
    let ix = prepare_bruteforce(g, limits)?;
    let chosen = ix.mask_of(m)?;
    let n = ix.n();
    let dominated = |adj: &[u64], set: u64| (0..n).all(|v| (adj[v] | 1 << v) & set != 0);
    for edge_mask in 0..(1u64 << ix.edges.len()) {
        let adj = subgraph_adjacency(&ix, edge_mask);
        if !mask_connected(&adj, n) {
            continue;
        }
        if !dominated(&adj, chosen) {
            return Ok(false);
        }
        if bits(chosen).any(|s| dominated(&adj, chosen & !(1 << s))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The edges joining `p` to its neighbors inside `m`.
pub fn dominator_edges(g: &StaticGraph, m: &VertexSet, p: &VertexId) -> BTreeSet<Edge> {
    g.neighbors(p)
        .filter(|q| m.contains(q))
        .map(|q| Edge::new(p.clone(), q.clone()).expect("neighbors are distinct"))
        .collect()
}

/// First vertex outside `m` (in identifier order) whose dominator edges do
/// not form a cut-set, or `None` when every dominated vertex passes.
pub fn cut_set_witness(g: &StaticGraph, m: &VertexSet) -> Result<Option<VertexId>, GraphError> {
    if !g.is_connected()? {
        return Err(GraphError::Disconnected);
    }
    if !is_minimal_dominating(g, m)? {
        return Err(GraphError::NotMinimalDominating(m.clone()));
    }
    for p in g.vertices().filter(|p| !m.contains(p)) {
        if !g.is_cut_set(&dominator_edges(g, m, p))? {
            return Ok(Some(p.clone()));
        }
    }
    Ok(None)
}

/// Strength through the cut-set characterization.
pub fn is_smds_via_cutsets(g: &StaticGraph, m: &VertexSet) -> Result<bool, GraphError> {
    Ok(cut_set_witness(g, m)?.is_none())
}

/// The first minimal dominating set, in canonical order, that passes the
/// cut-set test.
pub fn find_smds(g: &StaticGraph) -> Result<Option<VertexSet>, GraphError> {
    if !g.is_connected()? {
        return Err(GraphError::Disconnected);
    }
    for m in minimal_dominating_sets(g)? {
        if is_smds_via_cutsets(g, &m)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
