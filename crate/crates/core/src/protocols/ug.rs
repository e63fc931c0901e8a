//! Underlying graph computation: every process gathers the edges it has
//! seen or heard about and forwards its whole graph whenever it grows.

use std::collections::BTreeSet;

use super::{Outgoing, Output, Protocol};
use crate::graph::{Edge, StaticGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UgState {
    /// Graph built so far; only ever grows.
    pub local_graph: StaticGraph,
    /// Every process that has been a neighbor at least once.
    pub known_neighbors: BTreeSet<VertexId>,
}

impl UgState {
    pub fn new(me: &VertexId) -> Self {
        UgState {
            local_graph: StaticGraph::single(me.clone()),
            known_neighbors: BTreeSet::new(),
        }
    }

    fn broadcast(&self, except: Option<&VertexId>) -> Vec<Outgoing<StaticGraph>> {
        self.known_neighbors
            .iter()
            .filter(|r| Some(*r) != except)
            .map(|r| Outgoing {
                to: r.clone(),
                payload: self.local_graph.clone(),
            })
            .collect()
    }

    /// Appearance of `{me, other}`. Known edges are ignored.
    pub fn on_edge_appear(&mut self, me: &VertexId, other: &VertexId) -> Vec<Outgoing<StaticGraph>> {
        let Ok(edge) = Edge::new(me.clone(), other.clone()) else {
            return Vec::new();
        };
        if self.local_graph.contains_edge(&edge) {
            return Vec::new();
        }
        self.known_neighbors.insert(other.clone());
        self.local_graph.insert_edge(edge);
        self.broadcast(None)
    }

    /// Reception of `add(payload)` from `from`.
    pub fn on_receive(&mut self, from: &VertexId, payload: &StaticGraph) -> Vec<Outgoing<StaticGraph>> {
        if !self.local_graph.merge(payload) {
            return Vec::new();
        }
        self.broadcast(Some(from))
    }
}

/// The underlying graph protocol.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ug;

impl Protocol for Ug {
    type State = UgState;
    type Payload = StaticGraph;

    fn init(&self, me: &VertexId) -> UgState {
        UgState::new(me)
    }

    fn on_edge_appear(&self, me: &VertexId, state: &mut UgState, other: &VertexId) -> Vec<Outgoing<StaticGraph>> {
        state.on_edge_appear(me, other)
    }

    fn on_receive(
        &self,
        _me: &VertexId,
        state: &mut UgState,
        from: &VertexId,
        payload: &StaticGraph,
    ) -> Vec<Outgoing<StaticGraph>> {
        state.on_receive(from, payload)
    }

    fn output(&self, state: &UgState) -> Output {
        Output::Graph(state.local_graph.clone())
    }
}
