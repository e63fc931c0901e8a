//! Flooding broadcast from a single origin.

use std::collections::BTreeSet;

use super::{Outgoing, Output, Protocol};
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastState {
    pub have_message: bool,
    /// Neighbors already sent the message, or known to hold it.
    pub informed_neighbors: BTreeSet<VertexId>,
    /// Every process that has been a neighbor at least once.
    pub known_neighbors: BTreeSet<VertexId>,
}

impl BroadcastState {
    pub fn new(have_message: bool) -> Self {
        BroadcastState {
            have_message,
            informed_neighbors: BTreeSet::new(),
            known_neighbors: BTreeSet::new(),
        }
    }

    fn flood(&mut self) -> Vec<Outgoing<()>> {
        let fresh: Vec<VertexId> = self
            .known_neighbors
            .difference(&self.informed_neighbors)
            .cloned()
            .collect();
        self.informed_neighbors.extend(fresh.iter().cloned());
        fresh.into_iter().map(|to| Outgoing { to, payload: () }).collect()
    }

    pub fn on_edge_appear(&mut self, other: &VertexId) -> Vec<Outgoing<()>> {
        self.known_neighbors.insert(other.clone());
        if self.have_message {
            self.flood()
        } else {
            Vec::new()
        }
    }

    pub fn on_receive(&mut self, from: &VertexId) -> Vec<Outgoing<()>> {
        self.informed_neighbors.insert(from.clone());
        if self.have_message {
            return Vec::new();
        }
        self.have_message = true;
        self.flood()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flood {
    pub origin: VertexId,
}

impl Protocol for Flood {
    type State = BroadcastState;
    type Payload = ();

    fn init(&self, me: &VertexId) -> BroadcastState {
        BroadcastState::new(*me == self.origin)
    }

    fn on_edge_appear(&self, _me: &VertexId, state: &mut BroadcastState, other: &VertexId) -> Vec<Outgoing<()>> {
        state.on_edge_appear(other)
    }

    fn on_receive(&self, _me: &VertexId, state: &mut BroadcastState, from: &VertexId, _payload: &()) -> Vec<Outgoing<()>> {
        state.on_receive(from)
    }

    fn output(&self, state: &BroadcastState) -> Output {
        Output::Flag(state.have_message)
    }
}
