//! Minimal dominating set over time, layered on the underlying graph
//! protocol: after every change of the local graph each process recomputes
//! the first strong minimal dominating set of what it knows and outputs
//! whether it belongs to it.

use super::{Outgoing, Output, Protocol, UgState};
use crate::domination::{find_smds, minimal_dominating_sets};
use crate::graph::{StaticGraph, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdstState {
    pub ug: UgState,
    pub in_mdst: bool,
}

impl MdstState {
    pub fn new(me: &VertexId) -> Self {
        let mut s = MdstState {
            ug: UgState::new(me),
            in_mdst: false,
        };
        s.recompute(me);
        s
    }

    pub fn recompute(&mut self, me: &VertexId) {
        self.in_mdst = mdst_choice(&self.ug.local_graph, me).contains(me);
    }
}

/// The set a process chooses from its local graph: the first strong minimal
/// dominating set of its own connected component, or the first minimal
/// dominating set of that component when none is strong.
pub fn mdst_choice(local: &StaticGraph, me: &VertexId) -> VertexSet {
    let component = local.component_of(me);
    if let Ok(Some(m)) = find_smds(&component) {
        return m;
    }
    minimal_dominating_sets(&component)
        .ok()
        .and_then(|all| all.into_iter().next())
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Mdst;

impl Protocol for Mdst {
    type State = MdstState;
    type Payload = StaticGraph;

    fn init(&self, me: &VertexId) -> MdstState {
        MdstState::new(me)
    }

    fn on_edge_appear(&self, me: &VertexId, state: &mut MdstState, other: &VertexId) -> Vec<Outgoing<StaticGraph>> {
        let sends = state.ug.on_edge_appear(me, other);
        if !sends.is_empty() {
            state.recompute(me);
        }
        sends
    }

    fn on_receive(
        &self,
        me: &VertexId,
        state: &mut MdstState,
        from: &VertexId,
        payload: &StaticGraph,
    ) -> Vec<Outgoing<StaticGraph>> {
        let size = |g: &StaticGraph| (g.vertex_count(), g.edge_count());
        let before = size(&state.ug.local_graph);
        let sends = state.ug.on_receive(from, payload);
        if size(&state.ug.local_graph) != before {
            state.recompute(me);
        }
        sends
    }

    fn output(&self, state: &MdstState) -> Output {
        Output::Flag(state.in_mdst)
    }
}
