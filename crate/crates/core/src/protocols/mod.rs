//! Per-process algorithms run by the engine in [`crate::sim`].
//!
//! Handlers are plain transition functions: they mutate the process state
//! and return the messages to hand to the retrying send primitive.

mod flood;
mod mdst;
mod ug;

use std::fmt;

pub use flood::{BroadcastState, Flood};
pub use mdst::{mdst_choice, Mdst, MdstState};
pub use ug::{Ug, UgState};

use crate::graph::{StaticGraph, VertexId};
use crate::SimError;

/// A message handed to the send primitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outgoing<P> {
    pub to: VertexId,
    pub payload: P,
}

/// Value a process outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Graph(StaticGraph),
    Flag(bool),
}

impl Output {
    pub fn as_graph(&self) -> Option<&StaticGraph> {
        match self {
            Output::Graph(g) => Some(g),
            Output::Flag(_) => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            Output::Flag(b) => Some(*b),
            Output::Graph(_) => None,
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Graph(g) => write!(f, "{g}"),
            Output::Flag(b) => write!(f, "{b}"),
        }
    }
}

/// Final per-process state, whichever protocol produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolState {
    Ug(UgState),
    Mdst(MdstState),
    Flood(BroadcastState),
}

impl ProtocolState {
    pub fn output(&self) -> Output {
        match self {
            ProtocolState::Ug(s) => Output::Graph(s.local_graph.clone()),
            ProtocolState::Mdst(s) => Output::Flag(s.in_mdst),
            ProtocolState::Flood(s) => Output::Flag(s.have_message),
        }
    }
}

impl From<UgState> for ProtocolState {
    fn from(s: UgState) -> Self {
        ProtocolState::Ug(s)
    }
}

impl From<MdstState> for ProtocolState {
    fn from(s: MdstState) -> Self {
        ProtocolState::Mdst(s)
    }
}

impl From<BroadcastState> for ProtocolState {
    fn from(s: BroadcastState) -> Self {
        ProtocolState::Flood(s)
    }
}

pub trait Protocol {
    type State: Clone + Into<ProtocolState>;
    type Payload: Clone;

    fn init(&self, me: &VertexId) -> Self::State;

    fn on_edge_appear(
        &self,
        me: &VertexId,
        state: &mut Self::State,
        other: &VertexId,
    ) -> Vec<Outgoing<Self::Payload>>;

    fn on_edge_disappear(
        &self,
        _me: &VertexId,
        _state: &mut Self::State,
        _other: &VertexId,
    ) -> Vec<Outgoing<Self::Payload>> {
        Vec::new()
    }

    fn on_receive(
        &self,
        me: &VertexId,
        state: &mut Self::State,
        from: &VertexId,
        payload: &Self::Payload,
    ) -> Vec<Outgoing<Self::Payload>>;

    fn output(&self, state: &Self::State) -> Output;
}

/// The registered protocols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolKind {
    Ug,
    Mdst,
    Flood { origin: VertexId },
}

impl ProtocolKind {
    /// Resolves a command-line protocol name.
    pub fn parse(name: &str, origin: Option<VertexId>) -> Result<Self, SimError> {
        match name {
            "ug" => Ok(ProtocolKind::Ug),
            "mdst" => Ok(ProtocolKind::Mdst),
            "flood" => origin
                .map(|origin| ProtocolKind::Flood { origin })
                .ok_or(SimError::MissingOrigin),
            other => Err(SimError::UnknownProtocol(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Ug => "ug",
            ProtocolKind::Mdst => "mdst",
            ProtocolKind::Flood { .. } => "flood",
        }
    }
}
