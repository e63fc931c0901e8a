use thiserror::Error;

use crate::graph::{Edge, VertexId, VertexSet};
use crate::schedule::Tick;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid vertex identifier {0:?} (expected [A-Za-z0-9_]+)")]
    InvalidId(String),
    #[error("self-loop on {0}")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(Edge),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{0} is not a minimal dominating set")]
    NotMinimalDominating(VertexSet),
    #[error("{actual} {what} exceeds the brute-force cap of {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TvgError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {edge}: {reason}")]
    InvalidSchedule { edge: Edge, reason: String },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("edge {0}: latency must be at least 1")]
    ZeroLatency(Edge),
    #[error("edge {0} has no schedule")]
    MissingSchedule(Edge),
    #[error("journey horizon must be positive")]
    ZeroHorizon,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("horizon must be positive")]
    ZeroHorizon,
    #[error("unknown protocol {0:?} (expected ug, mdst or flood)")]
    UnknownProtocol(String),
    #[error("flood protocol requires an origin vertex")]
    MissingOrigin,
    #[error("origin {0} is not a vertex of the scenario")]
    UnknownOrigin(VertexId),
    #[error("tick {t} lies beyond the trace horizon {horizon}")]
    BeyondHorizon { t: Tick, horizon: Tick },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no message was delivered; the communication step is undefined")]
    NoDeliveries,
    #[error("starting time undefined within horizon")]
    StartingTimeUndefined,
    #[error("not converged within horizon")]
    NotConverged,
    #[error("stable set {0} is not a minimal dominating set of the eventual underlying graph")]
    NotEventuallyDominating(VertexSet),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Domain(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("graph admits SMDS; adversary inapplicable")]
    AdmitsSmds(VertexSet),
    #[error("output did not stabilize within {0} ticks")]
    NotStabilized(Tick),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tvg(#[from] TvgError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Parse failure in one of the text formats; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

/// Umbrella error for callers that drive several modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tvg(#[from] TvgError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Format(#[from] FormatError),
}
