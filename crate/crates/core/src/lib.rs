//! Simulation and analysis of distributed algorithms on time-varying graphs.
//!
//! The crate is organised bottom-up: static graph combinatorics
//! ([`graph`], [`domination`]), the time-varying graph model ([`schedule`],
//! [`tvg`]), a deterministic discrete-event engine ([`sim`]) driving the
//! per-process algorithms in [`protocols`], trace-based complexity
//! measurement ([`metrics`]) and scenario builders ([`scenarios`]).

pub mod domination;
pub mod error;
pub mod formats;
pub mod graph;
pub mod metrics;
pub mod protocols;
pub mod scenarios;
pub mod schedule;
pub mod sim;
pub mod tvg;

pub use error::{Error, FormatError, GraphError, MetricsError, ScenarioError, SimError, TvgError};
pub use graph::{vid, Edge, StaticGraph, VertexId, VertexSet};
pub use schedule::{Interval, PeriodicTail, PresenceSchedule, Tick, Window};
pub use tvg::{EdgeSpec, Hop, Journey, Mask, Tvg};
