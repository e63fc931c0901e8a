//! Time-varying graphs: a static vertex set, per-edge presence schedules and
//! constant per-edge latencies.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::graph::{Edge, StaticGraph, VertexId};
use crate::schedule::{PresenceSchedule, Tick, Window};
use crate::{GraphError, TvgError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub schedule: PresenceSchedule,
    /// Ticks needed to cross the edge; at least 1.
    pub latency: Tick,
}

impl EdgeSpec {
    pub fn new(schedule: PresenceSchedule, latency: Tick) -> Self {
        EdgeSpec { schedule, latency }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tvg {
    graph: StaticGraph,
    edges: BTreeMap<Edge, EdgeSpec>,
    process_latency: Tick,
}

/// One traversal of a journey: cross `edge` leaving at `departure`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hop {
    pub edge: Edge,
    pub departure: Tick,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Journey {
    pub hops: Vec<Hop>,
}

/// Forced absence of a set of edges over a tick window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    pub edges: BTreeSet<Edge>,
    pub window: Window,
}

impl Tvg {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (Edge, EdgeSpec)>,
        process_latency: Tick,
    ) -> Result<Self, TvgError> {
        let mut graph = StaticGraph::new();
        for v in vertices {
            graph.add_vertex(v);
        }
        if graph.is_empty() {
            return Err(GraphError::Empty.into());
        }
        let mut map = BTreeMap::new();
        for (edge, spec) in edges {
            for end in [edge.lo(), edge.hi()] {
                if !graph.contains_vertex(end) {
                    return Err(GraphError::UnknownVertex(end.clone()).into());
                }
            }
            if spec.latency == 0 {
                return Err(TvgError::ZeroLatency(edge));
            }
            if spec.schedule.is_empty() {
                return Err(TvgError::InvalidSchedule {
                    edge,
                    reason: "schedule never presents the edge".into(),
                });
            }
            if map.contains_key(&edge) {
                return Err(TvgError::InvalidSchedule {
                    edge,
                    reason: "edge listed twice".into(),
                });
            }
            graph.insert_edge(edge.clone());
            map.insert(edge, spec);
        }
        Ok(Tvg {
            graph,
            edges: map,
            process_latency,
        })
    }

    /// Every edge of `graph` always present with the same latency.
    pub fn static_graph(graph: &StaticGraph, latency: Tick) -> Result<Self, TvgError> {
        Tvg::new(
            graph.vertices().cloned(),
            graph
                .edges()
                .map(|e| (e, EdgeSpec::new(PresenceSchedule::always(), latency))),
            0,
        )
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.graph.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.graph.contains_vertex(v)
    }

    /// Edges with their specs, in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (&Edge, &EdgeSpec)> + '_ {
        self.edges.iter()
    }

    pub fn spec(&self, e: &Edge) -> Result<&EdgeSpec, TvgError> {
        self.edges
            .get(e)
            .ok_or_else(|| GraphError::UnknownEdge(e.clone()).into())
    }

    pub fn process_latency(&self) -> Tick {
        self.process_latency
    }

    pub fn max_latency(&self) -> Tick {
        self.edges.values().map(|s| s.latency).max().unwrap_or(1)
    }

    pub fn presence(&self, e: &Edge, t: Tick) -> Result<bool, TvgError> {
        Ok(self.spec(e)?.schedule.is_present(t))
    }

    /// All edges that appear at least once.
    pub fn underlying_graph(&self) -> StaticGraph {
        self.graph.clone()
    }

    /// Only the edges present infinitely often.
    pub fn eventual_underlying_graph(&self) -> StaticGraph {
        self.graph.spanning_with(
            self.edges
                .iter()
                .filter(|(_, s)| s.schedule.is_recurrent())
                .map(|(e, _)| e.clone()),
        )
    }

    /// Eventual missing edges: present only finitely often.
    pub fn missing_edges(&self) -> BTreeSet<Edge> {
        self.edges
            .iter()
            .filter(|(_, s)| !s.schedule.is_recurrent())
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// Path from `from` to `to`, each edge present at its departure, each
    /// departure no earlier than the previous arrival.
    pub fn is_journey(&self, j: &Journey, from: &VertexId, to: &VertexId) -> bool {
        let mut at = from;
        let mut ready: Option<Tick> = None;
        for hop in &j.hops {
            let Some(spec) = self.edges.get(&hop.edge) else {
                return false;
            };
            let Some(next) = hop.edge.other(at) else {
                return false;
            };
            if ready.is_some_and(|r| hop.departure < r) {
                return false;
            }
            if !spec.schedule.is_present(hop.departure) {
                return false;
            }
            ready = Some(hop.departure + spec.latency);
            at = next;
        }
        at == to
    }

    /// Earliest arrival at `to` over journeys leaving `from` at or after
    /// `after`. With `deliverable`, each hop needs its edge present for the
    /// whole crossing.
    pub fn earliest_arrival(
        &self,
        from: &VertexId,
        to: &VertexId,
        after: Tick,
        deliverable: bool,
    ) -> Result<Option<Tick>, TvgError> {
        for v in [from, to] {
            if !self.graph.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v.clone()).into());
            }
        }
        // Latencies are constant, so leaving later never arrives earlier and
        // a label-setting search is exact.
        let mut best: BTreeMap<&VertexId, Tick> = BTreeMap::from([(from, after)]);
        let mut heap = BinaryHeap::from([Reverse((after, from))]);
        while let Some(Reverse((t, u))) = heap.pop() {
            if best.get(u).is_some_and(|&b| b < t) {
                continue;
            }
            if u == to {
                return Ok(Some(t));
            }
            for w in self.graph.neighbors(u) {
                let e = Edge::new(u.clone(), w.clone()).expect("neighbors are distinct");
                let spec = &self.edges[&e];
                let Some(d) = spec.schedule.earliest_departure(t, spec.latency, deliverable) else {
                    continue;
                };
                let arrival = d + spec.latency;
                if best.get(w).is_none_or(|&b| arrival < b) {
                    best.insert(w, arrival);
                    heap.push(Reverse((arrival, w)));
                }
            }
        }
        Ok(None)
    }

    /// Journeys exist between every ordered pair after any time iff the
    /// recurrent edges connect all vertices.
    pub fn is_connected_over_time(&self) -> bool {
        self.eventual_underlying_graph()
            .is_connected()
            .unwrap_or(false)
    }

    /// Suppresses presence of each masked edge over its window. Edges left
    /// with no presence at all drop out of the graph.
    pub fn restrict(&self, masks: &[Mask]) -> Result<Tvg, TvgError> {
        let mut edges = self.edges.clone();
        for mask in masks {
            for e in &mask.edges {
                let spec = edges
                    .get_mut(e)
                    .ok_or_else(|| TvgError::from(GraphError::UnknownEdge(e.clone())))?;
                spec.schedule = spec.schedule.subtract(mask.window);
            }
        }
        edges.retain(|_, s| !s.schedule.is_empty());
        let graph = self.graph.spanning_with(edges.keys().cloned());
        Ok(Tvg {
            graph,
            edges,
            process_latency: self.process_latency,
        })
    }

    /// Topological event times in `[0, horizon)` with the snapshot holding
    /// from each one to the next. Consecutive snapshots differ.
    pub fn snapshots(&self, horizon: Tick) -> Result<Vec<(Tick, StaticGraph)>, TvgError> {
        if horizon == 0 {
            return Err(TvgError::ZeroHorizon);
        }
        let mut times = BTreeSet::from([0]);
        for spec in self.edges.values() {
            for run in spec.schedule.runs_from(0) {
                if run.start >= horizon {
                    break;
                }
                times.insert(run.start);
                if let Some(end) = run.end.filter(|&e| e < horizon) {
                    times.insert(end);
                }
            }
        }
        let mut out: Vec<(Tick, StaticGraph)> = Vec::new();
        for t in times {
            let snap = self.snapshot_at(t);
            if out.last().is_none_or(|(_, prev)| *prev != snap) {
                out.push((t, snap));
            }
        }
        Ok(out)
    }

    /// Edges present at `t`.
    pub fn snapshot_at(&self, t: Tick) -> StaticGraph {
        self.graph.spanning_with(
            self.edges
                .iter()
                .filter(|(_, s)| s.schedule.is_present(t))
                .map(|(e, _)| e.clone()),
        )
    }
}
