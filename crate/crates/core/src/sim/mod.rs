//! Deterministic discrete-event execution of a protocol over a TVG.
//!
//! Time advances in integer ticks over `[0, horizon)`. Within one tick the
//! engine works through the phases listed by [`deterministic_order`]. Sends
//! use a retrying primitive: an attempt on an edge that is up delivers
//! `latency` ticks later unless the edge goes down first, in which case the
//! message is lost in transit and stays pending until the next appearance.

mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use trace::{EventKind, MessageId, Trace, TraceEvent};

use crate::graph::{Edge, VertexId};
use crate::protocols::{Flood, Mdst, Outgoing, Output, Protocol, ProtocolKind, Ug};
use crate::schedule::Tick;
use crate::tvg::Tvg;
use crate::SimError;

/// Tie-break rules applied to everything that happens at one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Disappearances are handled before appearances.
    DownBeforeUp,
    /// Edge events of one kind follow edge order.
    EdgesInOrder,
    /// Due deliveries follow message id.
    DeliveriesById,
    /// Protocol callbacks are grouped by vertex id; per vertex, disappearances,
    /// then appearances in edge order, then receptions by message id.
    CallbacksByVertex,
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieBreak::DownBeforeUp => "edge disappearances before appearances",
            TieBreak::EdgesInOrder => "edge events in edge order",
            TieBreak::DeliveriesById => "deliveries in message id order",
            TieBreak::CallbacksByVertex => "protocol callbacks in vertex id order",
        })
    }
}

/// The order in which the engine processes same-tick work.
pub fn deterministic_order() -> &'static [TieBreak] {
    &[
        TieBreak::DownBeforeUp,
        TieBreak::EdgesInOrder,
        TieBreak::DeliveriesById,
        TieBreak::CallbacksByVertex,
    ]
}

/// Runs a registered protocol. `seed` is accepted for interface symmetry
/// with the scenario generators; the engine never draws random numbers.
pub fn run(tvg: &Tvg, kind: &ProtocolKind, horizon: Tick, _seed: u64) -> Result<Trace, SimError> {
    match kind {
        ProtocolKind::Ug => simulate(tvg, &Ug, horizon),
        ProtocolKind::Mdst => simulate(tvg, &Mdst, horizon),
        ProtocolKind::Flood { origin } => {
            if !tvg.contains_vertex(origin) {
                return Err(SimError::UnknownOrigin(origin.clone()));
            }
            simulate(tvg, &Flood { origin: origin.clone() }, horizon)
        }
    }
}

struct Pending<P> {
    from: VertexId,
    to: VertexId,
    edge: Edge,
    payload: P,
    invoked_at: Tick,
    /// Delivery tick of the attempt currently in transit.
    in_flight: Option<Tick>,
}

enum Callback<P> {
    Disappear { vertex: VertexId, other: VertexId, edge: Edge },
    Appear { vertex: VertexId, other: VertexId, edge: Edge },
    Receive { vertex: VertexId, from: VertexId, id: MessageId, payload: P },
}

impl<P> Callback<P> {
    fn vertex(&self) -> &VertexId {
        match self {
            Callback::Disappear { vertex, .. } | Callback::Appear { vertex, .. } | Callback::Receive { vertex, .. } => {
                vertex
            }
        }
    }

    fn sort_key(&self) -> (&VertexId, u8, Option<&Edge>, MessageId) {
        match self {
            Callback::Disappear { vertex, edge, .. } => (vertex, 0, Some(edge), 0),
            Callback::Appear { vertex, edge, .. } => (vertex, 1, Some(edge), 0),
            Callback::Receive { vertex, id, .. } => (vertex, 2, None, *id),
        }
    }
}

struct Engine<'a, P: Protocol> {
    tvg: &'a Tvg,
    protocol: &'a P,
    horizon: Tick,
    states: BTreeMap<VertexId, P::State>,
    outputs: BTreeMap<VertexId, Output>,
    up: BTreeSet<Edge>,
    pending: BTreeMap<MessageId, Pending<P::Payload>>,
    pending_by_edge: BTreeMap<Edge, BTreeSet<MessageId>>,
    deliveries: BTreeMap<Tick, BTreeSet<MessageId>>,
    callbacks: BTreeMap<Tick, Vec<Callback<P::Payload>>>,
    next_id: MessageId,
    events: Vec<TraceEvent>,
}

/// Topology changes in `[0, horizon)`: per tick, edges going down and up.
fn transitions(tvg: &Tvg, horizon: Tick) -> BTreeMap<Tick, (Vec<Edge>, Vec<Edge>)> {
    let mut out: BTreeMap<Tick, (Vec<Edge>, Vec<Edge>)> = BTreeMap::new();
    for (e, spec) in tvg.edges() {
        for run in spec.schedule.runs_from(0) {
            if run.start >= horizon {
                break;
            }
            out.entry(run.start).or_default().1.push(e.clone());
            if let Some(end) = run.end.filter(|&end| end < horizon) {
                out.entry(end).or_default().0.push(e.clone());
            }
        }
    }
    // edges() iterates in edge order, so each list is already sorted
    out
}

/// Runs `protocol` on every vertex of `tvg` over `[0, horizon)`.
pub fn simulate<P: Protocol>(tvg: &Tvg, protocol: &P, horizon: Tick) -> Result<Trace, SimError> {
    if horizon == 0 {
        return Err(SimError::ZeroHorizon);
    }
    let states: BTreeMap<VertexId, P::State> = tvg.vertices().map(|v| (v.clone(), protocol.init(v))).collect();
    let outputs: BTreeMap<VertexId, Output> = states.iter().map(|(v, s)| (v.clone(), protocol.output(s))).collect();
    let initial_outputs = outputs.clone();
    let mut engine = Engine {
        tvg,
        protocol,
        horizon,
        states,
        outputs,
        up: BTreeSet::new(),
        pending: BTreeMap::new(),
        pending_by_edge: BTreeMap::new(),
        deliveries: BTreeMap::new(),
        callbacks: BTreeMap::new(),
        next_id: 0,
        events: Vec::new(),
    };
    let mut topology = transitions(tvg, horizon);
    loop {
        let next = [
            topology.keys().next(),
            engine.deliveries.keys().next(),
            engine.callbacks.keys().next(),
        ]
        .into_iter()
        .flatten()
        .min()
        .copied();
        let Some(t) = next.filter(|&t| t < horizon) else {
            break;
        };
        let (downs, ups) = topology.remove(&t).unwrap_or_default();
        engine.tick(t, downs, ups);
    }
    Ok(Trace {
        events: engine.events,
        initial_outputs,
        final_states: engine.states.into_iter().map(|(v, s)| (v, s.into())).collect(),
        horizon,
    })
}

impl<P: Protocol> Engine<'_, P> {
    fn record(&mut self, time: Tick, kind: EventKind) {
        self.events.push(TraceEvent { time, kind });
    }

    fn schedule_callback(&mut self, t: Tick, cb: Callback<P::Payload>) {
        let at = t + self.tvg.process_latency();
        if at < self.horizon {
            self.callbacks.entry(at).or_default().push(cb);
        }
    }

    fn tick(&mut self, t: Tick, downs: Vec<Edge>, ups: Vec<Edge>) {
        for edge in downs {
            self.edge_down(t, edge);
        }
        for edge in ups {
            self.edge_up(t, edge);
        }
        if let Some(ids) = self.deliveries.remove(&t) {
            for id in ids {
                self.deliver(t, id);
            }
        }
        if let Some(mut cbs) = self.callbacks.remove(&t) {
            cbs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
            for cb in cbs {
                self.invoke(t, cb);
            }
        }
    }

    fn edge_down(&mut self, t: Tick, edge: Edge) {
        self.up.remove(&edge);
        self.record(t, EventKind::EdgeDown(edge.clone()));
        let ids: Vec<MessageId> = self.pending_by_edge.get(&edge).into_iter().flatten().copied().collect();
        for id in ids {
            let msg = self.pending.get_mut(&id).expect("indexed message is pending");
            // arrival exactly at the end of the presence still counts
            let Some(at) = msg.in_flight.filter(|&at| at > t) else {
                continue;
            };
            msg.in_flight = None;
            let (from, to) = (msg.from.clone(), msg.to.clone());
            if let Some(set) = self.deliveries.get_mut(&at) {
                set.remove(&id);
            }
            self.record(t, EventKind::MessageLost { id, from, to });
        }
        for (vertex, other) in [(edge.lo(), edge.hi()), (edge.hi(), edge.lo())] {
            let cb = Callback::Disappear {
                vertex: vertex.clone(),
                other: other.clone(),
                edge: edge.clone(),
            };
            self.schedule_callback(t, cb);
        }
    }

    fn edge_up(&mut self, t: Tick, edge: Edge) {
        self.up.insert(edge.clone());
        self.record(t, EventKind::EdgeUp(edge.clone()));
        let ids: Vec<MessageId> = self.pending_by_edge.get(&edge).into_iter().flatten().copied().collect();
        for id in ids {
            self.attempt(t, id);
        }
        for (vertex, other) in [(edge.lo(), edge.hi()), (edge.hi(), edge.lo())] {
            let cb = Callback::Appear {
                vertex: vertex.clone(),
                other: other.clone(),
                edge: edge.clone(),
            };
            self.schedule_callback(t, cb);
        }
    }

    fn attempt(&mut self, t: Tick, id: MessageId) {
        let msg = self.pending.get_mut(&id).expect("attempted message is pending");
        if msg.in_flight.is_some() || !self.up.contains(&msg.edge) {
            return;
        }
        let latency = self.tvg.spec(&msg.edge).expect("edge of the scenario").latency;
        let at = t + latency;
        msg.in_flight = Some(at);
        self.deliveries.entry(at).or_default().insert(id);
    }

    fn deliver(&mut self, t: Tick, id: MessageId) {
        let msg = self.pending.remove(&id).expect("delivered message is pending");
        if let Some(set) = self.pending_by_edge.get_mut(&msg.edge) {
            set.remove(&id);
        }
        self.record(
            t,
            EventKind::MessageDelivered {
                id,
                from: msg.from.clone(),
                to: msg.to.clone(),
                invoked_at: msg.invoked_at,
            },
        );
        let cb = Callback::Receive {
            vertex: msg.to,
            from: msg.from,
            id,
            payload: msg.payload,
        };
        self.schedule_callback(t, cb);
    }

    fn invoke(&mut self, t: Tick, cb: Callback<P::Payload>) {
        let me = cb.vertex().clone();
        let state = self.states.get_mut(&me).expect("callback for a known vertex");
        let sends = match &cb {
            Callback::Disappear { other, .. } => self.protocol.on_edge_disappear(&me, state, other),
            Callback::Appear { other, .. } => self.protocol.on_edge_appear(&me, state, other),
            Callback::Receive { from, payload, .. } => self.protocol.on_receive(&me, state, from, payload),
        };
        let output = self.protocol.output(state);
        if self.outputs.get(&me) != Some(&output) {
            self.outputs.insert(me.clone(), output.clone());
            self.record(t, EventKind::OutputChanged { vertex: me.clone(), output });
        }
        for send in sends {
            self.send(t, &me, send);
        }
    }

    fn send(&mut self, t: Tick, from: &VertexId, out: Outgoing<P::Payload>) {
        let id = self.next_id;
        self.next_id += 1;
        self.record(
            t,
            EventKind::SendInvoked {
                id,
                from: from.clone(),
                to: out.to.clone(),
            },
        );
        let Ok(edge) = Edge::new(from.clone(), out.to.clone()) else {
            return;
        };
        if self.tvg.spec(&edge).is_err() {
            // no such edge: the primitive can never deliver
            return;
        }
        self.pending.insert(
            id,
            Pending {
                from: from.clone(),
                to: out.to,
                edge: edge.clone(),
                payload: out.payload,
                invoked_at: t,
                in_flight: None,
            },
        );
        self.pending_by_edge.entry(edge).or_default().insert(id);
        self.attempt(t, id);
    }
}
