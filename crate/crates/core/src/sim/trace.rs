use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::{Edge, VertexId};
use crate::protocols::{Output, ProtocolState};
use crate::schedule::Tick;
use crate::SimError;

pub type MessageId = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    EdgeUp(Edge),
    EdgeDown(Edge),
    SendInvoked {
        id: MessageId,
        from: VertexId,
        to: VertexId,
    },
    MessageDelivered {
        id: MessageId,
        from: VertexId,
        to: VertexId,
        invoked_at: Tick,
    },
    MessageLost {
        id: MessageId,
        from: VertexId,
        to: VertexId,
    },
    OutputChanged {
        vertex: VertexId,
        output: Output,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub time: Tick,
    pub kind: EventKind,
}

/// Everything that happened during one run over `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub initial_outputs: BTreeMap<VertexId, Output>,
    pub final_states: BTreeMap<VertexId, ProtocolState>,
    pub horizon: Tick,
}

impl Trace {
    pub fn final_outputs(&self) -> BTreeMap<VertexId, Output> {
        self.final_states
            .iter()
            .map(|(v, s)| (v.clone(), s.output()))
            .collect()
    }

    /// Outputs once every event at or before tick `t` has happened.
    pub fn replay_outputs(&self, t: Tick) -> Result<BTreeMap<VertexId, Output>, SimError> {
        if t > self.horizon {
            return Err(SimError::BeyondHorizon {
                t,
                horizon: self.horizon,
            });
        }
        let mut outputs = self.initial_outputs.clone();
        for ev in self.events.iter().take_while(|ev| ev.time <= t) {
            if let EventKind::OutputChanged { vertex, output } = &ev.kind {
                outputs.insert(vertex.clone(), output.clone());
            }
        }
        Ok(outputs)
    }

    /// Output snapshots: the initial one at tick 0 and one after each tick
    /// holding an output change, in tick order.
    pub fn output_timeline(&self) -> Vec<(Tick, BTreeMap<VertexId, Output>)> {
        let mut outputs = self.initial_outputs.clone();
        let mut timeline = vec![(0, outputs.clone())];
        let mut i = 0;
        while i < self.events.len() {
            let t = self.events[i].time;
            let mut changed = false;
            while i < self.events.len() && self.events[i].time == t {
                if let EventKind::OutputChanged { vertex, output } = &self.events[i].kind {
                    outputs.insert(vertex.clone(), output.clone());
                    changed = true;
                }
                i += 1;
            }
            if changed {
                if timeline.last().is_some_and(|(last, _)| *last == t) {
                    timeline.pop();
                }
                timeline.push((t, outputs.clone()));
            }
        }
        timeline
    }

    /// `(invoked_at, delivered_at)` for every delivered message.
    pub fn deliveries(&self) -> impl Iterator<Item = (Tick, Tick)> + '_ {
        self.events.iter().filter_map(|ev| match ev.kind {
            EventKind::MessageDelivered { invoked_at, .. } => Some((invoked_at, ev.time)),
            _ => None,
        })
    }

    /// First `EdgeUp` tick of every edge that appeared during the run.
    pub fn first_appearances(&self) -> BTreeMap<Edge, Tick> {
        let mut first = BTreeMap::new();
        for ev in &self.events {
            if let EventKind::EdgeUp(e) = &ev.kind {
                first.entry(e.clone()).or_insert(ev.time);
            }
        }
        first
    }

    /// Line-oriented text form, stable across runs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            let t = ev.time;
            let _ = match &ev.kind {
                EventKind::EdgeUp(e) => writeln!(out, "{t} up {} {}", e.lo(), e.hi()),
                EventKind::EdgeDown(e) => writeln!(out, "{t} down {} {}", e.lo(), e.hi()),
                EventKind::SendInvoked { id, from, to } => writeln!(out, "{t} send {id} {from} {to}"),
                EventKind::MessageDelivered {
                    id,
                    from,
                    to,
                    invoked_at,
                } => writeln!(out, "{t} deliver {id} {from} {to} {invoked_at}"),
                EventKind::MessageLost { id, from, to } => writeln!(out, "{t} lost {id} {from} {to}"),
                EventKind::OutputChanged { vertex, output } => writeln!(out, "{t} output {vertex} {output}"),
            };
        }
        out.push_str("FINAL\n");
        for (v, o) in self.final_outputs() {
            let _ = writeln!(out, "{v} {o}");
        }
        out
    }
}
