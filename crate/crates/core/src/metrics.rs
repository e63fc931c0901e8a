//! Complexity measured on traces: the communication step (worst delay of a
//! delivered message), starting time (first moment some necessary presence
//! set has fully appeared) and convergence time counted in steps from there.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::domination::is_minimal_dominating;
use crate::graph::{Edge, StaticGraph, VertexId, VertexSet};
use crate::protocols::{Output, ProtocolKind};
use crate::schedule::Tick;
use crate::sim::Trace;
use crate::tvg::Tvg;
use crate::{GraphError, MetricsError};

/// Edge sets whose complete appearance lets solving begin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpsFamily {
    elements: BTreeSet<BTreeSet<Edge>>,
}

impl NpsFamily {
    pub fn new(elements: impl IntoIterator<Item = BTreeSet<Edge>>) -> Self {
        NpsFamily {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn elements(&self) -> &BTreeSet<BTreeSet<Edge>> {
        &self.elements
    }
}

/// Underlying graph computation needs every edge. An edgeless graph yields
/// the single empty element, so its starting time is 0.
pub fn nps_ug(g: &StaticGraph) -> NpsFamily {
    NpsFamily::new([g.edge_set()])
}

/// Broadcast from `origin` can begin as soon as any incident edge appears.
pub fn nps_broadcast(g: &StaticGraph, origin: &VertexId) -> Result<NpsFamily, GraphError> {
    if !g.contains_vertex(origin) {
        return Err(GraphError::UnknownVertex(origin.clone()));
    }
    Ok(NpsFamily::new(g.neighbors(origin).map(|q| {
        BTreeSet::from([Edge::new(origin.clone(), q.clone()).expect("neighbor differs from origin")])
    })))
}

/// Worst delay between send invocation and delivery.
pub fn communication_step(trace: &Trace) -> Result<Tick, MetricsError> {
    trace
        .deliveries()
        .map(|(sent, got)| got - sent)
        .max()
        .ok_or(MetricsError::NoDeliveries)
}

/// Earliest tick by which every edge of some element has appeared; an edge
/// first appearing at `t` counts as appeared at `t`.
pub fn starting_time(trace: &Trace, nps: &NpsFamily) -> Result<Tick, MetricsError> {
    let first = trace.first_appearances();
    nps.elements
        .iter()
        .filter_map(|element| {
            element
                .iter()
                .map(|e| first.get(e).copied())
                .try_fold(0, |acc, t| t.map(|t| acc.max(t)))
        })
        .min()
        .ok_or(MetricsError::StartingTimeUndefined)
}

/// Smallest tick from which `converged` holds on the outputs at every later
/// tick of the trace.
pub fn convergence_tick(
    trace: &Trace,
    converged: impl Fn(&BTreeMap<VertexId, Output>) -> bool,
) -> Result<Tick, MetricsError> {
    let timeline = trace.output_timeline();
    let mut from = None;
    for (t, outputs) in timeline.iter().rev() {
        if !converged(outputs) {
            break;
        }
        from = Some(*t);
    }
    from.ok_or(MetricsError::NotConverged)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityReport {
    /// Worst delivered-message delay; 0 when nothing was delivered.
    pub step: Tick,
    pub starting_time: Tick,
    pub convergence_tick: Tick,
    pub convergence_steps: Ratio<u64>,
}

#[derive(Serialize)]
struct ReportJson {
    step: Tick,
    starting_time: Tick,
    convergence_tick: Tick,
    convergence_steps_num: u64,
    convergence_steps_den: u64,
}

impl ComplexityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ReportJson {
            step: self.step,
            starting_time: self.starting_time,
            convergence_tick: self.convergence_tick,
            convergence_steps_num: *self.convergence_steps.numer(),
            convergence_steps_den: *self.convergence_steps.denom(),
        })
        .expect("plain struct serializes")
    }
}

fn report(trace: &Trace, start: Tick, converged_at: Tick) -> Result<ComplexityReport, MetricsError> {
    let convergence_tick = converged_at.max(start);
    let elapsed = convergence_tick - start;
    let step = match communication_step(trace) {
        Ok(step) => step,
        Err(_) if elapsed == 0 => 0,
        Err(e) => return Err(e),
    };
    let convergence_steps = if elapsed == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(elapsed, step)
    };
    Ok(ComplexityReport {
        step,
        starting_time: start,
        convergence_tick,
        convergence_steps,
    })
}

/// Convergence time of a fixed-point problem, in steps after the starting
/// time. Convergence before the starting time is reported at the starting
/// time.
pub fn convergence_steps(
    trace: &Trace,
    nps: &NpsFamily,
    converged: impl Fn(&BTreeMap<VertexId, Output>) -> bool,
) -> Result<ComplexityReport, MetricsError> {
    let start = starting_time(trace, nps)?;
    let at = convergence_tick(trace, converged)?;
    report(trace, start, at)
}

/// Service variant: measuring starts at the later of the starting time and
/// the request, and ends when the service is achieved for good.
pub fn service_steps(
    trace: &Trace,
    nps: &NpsFamily,
    request: Tick,
    achieved: impl Fn(&BTreeMap<VertexId, Output>) -> bool,
) -> Result<ComplexityReport, MetricsError> {
    let start = starting_time(trace, nps)?.max(request);
    let at = convergence_tick(trace, achieved)?;
    report(trace, start, at)
}

/// Processes outputting `true`.
pub fn true_set(outputs: &BTreeMap<VertexId, Output>) -> VertexSet {
    outputs
        .iter()
        .filter(|(_, o)| o.as_flag() == Some(true))
        .map(|(v, _)| v.clone())
        .collect()
}

/// Every process outputs exactly `target`.
pub fn outputs_graph(outputs: &BTreeMap<VertexId, Output>, target: &StaticGraph) -> bool {
    outputs.values().all(|o| o.as_graph() == Some(target))
}

/// The report the command line prints for a registered protocol: underlying
/// graph reached everywhere for `ug`; for `mdst`, the final true-set held
/// and forming a minimal dominating set of the eventual underlying graph;
/// for `flood`, every process informed, with the request at tick 0.
pub fn protocol_report(tvg: &Tvg, kind: &ProtocolKind, trace: &Trace) -> Result<ComplexityReport, MetricsError> {
    let underlying = tvg.underlying_graph();
    match kind {
        ProtocolKind::Ug => convergence_steps(trace, &nps_ug(&underlying), |o| outputs_graph(o, &underlying)),
        ProtocolKind::Mdst => {
            let eventual = tvg.eventual_underlying_graph();
            let stable = true_set(&trace.final_outputs());
            if !is_minimal_dominating(&eventual, &stable)? {
                return Err(MetricsError::NotEventuallyDominating(stable));
            }
            convergence_steps(trace, &nps_ug(&underlying), |o| true_set(o) == stable)
        }
        ProtocolKind::Flood { origin } => service_steps(trace, &nps_broadcast(&underlying, origin)?, 0, |o| {
            o.values().all(|o| o.as_flag() == Some(true))
        }),
    }
}
