//! Adaptive adversary against minimal dominating set protocols on graphs
//! without a strong minimal dominating set.
//!
//! Round `i` starts from a TVG `g_i` whose edges are all present except for
//! the windows suppressed in earlier rounds. The adversary waits for the
//! protocol's true-set to settle to `M_i` at tick `eta_i`, picks a dominated
//! vertex `p_i` whose dominator edges `E_i` are not a cut-set, and removes
//! `E_i` from `eta_i + 1` on. Whatever the output settles to next (`M'_i`,
//! at `alpha_i`) is recorded, and `g_{i+1}` suppresses `E_i` only over
//! `[eta_i + 1, alpha_i + 1)`.

use std::collections::BTreeSet;

use crate::domination::{cut_set_witness, dominator_edges, find_smds, is_minimal_dominating};
use crate::graph::{Edge, StaticGraph, VertexId, VertexSet};
use crate::metrics::true_set;
use crate::protocols::{Mdst, Protocol};
use crate::schedule::{Tick, Window};
use crate::sim::simulate;
use crate::tvg::{Mask, Tvg};
use crate::ScenarioError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryRound {
    /// Set the protocol settled on before the suppression.
    pub stable: VertexSet,
    /// First tick from which `stable` held (strictly after the previous
    /// round's `alpha`).
    pub eta: Tick,
    pub witness: VertexId,
    /// Dominator edges of the witness, suppressed from `eta + 1` on.
    pub suppressed: BTreeSet<Edge>,
    /// Set the protocol settled on once the suppression took hold.
    pub restabilized: VertexSet,
    /// First tick after `eta` from which `restabilized` held.
    pub alpha: Tick,
    /// Whether `restabilized` is a minimal dominating set of the eventual
    /// underlying graph under suppression.
    pub restabilized_is_mds: bool,
}

impl AdversaryRound {
    pub fn changed(&self) -> bool {
        self.stable != self.restabilized
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryReport {
    pub rounds: Vec<AdversaryRound>,
    /// Ticks without a change of the true-set that count as settled.
    pub quiet_window: Tick,
}

impl AdversaryReport {
    pub fn changed_rounds(&self) -> usize {
        self.rounds.iter().filter(|r| r.changed()).count()
    }
}

/// Doublings of the simulated horizon tried before giving up on settling.
const MAX_EXTENSIONS: u32 = 12;

/// Runs `protocol` on `g` and returns the final true-set with the first tick
/// `> after` from which it held, using a horizon long enough to see it
/// unchanged for `quiet` ticks.
fn settle<P: Protocol>(g: &Tvg, protocol: &P, after: Tick, quiet: Tick) -> Result<(VertexSet, Tick), ScenarioError> {
    let mut horizon = after + 2 * quiet + 1;
    for _ in 0..MAX_EXTENSIONS {
        let trace = simulate(g, protocol, horizon)?;
        let timeline = trace.output_timeline();
        let finals = true_set(&timeline.last().expect("timeline starts with the initial outputs").1);
        let mut since = 0;
        for (t, outputs) in timeline.iter().rev() {
            if true_set(outputs) != finals {
                break;
            }
            since = *t;
        }
        let from = since.max(after + 1);
        if horizon - since >= quiet && from < horizon {
            return Ok((finals, from));
        }
        horizon *= 2;
    }
    Err(ScenarioError::NotStabilized(horizon))
}

/// [`adversary_destabilize_with`] against the MDST protocol.
pub fn adversary_destabilize(underlying: &StaticGraph, max_rounds: usize) -> Result<(Tvg, AdversaryReport), ScenarioError> {
    adversary_destabilize_with(underlying, max_rounds, &Mdst)
}

/// Plays `max_rounds` rounds against a protocol with boolean outputs and
/// returns the last TVG built together with the round log.
pub fn adversary_destabilize_with<P: Protocol>(
    underlying: &StaticGraph,
    max_rounds: usize,
    protocol: &P,
) -> Result<(Tvg, AdversaryReport), ScenarioError> {
    if let Some(m) = find_smds(underlying)? {
        return Err(ScenarioError::AdmitsSmds(m));
    }
    let mut g = Tvg::static_graph(underlying, 1)?;
    let quiet = (2 * underlying.diameter()? as Tick * g.max_latency()).max(1);
    let mut rounds = Vec::with_capacity(max_rounds);
    let mut alpha_prev: Tick = 0;
    for _ in 0..max_rounds {
        let (stable, eta) = settle(&g, protocol, alpha_prev, quiet)?;
        let witness = cut_set_witness(underlying, &stable)
            .map_err(|e| ScenarioError::Domain(format!("settled set {stable} is unusable: {e}")))?
            .expect("no minimal dominating set passes the cut-set test");
        let suppressed = dominator_edges(underlying, &stable, &witness);

        let open = g.restrict(&[Mask {
            edges: suppressed.clone(),
            window: Window::from(eta + 1),
        }])?;
        let (restabilized, alpha) = settle(&open, protocol, eta, quiet)?;
        let eventual = underlying.spanning_with(underlying.edges().filter(|e| !suppressed.contains(e)));
        let restabilized_is_mds = is_minimal_dominating(&eventual, &restabilized)?;

        g = g.restrict(&[Mask {
            edges: suppressed.clone(),
            window: Window::new(eta + 1, alpha + 1),
        }])?;
        rounds.push(AdversaryRound {
            stable,
            eta,
            witness,
            suppressed,
            restabilized,
            alpha,
            restabilized_is_mds,
        });
        alpha_prev = alpha;
    }
    Ok((g, AdversaryReport { rounds, quiet_window: quiet }))
}
