use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{edge, label, shuffled};
use crate::graph::{Edge, StaticGraph};
use crate::schedule::{Interval, PeriodicTail, PresenceSchedule, Tick};
use crate::tvg::{EdgeSpec, Tvg};
use crate::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCotParams {
    pub nodes: usize,
    /// Chance that each non-tree vertex pair becomes an edge.
    pub extra_edge_probability: f64,
    /// Share of non-bridge edges made eventual missing.
    pub missing_fraction: f64,
    /// Window holding every finite interval and the start of every tail.
    pub horizon: Tick,
    pub seed: u64,
}

impl Default for RandomCotParams {
    fn default() -> Self {
        RandomCotParams {
            nodes: 6,
            extra_edge_probability: 0.3,
            missing_fraction: 0.3,
            horizon: 40,
            seed: 0,
        }
    }
}

/// `count` disjoint nonempty intervals inside `[lo, hi)`, sorted.
fn random_intervals(rng: &mut ChaCha8Rng, count: usize, lo: Tick, hi: Tick) -> Vec<Interval> {
    let span = (hi - lo) as usize;
    let count = count.min(span / 2).max(1);
    let mut cuts = BTreeSet::new();
    while cuts.len() < 2 * count {
        cuts.insert(lo + rng.random_range(0..span) as Tick);
    }
    let cuts: Vec<Tick> = cuts.into_iter().collect();
    cuts.chunks(2).map(|c| Interval::new(c[0], c[1])).collect()
}

/// Random connected-over-time TVG: a random spanning tree plus extra edges,
/// some non-bridge edges present only finitely often, the rest recurrent
/// through periodic tails whose occurrences always fit their latency.
pub fn generate_random_cot(params: RandomCotParams) -> Result<Tvg, ScenarioError> {
    let RandomCotParams {
        nodes: n,
        extra_edge_probability: p,
        missing_fraction: f,
        horizon,
        seed,
    } = params;
    if n < 2 {
        return Err(ScenarioError::Domain("random scenarios need at least 2 vertices".into()));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&f) {
        return Err(ScenarioError::Domain("probabilities must lie in [0, 1]".into()));
    }
    if horizon < 8 {
        return Err(ScenarioError::Domain("generation window must be at least 8 ticks".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let order = shuffled((1..=n).collect::<Vec<_>>(), &mut rng);
    let mut edges: BTreeSet<Edge> = (1..n)
        .map(|i| edge(order[i], order[rng.random_range(0..i)]))
        .collect();
    for a in 1..=n {
        for b in a + 1..=n {
            let e = edge(a, b);
            if !edges.contains(&e) && rng.random_bool(p) {
                edges.insert(e);
            }
        }
    }
    let graph = StaticGraph::from_parts((1..=n).map(label), edges.iter().cloned()).expect("labels match");

    let non_bridges: Vec<Edge> = edges
        .iter()
        .filter(|e| !graph.is_cut_set(&BTreeSet::from([(*e).clone()])).expect("edge of a connected graph"))
        .cloned()
        .collect();
    let target = (f * non_bridges.len() as f64).round() as usize;
    let cyclomatic = edges.len() + 1 - n;
    if target > cyclomatic {
        return Err(ScenarioError::Generation(format!(
            "{target} missing edges requested but at most {cyclomatic} can go without disconnecting"
        )));
    }
    let mut missing = BTreeSet::new();
    let mut recurrent = graph.clone();
    for e in shuffled(non_bridges, &mut rng) {
        if missing.len() == target {
            break;
        }
        recurrent.remove_edge(&e);
        if recurrent.is_connected().expect("nonempty") {
            missing.insert(e);
        } else {
            recurrent.insert_edge(e);
        }
    }
    if missing.len() < target {
        return Err(ScenarioError::Generation(format!(
            "only {} of {target} missing edges could be chosen",
            missing.len()
        )));
    }

    let half = horizon / 2;
    let mut specs = Vec::with_capacity(edges.len());
    for e in edges {
        let latency: Tick = rng.random_range(1..=3);
        let schedule = if missing.contains(&e) {
            let count = rng.random_range(1..=3);
            PresenceSchedule::finite(random_intervals(&mut rng, count, 0, horizon))
        } else {
            let count = rng.random_range(0..=2);
            let intervals = if count == 0 {
                Vec::new()
            } else {
                random_intervals(&mut rng, count, 0, half)
            };
            let after = intervals.last().map_or(0, |iv| iv.end);
            let offset = rng.random_range(after.max(half / 2)..horizon);
            let period = rng.random_range(latency + 1..=latency + 8);
            let duration = rng.random_range(latency..=period);
            PresenceSchedule::new(intervals, Some(PeriodicTail { offset, period, duration }))
        }
        .map_err(ScenarioError::Generation)?;
        specs.push((e, EdgeSpec::new(schedule, latency)));
    }
    let tvg = Tvg::new((1..=n).map(label), specs, 0)?;
    debug_assert!(tvg.is_connected_over_time());
    Ok(tvg)
}
