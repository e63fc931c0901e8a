//! Independent oracles for the integration and acceptance tests. They share
//! no code with the library beyond its data types and plain presence
//! lookups.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvgsim_core::{
    vid, Edge, EdgeSpec, Interval, PeriodicTail, PresenceSchedule, StaticGraph, Tick, Tvg, VertexId, VertexSet,
};

pub fn labels(n: usize) -> Vec<VertexId> {
    (1..=n).map(|i| vid(&format!("p{i}"))).collect()
}

/// Graph on `p1..pn` from an edge bitmask over the pairs `(i, j)`, `i < j`,
/// in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> StaticGraph {
    let ids = labels(n);
    let mut g = StaticGraph::new();
    for v in &ids {
        g.add_vertex(v.clone());
    }
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        if mask >> k & 1 == 1 {
            g.insert_edge(Edge::new(ids[i].clone(), ids[j].clone()).unwrap());
        }
    }
    g
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn mask_connected(n: usize, mask: u64, pairs: &[(usize, usize)]) -> bool {
    let mut seen = 1u64;
    let mut frontier = vec![0];
    while let Some(u) = frontier.pop() {
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let w = if i == u { j } else if j == u { i } else { continue };
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    frontier.push(w);
                }
            }
        }
    }
    seen == (1u64 << n) - 1
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices: the class member with the smallest edge mask.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<StaticGraph> {
    let pairs = pairs(n);
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|perm| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                    index[&(a, b)]
                })
                .collect()
        })
        .collect();
    let mut canon = BTreeSet::new();
    for mask in 0..1u64 << pairs.len() {
        if !mask_connected(n, mask, &pairs) {
            continue;
        }
        let best = maps
            .iter()
            .map(|map| {
                let mut m = 0u64;
                for (k, &to) in map.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        m |= 1 << to;
                    }
                }
                m
            })
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon.into_iter().map(|m| graph_from_mask(n, m)).collect()
}

/// Every labelled tree on `p1..pn`, decoded from all Prüfer sequences.
pub fn all_trees(n: usize) -> Vec<StaticGraph> {
    if n == 1 {
        return vec![graph_from_mask(1, 0)];
    }
    let ids = labels(n);
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1; n];
        for &v in &seq {
            degree[v] += 1;
        }
        let mut g = StaticGraph::new();
        for v in &ids {
            g.add_vertex(v.clone());
        }
        for &v in &seq {
            let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
            g.insert_edge(Edge::new(ids[leaf].clone(), ids[v].clone()).unwrap());
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
        g.insert_edge(Edge::new(ids[rest[0]].clone(), ids[rest[1]].clone()).unwrap());
        out.push(g);
    }
    out
}

pub fn dominates(g: &StaticGraph, set: &BTreeSet<VertexId>) -> bool {
    g.vertices()
        .all(|v| set.contains(v) || g.neighbors(v).any(|w| set.contains(w)))
}

/// Minimal dominating sets by scanning every subset and checking every
/// strict subset, in canonical order.
pub fn subset_scan_mds(g: &StaticGraph) -> Vec<VertexSet> {
    let ids: Vec<VertexId> = g.vertices().cloned().collect();
    assert!(ids.len() <= 12, "oracle cap");
    let subset = |mask: u32| -> BTreeSet<VertexId> {
        (0..ids.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i].clone()).collect()
    };
    let n = ids.len();
    let dominating: Vec<bool> = (0..1u32 << n).map(|m| dominates(g, &subset(m))).collect();
    let mut out: Vec<VertexSet> = (0..1u32 << n)
        .filter(|&m| dominating[m as usize])
        .filter(|&m| {
            // no strict subset dominates
            let mut sub = m;
            loop {
                sub = sub.wrapping_sub(1) & m;
                if sub == m {
                    break true;
                }
                if dominating[sub as usize] {
                    break false;
                }
            }
        })
        .map(|m| VertexSet::from(subset(m)))
        .collect();
    out.sort();
    out
}

/// Earliest arrival by stepping through time one tick at a time.
pub fn time_expanded_arrival(
    tvg: &Tvg,
    from: &VertexId,
    to: &VertexId,
    after: Tick,
    deliverable: bool,
    search_horizon: Tick,
) -> Option<Tick> {
    let mut reached: BTreeMap<VertexId, Tick> = BTreeMap::from([(from.clone(), after)]);
    for t in after..search_horizon {
        if reached.get(to).is_some_and(|&r| r <= t) {
            break;
        }
        let here: Vec<VertexId> = reached.iter().filter(|(_, &r)| r <= t).map(|(v, _)| v.clone()).collect();
        for u in here {
            for (e, spec) in tvg.edges() {
                let Some(w) = e.other(&u) else { continue };
                let usable = if deliverable {
                    (t..t + spec.latency).all(|s| spec.schedule.is_present(s))
                } else {
                    spec.schedule.is_present(t)
                };
                if usable {
                    let arrival = t + spec.latency;
                    let entry = reached.entry(w.clone()).or_insert(arrival);
                    *entry = (*entry).min(arrival);
                }
            }
        }
    }
    reached.get(to).copied()
}

/// Random small TVG for oracle comparisons: finite intervals inside
/// `[0, window)` and sometimes a short periodic tail.
pub fn random_small_tvg(rng: &mut ChaCha8Rng, max_vertices: usize, window: Tick) -> Tvg {
    let n = rng.random_range(2..=max_vertices);
    let ids = labels(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !rng.random_bool(0.6) {
                continue;
            }
            let latency = rng.random_range(1..=3);
            let mut cuts = BTreeSet::new();
            for _ in 0..rng.random_range(1..=6) {
                cuts.insert(rng.random_range(0..window));
            }
            let cuts: Vec<Tick> = cuts.into_iter().collect();
            let mut intervals: Vec<Interval> = cuts
                .chunks(2)
                .filter(|c| c.len() == 2)
                .map(|c| Interval::new(c[0], c[1]))
                .collect();
            let periodic = if rng.random_bool(0.3) {
                let offset = intervals.last().map_or(0, |iv| iv.end) + rng.random_range(0..4);
                let period = rng.random_range(1..=6);
                let duration = rng.random_range(1..=period);
                Some(PeriodicTail { offset, period, duration })
            } else {
                None
            };
            if intervals.is_empty() && periodic.is_none() {
                intervals.push(Interval::new(cuts[0], cuts[0] + 1));
            }
            let schedule = PresenceSchedule::new(intervals, periodic).unwrap();
            edges.push((Edge::new(ids[i].clone(), ids[j].clone()).unwrap(), EdgeSpec::new(schedule, latency)));
        }
    }
    Tvg::new(ids, edges, 0).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters of the `index`-th random connected-over-time corpus scenario:
/// 2 to 10 vertices, every generated edge appearing inside `[0, 40)`.
pub fn corpus_params(index: u64, extra: f64) -> tvgsim_core::scenarios::RandomCotParams {
    tvgsim_core::scenarios::RandomCotParams {
        nodes: 2 + (index % 9) as usize,
        extra_edge_probability: extra,
        missing_fraction: 0.3,
        horizon: 40,
        seed: index,
    }
}

/// Simulation horizon comfortably beyond every corpus schedule window.
pub const CORPUS_HORIZON: Tick = 2_000;

/// The first `count` corpus scenarios from index `first` on, skipping
/// parameter draws the generator rejects as unsatisfiable.
pub fn corpus(first: u64, count: usize, extra: f64) -> Vec<(u64, Tvg)> {
    (first..)
        .filter_map(|i| tvgsim_core::scenarios::generate_random_cot(corpus_params(i, extra)).ok().map(|g| (i, g)))
        .take(count)
        .collect()
}
