//! Fixtures shared by the benchmarks.

use tvgsim_core::scenarios::{generate_random_cot, named_graph, GraphFamily, RandomCotParams};
use tvgsim_core::{StaticGraph, Tvg};

/// Static graphs of increasing size: paths, cycles and random trees.
pub fn domination_fixtures() -> Vec<(String, StaticGraph)> {
    let mut out = Vec::new();
    for n in [8, 12, 16] {
        out.push((format!("path{n}"), named_graph(GraphFamily::Path, n).expect("valid size")));
        out.push((format!("cycle{n}"), named_graph(GraphFamily::Cycle, n).expect("valid size")));
        out.push((format!("tree{n}"), named_graph(GraphFamily::TreeRandom { seed: n as u64 }, n).expect("valid size")));
    }
    out
}

/// First random connected-over-time scenario with `nodes` vertices whose
/// seed generates without error.
pub fn random_scenario(nodes: usize) -> Tvg {
    (0..)
        .find_map(|seed| {
            generate_random_cot(RandomCotParams {
                nodes,
                seed,
                ..RandomCotParams::default()
            })
            .ok()
        })
        .expect("some seed succeeds")
}
