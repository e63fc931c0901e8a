//! Scenario builders: the lower-bound family `g_k`, random connected-over-time
//! instances, named static graph families and the adaptive adversary
//! against minimal dominating set protocols.

mod adversary;
mod gk;
mod random;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use adversary::{adversary_destabilize, adversary_destabilize_with, AdversaryReport, AdversaryRound};
pub use gk::generate_gk;
pub use random::{generate_random_cot, RandomCotParams};

use crate::graph::{Edge, StaticGraph, VertexId};
use crate::ScenarioError;

/// Static graph families with vertices labelled `p1..pn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    Path,
    Cycle,
    /// Center `p1`, leaves `p2..pn`.
    Star,
    Complete,
    /// Uniform labelled tree drawn from a Prüfer sequence.
    TreeRandom { seed: u64 },
}

impl GraphFamily {
    pub fn parse(name: &str, seed: u64) -> Result<Self, ScenarioError> {
        Ok(match name {
            "path" => GraphFamily::Path,
            "cycle" => GraphFamily::Cycle,
            "star" => GraphFamily::Star,
            "complete" => GraphFamily::Complete,
            "tree_random" => GraphFamily::TreeRandom { seed },
            other => return Err(ScenarioError::Domain(format!("unknown graph family {other:?}"))),
        })
    }
}

pub(crate) fn label(i: usize) -> VertexId {
    VertexId::new(format!("p{i}")).expect("generated labels are valid")
}

fn edge(a: usize, b: usize) -> Edge {
    Edge::new(label(a), label(b)).expect("distinct labels")
}

pub fn named_graph(family: GraphFamily, n: usize) -> Result<StaticGraph, ScenarioError> {
    let min = if family == GraphFamily::Cycle { 3 } else { 1 };
    if n < min {
        return Err(ScenarioError::Domain(format!("{family:?} needs at least {min} vertices")));
    }
    let edges: Vec<Edge> = match family {
        GraphFamily::Path => (1..n).map(|i| edge(i, i + 1)).collect(),
        GraphFamily::Cycle => (1..n).map(|i| edge(i, i + 1)).chain([edge(1, n)]).collect(),
        GraphFamily::Star => (2..=n).map(|i| edge(1, i)).collect(),
        GraphFamily::Complete => (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| edge(i, j)))
            .collect(),
        GraphFamily::TreeRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prufer_tree(n, &mut rng)
        }
    };
    Ok(StaticGraph::from_parts((1..=n).map(label), edges).expect("family edges join listed vertices"))
}

/// Edges of the tree decoded from a random Prüfer sequence over `p1..pn`.
pub(crate) fn prufer_tree(n: usize, rng: &mut impl Rng) -> Vec<Edge> {
    if n < 2 {
        return Vec::new();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    decode_prufer(n, &seq)
}

pub(crate) fn decode_prufer(n: usize, seq: &[usize]) -> Vec<Edge> {
    let mut degree = vec![1usize; n + 1];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (1..=n).find(|&u| degree[u] == 1).expect("a leaf always exists");
        edges.push(edge(leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&u| degree[u] == 1).collect();
    edges.push(edge(rest[0], rest[1]));
    edges
}

pub(crate) fn shuffled<T>(mut items: Vec<T>, rng: &mut impl Rng) -> Vec<T> {
    items.shuffle(rng);
    items
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        let c5 = named_graph(GraphFamily::Cycle, 5).unwrap();
        assert_eq!((c5.vertex_count(), c5.edge_count()), (5, 5));
        assert!(c5.vertices().all(|v| c5.degree(v) == 2));
        let k3 = named_graph(GraphFamily::Complete, 3).unwrap();
        assert_eq!(k3.edge_count(), 3);
        let p4 = named_graph(GraphFamily::Path, 4).unwrap();
        assert_eq!(p4.diameter().unwrap(), 3);
        let s = named_graph(GraphFamily::Star, 5).unwrap();
        assert_eq!(s.degree(&label(1)), 4);
        assert!(named_graph(GraphFamily::Cycle, 2).is_err());
        assert!(GraphFamily::parse("wheel", 0).is_err());
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..20 {
            for n in 1..9 {
                let t = named_graph(GraphFamily::TreeRandom { seed }, n).unwrap();
                assert_eq!(t.edge_count(), n - 1);
                assert!(t.is_connected().unwrap());
            }
        }
        let a = named_graph(GraphFamily::TreeRandom { seed: 7 }, 8).unwrap();
        let b = named_graph(GraphFamily::TreeRandom { seed: 7 }, 8).unwrap();
        assert_eq!(a, b);
    }
}
