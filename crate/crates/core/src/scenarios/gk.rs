use crate::graph::Edge;
use crate::schedule::{Interval, PresenceSchedule};
use crate::tvg::{EdgeSpec, Tvg};
use crate::ScenarioError;

/// The lower-bound family: vertices `p0..p{3k}`, path edges present from
/// tick 1 on, chords `{p0,p2k}` and `{p2k,p3k}` present during `[0,1)` only,
/// unit latencies. For `k = 1` the second chord is also the last path edge;
/// that edge then carries both presences and is always up.
pub fn generate_gk(k: usize) -> Result<Tvg, ScenarioError> {
    if k < 1 {
        return Err(ScenarioError::Domain("g_k needs k >= 1".into()));
    }
    let n = 3 * k;
    let p = |i: usize| {
        crate::graph::VertexId::new(format!("p{i}")).expect("generated labels are valid")
    };
    let chords = [
        Edge::new(p(0), p(2 * k)).expect("distinct"),
        Edge::new(p(2 * k), p(n)).expect("distinct"),
    ];
    let path: Vec<Edge> = (0..n).map(|i| Edge::new(p(i), p(i + 1)).expect("distinct")).collect();
    let early = PresenceSchedule::finite(vec![Interval::new(0, 1)]).expect("valid");
    let mut edges = Vec::new();
    for e in &path {
        let schedule = if chords.contains(e) {
            PresenceSchedule::always()
        } else {
            PresenceSchedule::from_tick(1)
        };
        edges.push((e.clone(), EdgeSpec::new(schedule, 1)));
    }
    for c in chords.iter().filter(|c| !path.contains(c)) {
        edges.push((c.clone(), EdgeSpec::new(early.clone(), 1)));
    }
    Ok(Tvg::new((0..=n).map(p), edges, 0)?)
}
