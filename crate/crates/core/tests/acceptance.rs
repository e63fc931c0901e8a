//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Ratio;
use rand::Rng;
use tvgsim_core::domination::{
    find_smds, is_minimal_dominating, is_smds_bruteforce, is_smds_via_cutsets, minimal_dominating_sets,
    BruteForceLimits,
};
use tvgsim_core::formats::write_scenario;
use tvgsim_core::metrics::{convergence_steps, nps_ug, protocol_report, true_set};
use tvgsim_core::protocols::{Output, ProtocolKind};
use tvgsim_core::scenarios::{adversary_destabilize, generate_gk, named_graph, GraphFamily};
use tvgsim_core::sim::{run, EventKind, Trace};
use tvgsim_core::{vid, Edge, EdgeSpec, Interval, PresenceSchedule, ScenarioError, Tick, Tvg, VertexId};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Outcome {
    Outcome { pass: ok, detail }
}

fn c1_characterization() -> Outcome {
    let mut graphs = 0;
    let mut sets = 0;
    let mut discrepancies = Vec::new();
    for n in 1..=6 {
        for g in connected_graphs_up_to_iso(n) {
            graphs += 1;
            for m in minimal_dominating_sets(&g).unwrap() {
                sets += 1;
                let fast = is_smds_via_cutsets(&g, &m).unwrap();
                let slow = is_smds_bruteforce(&g, &m, BruteForceLimits::default()).unwrap();
                if fast != slow {
                    discrepancies.push(format!("{g} {m}"));
                }
            }
        }
    }
    check(
        graphs == 1 + 1 + 2 + 6 + 21 + 112 && discrepancies.is_empty(),
        format!("{graphs} connected graphs (n<=6, up to isomorphism), {sets} minimal dominating sets, {} discrepancies {discrepancies:?}", discrepancies.len()),
    )
}

fn c2_fixtures() -> Outcome {
    let mut trees = 0;
    let mut missing = Vec::new();
    for n in 1..=7 {
        for t in all_trees(n) {
            trees += 1;
            if find_smds(&t).unwrap().is_none() {
                missing.push(t.to_string());
            }
        }
    }
    let c5 = find_smds(&named_graph(GraphFamily::Cycle, 5).unwrap()).unwrap();
    let k3 = find_smds(&named_graph(GraphFamily::Complete, 3).unwrap()).unwrap();
    let mut stars_ok = true;
    for n in 2..=8 {
        let star = named_graph(GraphFamily::Star, n).unwrap();
        let got = find_smds(&star).unwrap();
        let center = tvgsim_core::VertexSet::of(&["p1"]);
        // the brute-force oracle agrees that the center is strong
        stars_ok &= got.as_ref() == Some(&center)
            && is_smds_bruteforce(&star, &center, BruteForceLimits::default()).unwrap();
    }
    check(
        missing.is_empty() && c5.is_none() && k3.is_none() && stars_ok,
        format!(
            "{trees} labelled trees (n<=7) all admit an SMDS: {}; C5 -> {c5:?}; K3 -> {k3:?}; stars 2..8 -> center: {stars_ok}",
            missing.is_empty()
        ),
    )
}

struct CorpusRun {
    tvg: Tvg,
    trace: Trace,
}

fn ug_corpus() -> Vec<CorpusRun> {
    corpus(0, 200, 0.3)
        .into_iter()
        .map(|(i, tvg)| {
            let trace = run(&tvg, &ProtocolKind::Ug, CORPUS_HORIZON, i).unwrap();
            CorpusRun { tvg, trace }
        })
        .collect()
}

fn c3_upper_bound(corpus: &[CorpusRun]) -> Outcome {
    let mut worst = Ratio::from_integer(0u64);
    let mut bad = Vec::new();
    for (i, c) in corpus.iter().enumerate() {
        let u = c.tvg.underlying_graph();
        let all_appear = c.trace.first_appearances().len() == u.edge_count();
        let converged = c.trace.final_outputs().values().all(|o| o.as_graph() == Some(&u));
        let diam = c.tvg.eventual_underlying_graph().diameter().unwrap() as u64;
        match protocol_report(&c.tvg, &ProtocolKind::Ug, &c.trace) {
            Ok(r) if all_appear && converged && r.convergence_steps <= Ratio::from_integer(diam) => {
                worst = worst.max(r.convergence_steps / Ratio::from_integer(diam.max(1)));
            }
            other => bad.push(format!("#{i}: {other:?}")),
        }
    }
    check(
        bad.is_empty(),
        format!(
            "{} random COT scenarios (n 2..10); all converge to U_g within diam(U^w) steps; worst steps/diam = {worst}; violations {bad:?}",
            corpus.len()
        ),
    )
}

fn c4_lower_bound() -> (Outcome, Vec<CorpusRun>) {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut runs = Vec::new();
    for k in 1..=4u64 {
        let tvg = generate_gk(k as usize).unwrap();
        let trace = run(&tvg, &ProtocolKind::Ug, 100, 0).unwrap();
        let r = protocol_report(&tvg, &ProtocolKind::Ug, &trace).unwrap();
        let steps = r.convergence_steps;
        let good = r.starting_time == 1
            && steps >= Ratio::from_integer(2 * k)
            && steps <= Ratio::from_integer(3 * k);
        ok &= good;
        lines.push(format!("k={k}: start {} steps {steps}", r.starting_time));
        runs.push(CorpusRun { tvg, trace });
    }
    (check(ok, format!("g_k starting time 1 and 2k <= steps <= 3k: {}", lines.join(", "))), runs)
}

fn c5_greedy(corpora: &[&[CorpusRun]]) -> Outcome {
    let mut traces = 0;
    let mut bad = Vec::new();
    for corpus in corpora {
        for c in corpus.iter() {
            traces += 1;
            let u = c.tvg.underlying_graph();
            let mut current: BTreeMap<VertexId, Output> = c.trace.initial_outputs.clone();
            for ev in &c.trace.events {
                if let EventKind::OutputChanged { vertex, output } = &ev.kind {
                    let before = current[vertex].as_graph().unwrap();
                    let after = output.as_graph().unwrap();
                    if !before.is_subgraph_of(after) || !after.is_subgraph_of(&u) {
                        bad.push(format!("{vertex} at {}", ev.time));
                    }
                    current.insert(vertex.clone(), output.clone());
                }
            }
        }
    }
    check(bad.is_empty(), format!("{traces} UG traces; outputs only grow and stay inside U_g; violations {bad:?}"))
}

fn c6_mdst() -> Outcome {
    let mut accepted = 0;
    let mut bad = Vec::new();
    for (index, tvg) in corpus(1_000, 4_000, 0.15) {
        if accepted == 100 {
            break;
        }
        let u = tvg.underlying_graph();
        let Some(expected) = find_smds(&u).unwrap() else { continue };
        accepted += 1;
        let trace = run(&tvg, &ProtocolKind::Mdst, CORPUS_HORIZON, index).unwrap();
        let stable = true_set(&trace.final_outputs());
        let settled = convergence_steps(&trace, &nps_ug(&u), |o| true_set(o) == stable).is_ok();
        let eventual = tvg.eventual_underlying_graph();
        let all_appear = trace.first_appearances().len() == u.edge_count();
        if !(all_appear && settled && stable == expected && is_minimal_dominating(&eventual, &stable).unwrap()) {
            bad.push(format!("seed {index}: got {stable}, expected {expected}"));
        }
    }
    check(
        accepted >= 100 && bad.is_empty(),
        format!("{accepted} SMDS-admitting random scenarios; stable true-set = find_smds(U_g) and is an MDS of U^w; violations {bad:?}"),
    )
}

fn c7_adversary() -> (Outcome, Outcome) {
    let mut lines = Vec::new();
    let mut all_changed = true;
    let mut dichotomy = true;
    for (name, family, n) in [("C5", GraphFamily::Cycle, 5), ("K3", GraphFamily::Complete, 3)] {
        let g = named_graph(family, n).unwrap();
        match adversary_destabilize(&g, 5) {
            Ok((_, report)) => {
                let changed = report.changed_rounds();
                all_changed &= report.rounds.len() == 5 && changed == 5;
                dichotomy &= report.rounds.len() == 5
                    && report.rounds.iter().all(|r| r.changed() || !r.restabilized_is_mds);
                let sets: Vec<String> = report
                    .rounds
                    .iter()
                    .map(|r| format!("{}->{}", r.stable, r.restabilized))
                    .collect();
                lines.push(format!("{name}: {changed}/5 rounds changed [{}]", sets.join(" ")));
            }
            Err(e) => {
                all_changed = false;
                dichotomy = false;
                lines.push(format!("{name}: error {e}"));
            }
        }
    }
    let star = adversary_destabilize(&named_graph(GraphFamily::Star, 5).unwrap(), 5);
    let refused = matches!(star, Err(ScenarioError::AdmitsSmds(_)));
    lines.push(format!("star refused: {refused}"));
    (
        check(all_changed && refused, lines.join("; ")),
        check(
            dichotomy && refused,
            "every adversary round on C5 and K3 either changes the settled set or leaves a set that is not an MDS of the suppressed eventual graph".to_string(),
        ),
    )
}

fn c8_send_retry() -> Outcome {
    // origin r feeds p over an always-present edge at a random tick; p then
    // forwards over the single edge p-q whose schedule is random
    let mut rng = seeded(8);
    let mut cases = 0;
    let mut delivered = 0;
    let mut retried = 0;
    let mut bad = Vec::new();
    let horizon: Tick = 120;
    for case in 0..500 {
        let rp_from: Tick = rng.random_range(0..20);
        let mut cuts: Vec<Tick> = (0..rng.random_range(1..=4) * 2).map(|_| rng.random_range(0..60)).collect();
        cuts.sort();
        cuts.dedup();
        let intervals: Vec<Interval> = cuts.chunks(2).filter(|c| c.len() == 2).map(|c| Interval::new(c[0], c[1])).collect();
        if intervals.is_empty() {
            continue;
        }
        let latency = rng.random_range(1..=4);
        let tvg = Tvg::new(
            [vid("p"), vid("q"), vid("r")],
            [
                (Edge::of("p", "r"), EdgeSpec::new(PresenceSchedule::from_tick(rp_from), 1)),
                (Edge::of("p", "q"), EdgeSpec::new(PresenceSchedule::finite(intervals.clone()).unwrap(), latency)),
            ],
            0,
        )
        .unwrap();
        cases += 1;
        let trace = run(&tvg, &ProtocolKind::Flood { origin: vid("r") }, horizon, 0).unwrap();
        let mut sends = BTreeMap::new();
        let mut lost = 0;
        let mut got = None;
        for ev in &trace.events {
            match &ev.kind {
                EventKind::SendInvoked { id, from, .. } if from.as_str() == "p" => {
                    sends.insert(*id, ev.time);
                }
                EventKind::MessageLost { id, .. } if sends.contains_key(id) => lost += 1,
                EventKind::MessageDelivered { id, invoked_at, .. } if sends.contains_key(id) => {
                    if sends[id] != *invoked_at {
                        bad.push(format!("case {case}: delay mismatch"));
                    }
                    got = Some((*invoked_at, ev.time));
                }
                _ => {}
            }
        }
        let Some(&invoked) = sends.values().next() else {
            // p never heard of q before the horizon
            continue;
        };
        // first occurrence after the invocation long enough for the latency
        let by_hand = intervals
            .iter()
            .map(|iv| (iv.start.max(invoked) + latency, iv.end))
            .find(|&(arrival, end)| arrival <= end)
            .map(|(arrival, _)| arrival)
            .filter(|&t| t < horizon);
        let journey = tvg
            .earliest_arrival(&vid("p"), &vid("q"), invoked, true)
            .unwrap()
            .filter(|&t| t < horizon);
        if sends.len() != 1 || by_hand != journey || got.map(|(_, at)| at) != by_hand {
            bad.push(format!("case {case}: delivered {got:?}, by hand {by_hand:?}, journey {journey:?}"));
        } else if got.is_some() {
            delivered += 1;
            if lost > 0 {
                retried += 1;
            }
        }
    }
    check(
        bad.is_empty() && retried > 0,
        format!("{cases} single-edge schedules; {delivered} deliveries at the earliest sufficient occurrence ({retried} after losses); violations {bad:?}"),
    )
}

const GOLDEN: &[&str] = &[
    "gk1_ug",
    "gk2_ug",
    "gk3_ug",
    "random0_ug",
    "random0_mdst",
    "random0_flood",
    "random5_mdst",
];

fn c9_determinism() -> Outcome {
    let mut compared = 0;
    let mut bad = Vec::new();
    let mut golden_checked = 0;
    let mut scenarios: Vec<(String, Tvg, ProtocolKind)> = Vec::new();
    for k in 1..=3 {
        scenarios.push((format!("gk{k}_ug"), generate_gk(k).unwrap(), ProtocolKind::Ug));
    }
    for (i, tvg) in corpus(0, 40, 0.3) {
        scenarios.push((format!("random{i}_ug"), tvg.clone(), ProtocolKind::Ug));
        scenarios.push((format!("random{i}_mdst"), tvg.clone(), ProtocolKind::Mdst));
        scenarios.push((format!("random{i}_flood"), tvg, ProtocolKind::Flood { origin: vid("p1") }));
    }
    for (name, tvg, kind) in &scenarios {
        let text = write_scenario(tvg);
        let again = tvgsim_core::formats::parse_scenario(&text).unwrap();
        let a = run(tvg, kind, CORPUS_HORIZON, 1).unwrap();
        let b = run(&again, kind, CORPUS_HORIZON, 2).unwrap();
        let ma = protocol_report(tvg, kind, &a).map(|r| r.to_json()).unwrap_or_else(|e| e.to_string());
        let mb = protocol_report(&again, kind, &b).map(|r| r.to_json()).unwrap_or_else(|e| e.to_string());
        compared += 1;
        if a.serialize() != b.serialize() || ma != mb {
            bad.push(name.clone());
        }
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/");
        if std::env::var_os("TVGSIM_BLESS").is_some() && GOLDEN.contains(&name.as_str()) {
            std::fs::create_dir_all(dir).unwrap();
            std::fs::write(format!("{dir}{name}.trace"), a.serialize()).unwrap();
            std::fs::write(format!("{dir}{name}.metrics.json"), format!("{ma}\n")).unwrap();
        }
        if let Ok(golden) = std::fs::read_to_string(format!("{dir}{name}.trace")) {
            golden_checked += 1;
            let metrics = std::fs::read_to_string(format!("{dir}{name}.metrics.json")).unwrap_or_default();
            if golden != a.serialize() || metrics.trim_end() != ma {
                bad.push(format!("{name} (golden)"));
            }
        }
    }
    check(
        bad.is_empty() && golden_checked >= 3,
        format!("{compared} scenario/protocol pairs run twice (seed varied, scenario round-tripped); {golden_checked} committed golden traces match; mismatches {bad:?}"),
    )
}

fn c10_earliest_arrival() -> Outcome {
    let mut rng = seeded(10);
    let mut queries = 0;
    let mut bad = Vec::new();
    for case in 0..300 {
        let tvg = random_small_tvg(&mut rng, 5, 20);
        let ids: Vec<VertexId> = tvg.vertices().cloned().collect();
        for from in &ids {
            for to in &ids {
                for after in [0, rng.random_range(0..20)] {
                    for deliverable in [false, true] {
                        queries += 1;
                        let got = tvg.earliest_arrival(from, to, after, deliverable).unwrap();
                        let want = time_expanded_arrival(&tvg, from, to, after, deliverable, 200);
                        if got != want {
                            bad.push(format!("case {case} {from}->{to} after {after} deliverable {deliverable}: {got:?} vs {want:?}"));
                        }
                    }
                }
            }
        }
    }
    check(bad.is_empty(), format!("{queries} queries on 300 random TVGs (<=5 vertices, intervals in [0,20)); mismatches {}", bad.len()))
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |id: &str, title: &str, started: Instant, o: Outcome| {
        all_pass &= o.pass;
        println!(
            "{} {id} {title}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            started.elapsed().as_secs_f64()
        );
    };

    let t = Instant::now();
    report("C1", "SMDS cut-set characterization equals brute force", t, c1_characterization());
    let t = Instant::now();
    report("C2", "SMDS existence fixtures", t, c2_fixtures());
    let t = Instant::now();
    let corpus = ug_corpus();
    report("C3", "UG convergence within diam(U^w) steps", t, c3_upper_bound(&corpus));
    let t = Instant::now();
    let (c4, gk_runs) = c4_lower_bound();
    report("C4", "g_k lower bound", t, c4);
    let t = Instant::now();
    report("C5", "greedy invariant", t, c5_greedy(&[&corpus, &gk_runs]));
    let t = Instant::now();
    report("C6", "MDST correctness on SMDS-admitting graphs", t, c6_mdst());
    let t = Instant::now();
    let (c7, c7b) = c7_adversary();
    report("C7", "adversary changes the settled set every round", t, c7);
    report("C7b", "adversary forces change or specification violation every round", t, c7b);
    let t = Instant::now();
    report("C8", "retrying send contract", t, c8_send_retry());
    let t = Instant::now();
    report("C9", "determinism", t, c9_determinism());
    let t = Instant::now();
    report("C10", "earliest arrival equals time-expanded search", t, c10_earliest_arrival());

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
