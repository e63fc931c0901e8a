use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvgsim_core::domination::{cut_set_witness, dominator_edges, find_smds, minimal_dominating_sets};
use tvgsim_core::formats::{parse_graph, parse_scenario, write_graph, write_scenario};
use tvgsim_core::metrics::protocol_report;
use tvgsim_core::protocols::ProtocolKind;
use tvgsim_core::scenarios::{
    adversary_destabilize, generate_gk, generate_random_cot, named_graph, GraphFamily, RandomCotParams,
};
use tvgsim_core::sim::run;
use tvgsim_core::{Error, MetricsError, StaticGraph, Tick, Tvg, VertexId};

#[derive(Parser)]
#[command(name = "tvgsim", version, about = "Simulate distributed algorithms on time-varying graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity, diameter and domination analysis of a static graph file.
    Analyze {
        graph: PathBuf,
        /// List every minimal dominating set in canonical order.
        #[arg(long)]
        all_mds: bool,
        /// Look for a strong minimal dominating set and explain each rejection.
        #[arg(long)]
        smds: bool,
    },
    /// Run a protocol over a scenario.
    Simulate {
        scenario: PathBuf,
        /// ug, mdst or flood.
        #[arg(long)]
        protocol: String,
        /// Broadcast origin, required by flood.
        #[arg(long)]
        origin: Option<String>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: u64,
        /// Write the event trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print the complexity report as JSON.
        #[arg(long)]
        metrics: bool,
        /// Accepted for scripting; runs are deterministic regardless.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Earliest arrival of a journey between two vertices.
    Journey {
        scenario: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 0)]
        after: u64,
        /// Require each hop's edge to stay up for the whole crossing.
        #[arg(long)]
        deliverable: bool,
    },
    /// Write a generated scenario or graph file.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Drive the mdst protocol with an adaptive edge-suppression schedule.
    Adversary {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        /// Write the constructed scenario to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// The lower-bound family g_k.
    Gk {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Random connected-over-time scenario.
    Random {
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        /// Probability of each extra edge beyond the spanning tree.
        #[arg(long, default_value_t = 0.3)]
        extra: f64,
        /// Fraction of non-bridge edges that eventually disappear.
        #[arg(long, default_value_t = 0.3)]
        missing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Length of the window holding the finite intervals.
        #[arg(long, default_value_t = 40)]
        window: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Static graph from a named family.
    Graph {
        /// path, cycle, star, complete or tree_random.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Destination file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Exit status and message of a failed command.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let code = match e {
            Error::Format(_) => 1,
            Error::Metrics(MetricsError::NotConverged) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn execute(command: Command) -> CmdResult {
    match command {
        Command::Analyze { graph, all_mds, smds } => analyze(&load_graph(&graph)?, all_mds, smds),
        Command::Simulate { scenario, protocol, origin, horizon, trace, metrics, seed } => {
            let tvg = load_scenario(&scenario)?;
            let origin = origin.map(|o| vertex(&tvg, &o)).transpose()?;
            let kind = ProtocolKind::parse(&protocol, origin).map_err(|e| Failure::usage(e.to_string()))?;
            simulate(&tvg, &kind, horizon, trace.as_deref(), metrics, seed)
        }
        Command::Journey { scenario, from, to, after, deliverable } => {
            let tvg = load_scenario(&scenario)?;
            let (from, to) = (vertex(&tvg, &from)?, vertex(&tvg, &to)?);
            Ok(match tvg.earliest_arrival(&from, &to, after, deliverable)? {
                Some(t) => format!("{t}\n"),
                None => "none\n".to_string(),
            })
        }
        Command::Generate { what } => generate(what),
        Command::Adversary { graph, rounds, output } => adversary(&load_graph(&graph)?, rounds, output.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<StaticGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<Tvg, Failure> {
    parse_scenario(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn vertex(tvg: &Tvg, id: &str) -> Result<VertexId, Failure> {
    VertexId::new(id)
        .ok()
        .filter(|v| tvg.contains_vertex(v))
        .ok_or_else(|| Failure::usage(format!("unknown vertex {id}")))
}

fn emit(text: String, output: Option<&Path>) -> CmdResult {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn analyze(g: &StaticGraph, all_mds: bool, smds: bool) -> CmdResult {
    let mut out = String::new();
    writeln!(out, "vertices: {}", g.vertex_count()).unwrap();
    writeln!(out, "edges: {}", g.edge_count()).unwrap();
    let connected = g.is_connected()?;
    writeln!(out, "connected: {}", if connected { "yes" } else { "no" }).unwrap();
    if connected {
        writeln!(out, "diameter: {}", g.diameter()?).unwrap();
    } else {
        writeln!(out, "graph is disconnected; diameter and SMDS analysis skipped").unwrap();
    }
    let sets = minimal_dominating_sets(g)?;
    if all_mds {
        writeln!(out, "minimal dominating sets: {}", sets.len()).unwrap();
        for m in &sets {
            writeln!(out, "  {m}").unwrap();
        }
    }
    if smds && connected {
        match find_smds(g)? {
            Some(m) => writeln!(out, "SMDS = {m}").unwrap(),
            None => {
                writeln!(out, "no strong minimal dominating set").unwrap();
                for m in &sets {
                    let Some(p) = cut_set_witness(g, m)? else { continue };
                    let edges: Vec<String> = dominator_edges(g, m, &p).iter().map(|e| e.to_string()).collect();
                    writeln!(out, "  {m}: witness {p}, dominator edges {{{}}} are not a cut-set", edges.join(","))
                        .unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn simulate(tvg: &Tvg, kind: &ProtocolKind, horizon: Tick, trace_out: Option<&Path>, metrics: bool, seed: u64) -> CmdResult {
    let trace = run(tvg, kind, horizon, seed)?;
    if let Some(path) = trace_out {
        emit(trace.serialize(), Some(path))?;
    }
    let mut finals = String::new();
    for (v, o) in trace.final_outputs() {
        writeln!(finals, "{v} {o}").unwrap();
    }
    if !metrics {
        return Ok(finals);
    }
    // keep stdout pure JSON when metrics are requested
    eprint!("{finals}");
    let report = protocol_report(tvg, kind, &trace)?;
    Ok(format!("{}\n", report.to_json()))
}

fn generate(what: Generate) -> CmdResult {
    match what {
        Generate::Gk { k, out } => emit(write_scenario(&generate_gk(k)?), out.output.as_deref()),
        Generate::Random { nodes, extra, missing, seed, window, out } => {
            for (name, p) in [("--extra", extra), ("--missing", missing)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Failure::usage(format!("{name} must lie in [0, 1]")));
                }
            }
            let params = RandomCotParams {
                nodes,
                extra_edge_probability: extra,
                missing_fraction: missing,
                horizon: window,
                seed,
            };
            emit(write_scenario(&generate_random_cot(params)?), out.output.as_deref())
        }
        Generate::Graph { family, n, seed, out } => {
            let g = named_graph(GraphFamily::parse(&family, seed)?, n)?;
            emit(write_graph(&g), out.output.as_deref())
        }
    }
}

fn adversary(g: &StaticGraph, rounds: usize, output: Option<&Path>) -> CmdResult {
    let (tvg, report) = adversary_destabilize(g, rounds)?;
    if let Some(path) = output {
        emit(write_scenario(&tvg), Some(path))?;
    }
    let mut out = String::new();
    writeln!(out, "quiet window: {}", report.quiet_window).unwrap();
    for (i, r) in report.rounds.iter().enumerate() {
        let edges: Vec<String> = r.suppressed.iter().map(|e| e.to_string()).collect();
        writeln!(
            out,
            "round {i}: settled {} at {}; witness {}; suppressed {{{}}} from {}; resettled {} at {}; changed {}; resettled is MDS of suppressed eventual graph {}",
            r.stable,
            r.eta,
            r.witness,
            edges.join(","),
            r.eta + 1,
            r.restabilized,
            r.alpha,
            yes_no(r.changed()),
            yes_no(r.restabilized_is_mds),
        )
        .unwrap();
    }
    writeln!(out, "changed rounds: {}/{}", report.changed_rounds(), report.rounds.len()).unwrap();
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
