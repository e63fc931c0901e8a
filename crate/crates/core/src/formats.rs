//! Text formats: the line-based graph file and the JSON scenario file.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! vertices: p1,p2,p3
//! edge: p1 p2
//! edge: p2 p3
//! ```
//!
//! Scenario file: an object with `vertices`, `edges` (each with `u`, `v`,
//! `latency`, half-open `intervals` and an optional `periodic` tail) and an
//! optional `process_latency`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, StaticGraph, VertexId};
use crate::schedule::{Interval, PeriodicTail, PresenceSchedule, Tick};
use crate::tvg::{EdgeSpec, Tvg};
use crate::FormatError;

fn fail(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<StaticGraph, FormatError> {
    let mut graph: Option<StaticGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return Err(fail(line, format!("expected `vertices:` or `edge:`, found {content:?}")));
        };
        match (key.trim(), graph.as_mut()) {
            ("vertices", None) => {
                let mut g = StaticGraph::new();
                for tok in rest.split(',') {
                    let id = VertexId::new(tok.trim()).map_err(|e| fail(line, e.to_string()))?;
                    if !g.add_vertex(id.clone()) {
                        return Err(fail(line, format!("duplicate vertex {id}")));
                    }
                }
                graph = Some(g);
            }
            ("vertices", Some(_)) => return Err(fail(line, "second `vertices:` line")),
            ("edge", None) => return Err(fail(line, "`edge:` before the `vertices:` line")),
            ("edge", Some(g)) => {
                let ends: Vec<&str> = rest.split_whitespace().collect();
                let [a, b] = ends[..] else {
                    return Err(fail(line, format!("expected two endpoints, found {}", ends.len())));
                };
                let a = VertexId::new(a).map_err(|e| fail(line, e.to_string()))?;
                let b = VertexId::new(b).map_err(|e| fail(line, e.to_string()))?;
                for v in [&a, &b] {
                    if !g.contains_vertex(v) {
                        return Err(fail(line, format!("unknown vertex {v}")));
                    }
                }
                let e = Edge::new(a, b).map_err(|e| fail(line, e.to_string()))?;
                if !g.insert_edge(e.clone()) {
                    return Err(fail(line, format!("duplicate edge {e}")));
                }
            }
            (other, _) => return Err(fail(line, format!("unknown directive {other:?}"))),
        }
    }
    graph.ok_or_else(|| fail(1, "missing `vertices:` line"))
}

pub fn write_graph(g: &StaticGraph) -> String {
    let ids: Vec<&str> = g.vertices().map(|v| v.as_str()).collect();
    let mut out = format!("vertices: {}\n", ids.join(","));
    for e in g.edges() {
        out.push_str(&format!("edge: {} {}\n", e.lo(), e.hi()));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default)]
    pub process_latency: Tick,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: String,
    pub v: String,
    pub latency: Tick,
    #[serde(default)]
    pub intervals: Vec<[Tick; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicTail>,
}

impl ScenarioFile {
    pub fn from_tvg(tvg: &Tvg) -> Self {
        ScenarioFile {
            vertices: tvg.vertices().map(|v| v.to_string()).collect(),
            edges: tvg
                .edges()
                .map(|(e, spec)| EdgeEntry {
                    u: e.lo().to_string(),
                    v: e.hi().to_string(),
                    latency: spec.latency,
                    intervals: spec
                        .schedule
                        .intervals()
                        .iter()
                        .map(|iv| [iv.start, iv.end])
                        .collect(),
                    periodic: spec.schedule.periodic(),
                })
                .collect(),
            process_latency: tvg.process_latency(),
        }
    }
}

/// Line numbers of the parts of a scenario document that validation errors
/// point at.
#[derive(Debug, Default)]
struct Landmarks {
    vertices: Option<usize>,
    edges: Vec<usize>,
}

/// Walks the raw JSON text to find the `vertices` key and the opening brace
/// of each object in the top-level `edges` array.
fn landmarks(text: &str) -> Landmarks {
    let mut marks = Landmarks::default();
    let mut line = 1;
    let mut stack: Vec<char> = Vec::new();
    let mut in_string = false;
    let mut escaped = false;
    let mut string = String::new();
    let mut last_string: Option<(String, usize)> = None;
    let mut key: Option<String> = None;
    let mut edges_depth: Option<usize> = None;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
        }
        if in_string {
            if escaped {
                escaped = false;
                string.push(c);
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
                last_string = Some((std::mem::take(&mut string), line));
            } else {
                string.push(c);
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            ':' if stack.len() == 1 => {
                if let Some((k, at)) = last_string.take() {
                    if k == "vertices" {
                        marks.vertices = Some(at);
                    }
                    key = Some(k);
                }
            }
            '[' | '{' => {
                if c == '{' && edges_depth == Some(stack.len()) {
                    marks.edges.push(line);
                }
                if c == '[' && stack.len() == 1 && key.as_deref() == Some("edges") {
                    edges_depth = Some(2);
                }
                stack.push(c);
            }
            ']' | '}' => {
                stack.pop();
                if edges_depth.is_some_and(|d| stack.len() < d) {
                    edges_depth = None;
                    key = None;
                }
            }
            _ => {}
        }
    }
    marks
}

pub fn parse_scenario(text: &str) -> Result<Tvg, FormatError> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| fail(e.line().max(1), e.to_string()))?;
    let marks = landmarks(text);
    let vertex_line = marks.vertices.unwrap_or(1);
    let edge_line = |i: usize| marks.edges.get(i).copied().unwrap_or(vertex_line);

    let mut vertices = BTreeSet::new();
    for raw in &file.vertices {
        let id = VertexId::new(raw.as_str()).map_err(|e| fail(vertex_line, e.to_string()))?;
        if !vertices.insert(id.clone()) {
            return Err(fail(vertex_line, format!("duplicate vertex {id}")));
        }
    }
    if vertices.is_empty() {
        return Err(fail(vertex_line, "scenario has no vertices"));
    }

    let mut edges = Vec::with_capacity(file.edges.len());
    let mut seen = BTreeSet::new();
    for (i, entry) in file.edges.iter().enumerate() {
        let line = edge_line(i);
        let ctx = |msg: String| fail(line, format!("edge #{} ({}-{}): {msg}", i + 1, entry.u, entry.v));
        let u = VertexId::new(entry.u.as_str()).map_err(|e| ctx(e.to_string()))?;
        let v = VertexId::new(entry.v.as_str()).map_err(|e| ctx(e.to_string()))?;
        for end in [&u, &v] {
            if !vertices.contains(end) {
                return Err(ctx(format!("unknown vertex {end}")));
            }
        }
        let e = Edge::new(u, v).map_err(|e| ctx(e.to_string()))?;
        if !seen.insert(e.clone()) {
            return Err(ctx("edge listed twice".into()));
        }
        if entry.latency == 0 {
            return Err(ctx("latency must be at least 1".into()));
        }
        let intervals = entry
            .intervals
            .iter()
            .map(|&[s, t]| Interval::new(s, t))
            .collect();
        let schedule = PresenceSchedule::new(intervals, entry.periodic).map_err(ctx)?;
        edges.push((e, EdgeSpec::new(schedule, entry.latency)));
    }
    Tvg::new(vertices, edges, file.process_latency).map_err(|e| fail(1, e.to_string()))
}

pub fn write_scenario(tvg: &Tvg) -> String {
    let mut out = serde_json::to_string_pretty(&ScenarioFile::from_tvg(tvg))
        .expect("scenario serialization cannot fail");
    out.push('\n');
    out
}
