//! File formats: hypergraphs (JSON and line text), element instances
//! (JSON), operation logs, reduction traces, and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{ElementConnInstance, NodeId};
use crate::hypergraph::{Hypergraph, SplitOffOp, VertexId};
use crate::incidence::incidence_graph;
use crate::reduction::{MinorTrace, ReductionAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    /// One hyperedge per line, optional `#vertices:` header.
    Text,
}

impl Format {
    /// `.json` → JSON, `.he` → text; otherwise `None`.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Some(Format::Json),
            Some("he") => Some(Format::Text),
            _ => None,
        }
    }

    /// Guesses from content: JSON objects start with `{`.
    pub fn sniff(content: &str) -> Format {
        if content.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Text
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphJson {
    vertices: Vec<String>,
    hyperedges: Vec<Vec<String>>,
}

fn named_edges(h: &Hypergraph) -> Vec<Vec<String>> {
    h.hyperedges()
        .map(|(_, m)| m.iter().map(|&v| h.name(v).to_string()).collect())
        .collect()
}

pub fn parse_hypergraph(content: &str, format: Format) -> Result<Hypergraph> {
    match format {
        Format::Json => parse_hypergraph_json(content),
        Format::Text => parse_hypergraph_text(content),
    }
}

pub fn write_hypergraph(h: &Hypergraph, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(write_hypergraph_json(h)),
        Format::Text => write_hypergraph_text(h),
    }
}

pub fn parse_hypergraph_json(content: &str) -> Result<Hypergraph> {
    let raw: HypergraphJson = serde_json::from_str(content).map_err(|e| Error::Parse(e.to_string()))?;
    Hypergraph::from_names(raw.vertices, raw.hyperedges)
}

pub fn write_hypergraph_json(h: &Hypergraph) -> String {
    let raw = HypergraphJson { vertices: h.names().to_vec(), hyperedges: named_edges(h) };
    let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    out.push('\n');
    out
}

const VERTICES_HEADER: &str = "#vertices:";

/// Parses the line format. Vertices are those of the `#vertices:` header
/// (if any) followed by the remaining names in order of first appearance.
/// Blank lines and other `#` lines are ignored.
pub fn parse_hypergraph_text(content: &str) -> Result<Hypergraph> {
    let mut vertices: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut edges: Vec<Vec<&str>> = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix(VERTICES_HEADER) {
            for name in rest.split_whitespace() {
                if !seen.insert(name.to_string()) {
                    return Err(Error::Parse(format!("line {}: vertex `{name}` listed twice", lineno + 1)));
                }
                vertices.push(name.to_string());
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        edges.push(line.split_whitespace().collect());
    }
    for edge in &edges {
        for &name in edge {
            if seen.insert(name.to_string()) {
                vertices.push(name.to_string());
            }
        }
    }
    Hypergraph::from_names(vertices, edges)
}

fn text_safe(name: &str) -> bool {
    !name.is_empty() && !name.starts_with('#') && !name.chars().any(char::is_whitespace)
}

pub fn write_hypergraph_text(h: &Hypergraph) -> Result<String> {
    if let Some(bad) = h.names().iter().find(|n| !text_safe(n)) {
        return Err(Error::Parse(format!("vertex name `{bad}` cannot be written in the text format")));
    }
    let mut out = String::from(VERTICES_HEADER);
    for name in h.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for edge in named_edges(h) {
        out.push_str(&edge.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    nodes: Vec<String>,
    terminals: Vec<String>,
    edges: Vec<[String; 2]>,
}

/// Element instance: `{"nodes": [...], "terminals": [...], "edges": [[a, b], ...]}`.
pub fn parse_instance_json(content: &str) -> Result<ElementConnInstance> {
    let raw: InstanceJson = serde_json::from_str(content).map_err(|e| Error::Parse(e.to_string()))?;
    let mut index = BTreeMap::new();
    for name in &raw.nodes {
        if index.insert(name.as_str(), ()).is_some() {
            return Err(Error::DuplicateVertex(name.clone()));
        }
    }
    for t in &raw.terminals {
        if !index.contains_key(t.as_str()) {
            return Err(Error::UnknownVertex(t.clone()));
        }
    }
    let mut inst = ElementConnInstance::new();
    let mut ids = BTreeMap::new();
    for name in &raw.nodes {
        let id = inst.add_node(name.clone(), raw.terminals.contains(name));
        ids.insert(name.as_str(), id);
    }
    for [a, b] in &raw.edges {
        let lookup = |n: &String| ids.get(n.as_str()).copied().ok_or_else(|| Error::UnknownVertex(n.clone()));
        inst.add_edge(lookup(a)?, lookup(b)?)?;
    }
    Ok(inst)
}

pub fn write_instance_json(inst: &ElementConnInstance) -> String {
    let raw = InstanceJson {
        nodes: inst.nodes().map(|v| inst.label(v).to_string()).collect(),
        terminals: inst.terminals().into_iter().map(|v| inst.label(v).to_string()).collect(),
        edges: inst
            .edges()
            .map(|(_, a, b)| [inst.label(a).to_string(), inst.label(b).to_string()])
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    out.push('\n');
    out
}

/// Operation log file. `hyperedges` lists the input's hyperedges in id
/// order, binding the ids used in `ops` to the input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpLogFile {
    pub split_vertex: String,
    pub hyperedges: Vec<Vec<String>>,
    pub ops: Vec<SplitOffOp>,
}

impl OpLogFile {
    pub fn new(h: &Hypergraph, s: VertexId, ops: Vec<SplitOffOp>) -> Self {
        OpLogFile { split_vertex: h.name(s).to_string(), hyperedges: named_edges(h), ops }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn from_json(content: &str) -> Result<Self> {
        serde_json::from_str(content).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks the header against `h` and resolves the split vertex.
    pub fn bind(&self, h: &Hypergraph) -> Result<VertexId> {
        let s = h
            .vertex(&self.split_vertex)
            .ok_or_else(|| Error::UnknownVertex(self.split_vertex.clone()))?;
        let canon = |edges: &[Vec<String>]| -> Vec<Vec<String>> {
            edges
                .iter()
                .map(|e| {
                    let mut e = e.clone();
                    e.sort();
                    e
                })
                .collect()
        };
        let ids_dense = h.hyperedges().enumerate().all(|(i, (id, _))| id.index() == i);
        if !ids_dense || canon(&self.hyperedges) != canon(&named_edges(h)) {
            return Err(Error::Parse("log header does not match the hypergraph's hyperedges".into()));
        }
        Ok(s)
    }
}

#[derive(Serialize)]
struct TraceStepJson<'a> {
    edge_id: u32,
    edge: [&'a str; 2],
    action: ReductionAction,
    #[serde(skip_serializing_if = "Option::is_none")]
    merged_into: Option<&'a str>,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    steps: Vec<TraceStepJson<'a>>,
    groups: BTreeMap<&'a str, Vec<&'a str>>,
}

/// Reduction trace with node labels from `original`.
pub fn write_trace_json(original: &ElementConnInstance, trace: &MinorTrace) -> String {
    let label = |n: NodeId| original.label(n);
    let raw = TraceJson {
        steps: trace
            .steps
            .iter()
            .map(|s| TraceStepJson {
                edge_id: s.edge.0,
                edge: [label(s.endpoints.0), label(s.endpoints.1)],
                action: s.action,
                merged_into: s.merged_into.map(label),
            })
            .collect(),
        groups: trace
            .groups
            .iter()
            .map(|(&k, members)| (label(k), members.iter().map(|&m| label(m)).collect()))
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("plain data serializes");
    out.push('\n');
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT drawing of an element instance: terminals as boxes, non-terminals
/// as circles.
pub fn instance_to_dot(inst: &ElementConnInstance, name: &str) -> String {
    let mut out = format!("graph \"{}\" {{\n", dot_escape(name));
    for v in inst.nodes() {
        let shape = if inst.is_terminal(v) { "box" } else { "circle" };
        let _ = writeln!(out, "  n{} [label=\"{}\", shape={shape}];", v.0, dot_escape(inst.label(v)));
    }
    for (_, a, b) in inst.edges() {
        let _ = writeln!(out, "  n{} -- n{};", a.0, b.0);
    }
    out.push_str("}\n");
    out
}

/// DOT drawing of the incidence graph of `h`.
pub fn hypergraph_to_dot(h: &Hypergraph) -> String {
    instance_to_dot(&incidence_graph(h).instance, "incidence")
}
