//! Edge-list and JSON graph formats.
//!
//! Edge lists are lines of `u v` pairs. `#` starts a comment, blank lines
//! are skipped and an optional `n <count>` line fixes the vertex count
//! (otherwise it is one more than the largest id). JSON graphs have the form
//! `{"n": 4, "edges": [[0, 1], [1, 2]]}`.
//!
//! Both writers emit edges sorted with `u < v`, so parse/write round trips
//! are byte-identical.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses the edge-list text format.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 {
                return Err(parse_err(line_no, "header must be `n <count>`"));
            }
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate `n` header"));
            }
            header = Some(parse_id(tokens[1], line_no)?);
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(line_no, format!("expected `u v`, found {} tokens", tokens.len())));
        }
        let u = parse_id(tokens[0], line_no)?;
        let v = parse_id(tokens[1], line_no)?;
        if u == v {
            return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
        }
        edges.push((line_no, u, v));
    }

    let inferred = edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match header {
        Some(n) => {
            if let Some(&(line_no, u, v)) = edges.iter().find(|&&(_, u, v)| u.max(v) >= n) {
                return Err(parse_err(line_no, format!("edge {u} {v} exceeds header vertex count {n}")));
            }
            n
        }
        None => inferred,
    };
    Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

/// Writes the edge-list format with an explicit `n` header.
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "n {}", graph.order()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn from_json(text: &str) -> Result<Graph> {
    let parsed: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if let Some(&[u, _]) = parsed.edges.iter().find(|[u, v]| u == v) {
        return Err(Error::Json(format!("self-loop at vertex {u}")));
    }
    Graph::from_edges(parsed.n, parsed.edges.iter().map(|&[u, v]| (u, v)))
}

/// Compact JSON form, edges sorted.
pub fn to_json(graph: &Graph) -> String {
    serde_json::to_string(&to_json_value(graph)).expect("graph serializes")
}

pub fn to_json_value(graph: &Graph) -> serde_json::Value {
    let json = JsonGraph {
        n: graph.order(),
        edges: graph.edges().map(|(u, v)| [u, v]).collect(),
    };
    serde_json::to_value(json).expect("graph serializes")
}

/// Accepts either format, deciding by the first non-blank character.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_edge_list(text)
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("`{token}` is not a non-negative integer")))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}
