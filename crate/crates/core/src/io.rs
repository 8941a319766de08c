//! Graph JSON (`{"n": m, "edges": [[u, v], ...]}`) and DOT export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dag::Dag;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn graph_to_json(g: &Dag) -> String {
    let doc = GraphJson { n: g.vertex_count(), edges: g.edges().iter().map(|&(u, v)| [u, v]).collect() };
    serde_json::to_string(&doc).expect("graph serializes")
}

/// Parses graph JSON. Errors carry the line and column reported by the parser.
pub fn graph_from_json(text: &str) -> Result<Dag> {
    let doc: GraphJson = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    Dag::new(doc.n, doc.edges.into_iter().map(|[u, v]| (u, v)))
}

/// Graphviz rendering, one edge statement per line.
pub fn graph_to_dot(g: &Dag, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    for v in g.vertices() {
        writeln!(out, "  {v};").unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
