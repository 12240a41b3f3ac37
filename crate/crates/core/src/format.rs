//! Plain-text edge-list format.
//!
//! ```text
//! # optional comment lines
//! n m
//! u v        (m arc lines, arc u -> v)
//! w v x      (optional: vertex v has weight x)
//! ```
//!
//! Pairs joined by no arc are the missing edges.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn semantic(line: usize, source: Error) -> Error {
    Error::Semantic { line, source: Box::new(source) }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| syntax(line, format!("expected {what}, found '{tok}'")))
}

/// Parses the edge-list format. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<OrientedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(syntax(hline, "header must be 'n m'"));
    }
    let n = parse_usize(toks[0], hline, "vertex count")?;
    let m = parse_usize(toks[1], hline, "arc count")?;
    let mut g = OrientedGraph::new(n, &[]).map_err(|e| semantic(hline, e))?;

    let mut arcs_seen = 0;
    let mut weights = g.weights().to_vec();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["w", v, x] => {
                let v = parse_usize(v, line, "vertex")?;
                let x: f64 = x.parse().map_err(|_| syntax(line, format!("expected weight, found '{x}'")))?;
                if v >= n {
                    return Err(semantic(line, Error::OutOfRange { vertex: v, n }));
                }
                if !(x.is_finite() && x > 0.0) {
                    return Err(semantic(line, Error::BadWeight { vertex: v, weight: x }));
                }
                weights[v] = x;
            }
            [u, v] => {
                if arcs_seen == m {
                    return Err(syntax(line, format!("more than the declared {m} arcs")));
                }
                let u = parse_usize(u, line, "vertex")?;
                let v = parse_usize(v, line, "vertex")?;
                g = g.with_arc(u, v).map_err(|e| semantic(line, e))?;
                arcs_seen += 1;
            }
            _ => return Err(syntax(line, format!("unrecognised line '{l}'"))),
        }
    }
    if arcs_seen != m {
        return Err(syntax(hline, format!("declared {m} arcs, found {arcs_seen}")));
    }
    g.with_weights(&weights)
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<OrientedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

/// Serialises `g`, prefixing each line of `header` with `# `.
pub fn write_graph(g: &OrientedGraph, header: &[String]) -> String {
    let mut s = String::new();
    for h in header {
        let _ = writeln!(s, "# {h}");
    }
    let arcs = g.arcs();
    let _ = writeln!(s, "{} {}", g.n(), arcs.len());
    for (u, v) in arcs {
        let _ = writeln!(s, "{u} {v}");
    }
    for (v, &w) in g.weights().iter().enumerate() {
        if w != 1.0 {
            let _ = writeln!(s, "w {v} {w}");
        }
    }
    s
}
