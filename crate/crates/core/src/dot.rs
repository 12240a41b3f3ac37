//! Graphviz export.

use std::fmt::Write;

use crate::dependency::DependencyAnalysis;
use crate::graph::OrientedGraph;
use crate::paths::find_double_cycles;
use crate::vertex_set::VertexSet;

/// Arcs solid, missing edges dashed and undirected, `highlight` filled.
pub fn graph_to_dot(g: &OrientedGraph, highlight: VertexSet) -> String {
    let mut s = String::from("digraph D {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let w = g.weight(v);
        let label = if w == 1.0 { v.to_string() } else { format!("{v}\\nω={w}") };
        let fill = if highlight.contains(v) { ", style=filled, fillcolor=gold" } else { "" };
        writeln!(s, "  {v} [label=\"{label}\"{fill}];").unwrap();
    }
    for (u, v) in g.arcs() {
        writeln!(s, "  {u} -> {v};").unwrap();
    }
    for (u, v) in g.missing_graph().edges {
        writeln!(s, "  {u} -> {v} [dir=none, style=dashed, color=gray];").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Δ with one node per missing edge. Arcs of a double cycle are coloured by
/// track: blue from `a_i b_i`, red from `b_i c_i`.
pub fn delta_to_dot(g: &OrientedGraph, a: &DependencyAnalysis) -> String {
    let delta = &a.delta;
    let mut s = String::from("digraph Delta {\n  node [shape=box];\n");
    for (i, &(u, v)) in delta.nodes.iter().enumerate() {
        let style = if delta.good[i] { ", style=bold" } else { "" };
        writeln!(s, "  e{i} [label=\"{u}{v}\"{style}];").unwrap();
    }
    let mut colour = vec![None; delta.nodes.len()];
    for dc in find_double_cycles(g, a) {
        for t in 0..dc.k() {
            colour[delta.index_of(dc.a(t), dc.b(t)).unwrap()] = Some("blue");
            colour[delta.index_of(dc.b(t), dc.c(t)).unwrap()] = Some("red");
        }
    }
    for arc in &delta.arcs {
        match colour[arc.from] {
            Some(c) => writeln!(s, "  e{} -> e{} [color={c}];", arc.from, arc.to).unwrap(),
            None => writeln!(s, "  e{} -> e{};", arc.from, arc.to).unwrap(),
        }
    }
    s.push_str("}\n");
    s
}
