//! The losing relation between missing edges, the dependency digraph Δ and
//! the block structure built on top of it.
//!
//! A missing edge `xy` loses to `ab` when `x -> a`, `b` is not reachable
//! from `x` in one or two steps, `y -> b`, and `a` is not reachable from `y`
//! in one or two steps. Δ has one node per missing edge and one arc per
//! losing relation.
//!
//! For a connected component `C` of Δ, `K(C)` is the set of graph vertices
//! touched by its edges. Components whose supports intersect are merged
//! (union-find) into blocks `ξ`; `J(v)` is the support of the block holding
//! `v`, or `{v}` for a whole vertex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::util::UnionFind;
use crate::vertex_set::VertexSet;

/// A missing edge in canonical form `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

fn canonical(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

fn require_missing(g: &OrientedGraph, (u, v): (usize, usize)) -> Result<()> {
    if g.is_missing(u, v) {
        Ok(())
    } else {
        Err(Error::NotMissing(u, v))
    }
}

/// Labelled losing check: `x -> a`, `b ∉ N+(x) ∪ N++(x)`, `y -> b`,
/// `a ∉ N+(y) ∪ N++(y)`. No validation.
pub fn loses_labelled(g: &OrientedGraph, x: usize, y: usize, a: usize, b: usize) -> bool {
    g.has_arc(x, a) && g.has_arc(y, b) && !g.reach2(x).contains(b) && !g.reach2(y).contains(a)
}

/// Whether `(x, y)` loses to `(a, b)` with exactly this labelling.
pub fn loses_to(g: &OrientedGraph, e1: (usize, usize), e2: (usize, usize)) -> Result<bool> {
    require_missing(g, e1)?;
    require_missing(g, e2)?;
    Ok(loses_labelled(g, e1.0, e1.1, e2.0, e2.1))
}

/// Every labelling `[x, y, a, b]` of the two edges witnessing `e1 -> e2`,
/// normalised so that `x < y`.
///
/// At most one entry can appear: the other pairing would need `x -> b`
/// while also `b ∉ N+(x)`.
pub fn losing_labellings(g: &OrientedGraph, e1: Edge, e2: Edge) -> Vec<[usize; 4]> {
    let (x, y) = canonical(e1.0, e1.1);
    let (a, b) = e2;
    [[x, y, a, b], [x, y, b, a]]
        .into_iter()
        .filter(|&[x, y, a, b]| loses_labelled(g, x, y, a, b))
        .collect()
}

/// Condition (i) of a good missing edge for the labelling `(a, b)`: every
/// `v -> a` outside the edge reaches `b` in one or two steps.
pub fn convenient_for(g: &OrientedGraph, a: usize, b: usize) -> bool {
    g.inc(a).without(b).iter().all(|v| g.reach2(v).contains(b))
}

/// Direct test of the good-edge definition, independent of Δ.
pub fn is_good_edge(g: &OrientedGraph, e: Edge) -> Result<bool> {
    require_missing(g, e)?;
    Ok(convenient_for(g, e.0, e.1) || convenient_for(g, e.1, e.0))
}

/// The arc `(a, b)` to add for a good missing edge. When both directions
/// qualify, the one with the smaller source wins.
pub fn convenient_orientation(g: &OrientedGraph, e: (usize, usize)) -> Result<(usize, usize)> {
    require_missing(g, e)?;
    let (u, v) = canonical(e.0, e.1);
    if convenient_for(g, u, v) {
        Ok((u, v))
    } else if convenient_for(g, v, u) {
        Ok((v, u))
    } else {
        Err(Error::NotGood(u, v))
    }
}

/// One arc of Δ together with the labellings that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaArc {
    pub from: usize,
    pub to: usize,
    /// `[x, y, a, b]`: `x -> a` and `y -> b`, where `from = {x, y}` and
    /// `to = {a, b}`.
    pub labellings: Vec<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependencyDigraph {
    /// Missing edges, sorted; node `i` is `nodes[i]`.
    pub nodes: Vec<Edge>,
    pub arcs: Vec<DeltaArc>,
    /// `good[i]` iff node `i` has in-degree 0.
    pub good: Vec<bool>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl DependencyDigraph {
    pub fn build(g: &OrientedGraph) -> Self {
        let nodes = g.missing_graph().edges;
        let m = nodes.len();
        let mut arcs = Vec::new();
        let mut out_adj = vec![Vec::new(); m];
        let mut in_adj = vec![Vec::new(); m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let labellings = losing_labellings(g, nodes[i], nodes[j]);
                if !labellings.is_empty() {
                    out_adj[i].push(j);
                    in_adj[j].push(i);
                    arcs.push(DeltaArc { from: i, to: j, labellings });
                }
            }
        }
        let good = in_adj.iter().map(Vec::is_empty).collect();
        DependencyDigraph { nodes, arcs, good, out_adj, in_adj }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, u: usize, v: usize) -> Option<usize> {
        self.nodes.binary_search(&canonical(u, v)).ok()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.out_adj[i].contains(&j)
    }

    /// Labelling `[x, y, a, b]` of the arc `i -> j`, if present.
    pub fn labelling(&self, i: usize, j: usize) -> Option<[usize; 4]> {
        self.arcs.iter().find(|a| a.from == i && a.to == j).map(|a| a.labellings[0])
    }

    /// Weakly connected components, each a sorted list of node indices,
    /// ordered by their smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.len());
        for a in &self.arcs {
            uf.union(a.from, a.to);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..self.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn support(&self, nodes: &[usize]) -> VertexSet {
        nodes.iter().flat_map(|&i| [self.nodes[i].0, self.nodes[i].1]).collect()
    }
}

/// Shape of a Δ component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// A directed path; a single node without arcs counts as a path.
    Path,
    /// A directed cycle of length at least 2.
    Cycle,
    DoubleCycle,
    Other,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Path => "path",
            Shape::Cycle => "cycle",
            Shape::DoubleCycle => "double-cycle",
            Shape::Other => "other",
        })
    }
}

/// A directed path of Δ in order, if `nodes` induce one.
pub fn as_directed_path(delta: &DependencyDigraph, nodes: &[usize]) -> Option<Vec<usize>> {
    let inside = |j: &usize| nodes.contains(j);
    let outs = |i: usize| delta.out_neighbors(i).iter().filter(|j| inside(j)).copied().collect::<Vec<_>>();
    let ins = |i: usize| delta.in_neighbors(i).iter().filter(|j| inside(j)).count();
    if nodes.iter().any(|&i| outs(i).len() > 1 || ins(i) > 1) {
        return None;
    }
    let sources: Vec<usize> = nodes.iter().copied().filter(|&i| ins(i) == 0).collect();
    if sources.len() != 1 {
        return None;
    }
    let mut path = vec![sources[0]];
    while let Some(&next) = outs(*path.last().unwrap()).first() {
        path.push(next);
    }
    (path.len() == nodes.len()).then_some(path)
}

/// A directed cycle of Δ in order, starting at its smallest node.
pub fn as_directed_cycle(delta: &DependencyDigraph, nodes: &[usize]) -> Option<Vec<usize>> {
    if nodes.len() < 2 {
        return None;
    }
    let inside = |j: &usize| nodes.contains(j);
    for &i in nodes {
        let outs = delta.out_neighbors(i).iter().filter(|j| inside(j)).count();
        let ins = delta.in_neighbors(i).iter().filter(|j| inside(j)).count();
        if outs != 1 || ins != 1 {
            return None;
        }
    }
    let start = *nodes.iter().min()?;
    let mut cycle = vec![start];
    loop {
        let next = *delta.out_neighbors(*cycle.last().unwrap()).iter().find(|j| inside(j))?;
        if next == start {
            break;
        }
        cycle.push(next);
    }
    (cycle.len() == nodes.len()).then_some(cycle)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    /// Node indices into [`DependencyDigraph::nodes`].
    pub nodes: Vec<usize>,
    /// `K(C)`.
    pub support: VertexSet,
    pub shape: Shape,
}

/// A connected component `ξ` of the interval graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    /// Indices into [`DependencyAnalysis::components`].
    pub components: Vec<usize>,
    /// `K(ξ)`.
    pub support: VertexSet,
    pub is_interval: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependencyAnalysis {
    pub delta: DependencyDigraph,
    pub components: Vec<Component>,
    /// Pairs of component indices whose supports intersect.
    pub interval_graph: Vec<(usize, usize)>,
    pub blocks: Vec<Block>,
    block_of: Vec<Option<usize>>,
}

pub fn dependency_digraph(g: &OrientedGraph) -> DependencyDigraph {
    DependencyDigraph::build(g)
}

pub fn analyze(g: &OrientedGraph) -> DependencyAnalysis {
    let delta = DependencyDigraph::build(g);
    let components: Vec<Component> = delta
        .components()
        .into_iter()
        .map(|nodes| {
            let support = delta.support(&nodes);
            let shape = if as_directed_path(&delta, &nodes).is_some() {
                Shape::Path
            } else if as_directed_cycle(&delta, &nodes).is_some() {
                Shape::Cycle
            } else if crate::paths::double_cycle_of(g, &delta, &nodes).is_some() {
                Shape::DoubleCycle
            } else {
                Shape::Other
            };
            Component { nodes, support, shape }
        })
        .collect();

    let c = components.len();
    let mut interval_graph = Vec::new();
    let mut uf = UnionFind::new(c);
    for i in 0..c {
        for j in i + 1..c {
            if !components[i].support.is_disjoint(components[j].support) {
                interval_graph.push((i, j));
                uf.union(i, j);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..c {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut blocks: Vec<Block> = groups
        .into_values()
        .map(|comps| {
            let support = comps.iter().fold(VertexSet::EMPTY, |s, &i| s.union(components[i].support));
            Block { components: comps, support, is_interval: is_interval(g, support) }
        })
        .collect();
    blocks.sort_by_key(|b| b.support.first());

    let mut block_of = vec![None; g.n()];
    for (bi, b) in blocks.iter().enumerate() {
        for v in b.support {
            block_of[v] = Some(bi);
        }
    }
    DependencyAnalysis { delta, components, interval_graph, blocks, block_of }
}

impl DependencyAnalysis {
    /// Index of the block containing `v`, `None` for whole vertices.
    pub fn block_of(&self, v: usize) -> Option<usize> {
        self.block_of[v]
    }

    /// `J(v)`.
    pub fn j(&self, v: usize) -> VertexSet {
        match self.block_of[v] {
            Some(b) => self.blocks[b].support,
            None => VertexSet::singleton(v),
        }
    }

    /// Every K(ξ) is an interval.
    pub fn is_good(&self) -> bool {
        self.blocks.iter().all(|b| b.is_interval)
    }

    /// The distinct `J` sets, ordered by smallest member. They partition V.
    pub fn partition(&self) -> Vec<VertexSet> {
        let n = self.block_of.len();
        let mut parts: Vec<VertexSet> = self.blocks.iter().map(|b| b.support).collect();
        parts.extend((0..n).filter(|&v| self.block_of[v].is_none()).map(VertexSet::singleton));
        parts.sort_by_key(|s| s.first());
        parts
    }

    /// The only component of a block, if it has exactly one.
    pub fn single_component(&self, block: usize) -> Option<&Component> {
        match self.blocks[block].components.as_slice() {
            [c] => Some(&self.components[*c]),
            _ => None,
        }
    }
}

/// `N+(u) \ S` and `N-(u) \ S` agree for all `u` in `S`.
pub fn is_interval(g: &OrientedGraph, s: VertexSet) -> bool {
    let Some(first) = s.first() else { return true };
    let out = g.out(first).difference(s);
    let inc = g.inc(first).difference(s);
    s.iter().all(|u| g.out(u).difference(s) == out && g.inc(u).difference(s) == inc)
}

pub fn is_good_digraph(g: &OrientedGraph) -> bool {
    analyze(g).is_good()
}
