//! Weighted median orders and the tools built on them.
//!
//! The forward weight of a linear order is the sum of `ω(u)·ω(v)` over arcs
//! `u -> v` with `u` placed before `v`; a median order maximises it. The
//! last vertex is the feed.

mod exact;
mod heuristic;
mod sed;

use serde::Serialize;

pub use exact::{median_order_exact, median_order_exact_capped, DEFAULT_EXACT_CAP};
pub use heuristic::median_order_heuristic;
pub use sed::{sedimentation, sedimentation_class, SedClass, DEFAULT_SED_BUDGET};

use crate::dependency::{analyze, is_interval};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::util::weights_equal;
use crate::vertex_set::VertexSet;

/// A permutation of the vertex set with its forward weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearOrder {
    pub seq: Vec<usize>,
    pub weight: f64,
    /// Set when `weight` is known to be the optimum.
    pub certified: bool,
}

impl LinearOrder {
    /// Wraps `seq`, computing its weight. Not certified.
    pub fn new(g: &OrientedGraph, seq: Vec<usize>) -> Result<Self> {
        let weight = order_weight(g, &seq)?;
        Ok(LinearOrder { seq, weight, certified: false })
    }

    pub fn feed(&self) -> usize {
        *self.seq.last().expect("order of an empty graph has no feed")
    }

    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.seq.iter().position(|&u| u == v)
    }

    /// `pos[v]` is the index of `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.seq.len()];
        for (i, &v) in self.seq.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

impl std::fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.seq.iter().map(|v| v.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

fn check_permutation(n: usize, seq: &[usize]) -> Result<()> {
    if seq.len() != n || seq.iter().any(|&v| v >= n) || seq.iter().collect::<VertexSet>() != VertexSet::full(n) {
        return Err(Error::NotPermutation);
    }
    Ok(())
}

pub fn order_weight(g: &OrientedGraph, seq: &[usize]) -> Result<f64> {
    check_permutation(g.n(), seq)?;
    let mut before = VertexSet::EMPTY;
    let mut w = 0.0;
    for &v in seq {
        w += g.weight(v) * g.weight_of(g.inc(v).intersection(before));
        before.insert(v);
    }
    Ok(w)
}

/// Every part of `blocks` occupies consecutive positions of `seq`.
pub fn blocks_contiguous(seq: &[usize], blocks: &[VertexSet]) -> bool {
    blocks.iter().all(|b| {
        let idx: Vec<usize> = seq.iter().enumerate().filter(|(_, v)| b.contains(**v)).map(|(i, _)| i).collect();
        idx.is_empty() || idx[idx.len() - 1] - idx[0] + 1 == idx.len()
    })
}

/// Block of `blocks` containing `v`, or `{v}`.
pub fn block_containing(blocks: &[VertexSet], v: usize) -> VertexSet {
    blocks.iter().copied().find(|b| b.contains(v)).unwrap_or(VertexSet::singleton(v))
}

/// Checks that `blocks` partition V into intervals with all arcs between two
/// blocks pointing the same way, which is what contraction needs.
pub fn check_interval_partition(g: &OrientedGraph, blocks: &[VertexSet]) -> Result<()> {
    let union = blocks.iter().fold(VertexSet::EMPTY, |s, &b| s.union(b));
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    if union != g.vertices() || total != g.n() {
        return Err(Error::NotGoodDigraph("blocks do not partition the vertex set".into()));
    }
    for (i, &b) in blocks.iter().enumerate() {
        if !is_interval(g, b) {
            return Err(Error::NotGoodDigraph(format!("block {b} is not an interval")));
        }
        for &c in &blocks[i + 1..] {
            let (u, v) = (b.first().unwrap(), c.first().unwrap());
            if !g.adjacent(u, v) {
                return Err(Error::NotGoodDigraph(format!("blocks {b} and {c} are not adjacent")));
            }
        }
    }
    Ok(())
}

/// A median order in which every K(ξ) is contiguous.
pub fn good_median_order(g: &OrientedGraph) -> Result<LinearOrder> {
    let a = analyze(g);
    if let Some(b) = a.blocks.iter().find(|b| !b.is_interval) {
        return Err(Error::NotGoodDigraph(format!("K(ξ) = {} is not an interval", b.support)));
    }
    good_median_order_with(g, &a.partition(), DEFAULT_EXACT_CAP)
}

/// Contracts each part of `blocks` to one vertex of weight `ω(part)`, solves
/// the quotient and every part exactly, and checks the concatenation against
/// the unconstrained optimum.
pub fn good_median_order_with(g: &OrientedGraph, blocks: &[VertexSet], cap: usize) -> Result<LinearOrder> {
    check_interval_partition(g, blocks)?;
    let m = blocks.len();
    let mut arcs = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && g.has_arc(blocks[i].first().unwrap(), blocks[j].first().unwrap()) {
                arcs.push((i, j));
            }
        }
    }
    let weights: Vec<f64> = blocks.iter().map(|&b| g.weight_of(b)).collect();
    let quotient = OrientedGraph::new(m, &arcs)?.with_weights(&weights)?;
    let outer = median_order_exact_capped(&quotient, None, cap)?;

    let mut seq = Vec::with_capacity(g.n());
    for &bi in &outer.seq {
        let (inner, map) = g.induced_set(blocks[bi]);
        let inner_order = median_order_exact_capped(&inner, None, cap)?;
        seq.extend(inner_order.seq.iter().map(|&i| map[i]));
    }
    let weight = order_weight(g, &seq)?;
    let optimum = median_order_exact_capped(g, None, cap)?.weight;
    if !weights_equal(weight, optimum) {
        return Err(Error::IntervalOptimalityMismatch { constrained: weight, optimum });
    }
    Ok(LinearOrder { seq, weight, certified: true })
}

/// Good and bad vertices of an order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderAnalysis {
    pub feed: usize,
    /// `G_L`.
    pub good: VertexSet,
    pub bad: VertexSet,
    /// `(v, i)`: good vertex `v` with `f -> seq[i] -> v` and `i` before `v`.
    pub witnesses: Vec<(usize, usize)>,
}

pub fn classify_vertices(g: &OrientedGraph, seq: &[usize]) -> Result<OrderAnalysis> {
    check_permutation(g.n(), seq)?;
    let f = *seq.last().ok_or(Error::NotPermutation)?;
    let fo = g.out(f);
    let mut good = VertexSet::EMPTY;
    let mut bad = VertexSet::EMPTY;
    let mut witnesses = Vec::new();
    for (j, &v) in seq.iter().enumerate() {
        if v == f || fo.contains(v) {
            continue;
        }
        match (0..j).find(|&i| fo.contains(seq[i]) && g.has_arc(seq[i], v)) {
            Some(i) => {
                good.insert(v);
                witnesses.push((v, i));
            }
            None => bad.insert(v),
        }
    }
    Ok(OrderAnalysis { feed: f, good, bad, witnesses })
}

/// `ω(N+(f) \ J(f))` and `ω(G_L \ J(f))` for the feed `f` of `seq`.
pub fn feed_balance(g: &OrientedGraph, seq: &[usize], blocks: &[VertexSet]) -> Result<(f64, f64)> {
    let oa = classify_vertices(g, seq)?;
    let j = block_containing(blocks, oa.feed);
    Ok((g.weight_of(g.out(oa.feed).difference(j)), g.weight_of(oa.good.difference(j))))
}
