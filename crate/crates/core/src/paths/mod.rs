//! Digraphs missing disjoint paths of length at most two, and a second SNP
//! vertex in sink-free good digraphs.

mod double_cycle;

use std::fmt;

use serde::Serialize;

pub use double_cycle::{
    check_cycle_parity, check_relation_table, check_second_neighbourhoods, check_structure, check_twins,
    double_cycle_of, find_double_cycles, label_cycle, snp_in_double_cycle_center, snp_in_double_cycle_end, wrap,
    CenterReport, DoubleCycle, EndReport,
};

use crate::certificate::{Method, SnpCertificate};
use crate::completion::{good_completion_with, trace_completion, OrientationRange};
use crate::dependency::{analyze, is_interval, DependencyAnalysis, Shape};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::order::{
    block_containing, classify_vertices, good_median_order_with, sedimentation_class, LinearOrder, SedClass,
    DEFAULT_EXACT_CAP, DEFAULT_SED_BUDGET,
};
use crate::vertex_set::VertexSet;

fn proof(cond: bool, step: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::proof(step, detail()))
    }
}

/// Vertices of `set` with the SNP inside `D[set]`.
fn snp_inside(g: &OrientedGraph, set: VertexSet) -> VertexSet {
    let (h, map) = g.induced_set(set);
    h.snp_vertices().iter().map(|i| map[i]).collect()
}

/// SNP witnesses inside each double-cycle and directed-cycle block, with the
/// interval property checked on the way. Path components get no entry.
fn structural_witnesses(g: &OrientedGraph, a: &DependencyAnalysis) -> Result<Vec<(VertexSet, Vec<usize>)>> {
    let mut out = Vec::new();
    for c in &a.components {
        match c.shape {
            Shape::Path => {}
            Shape::DoubleCycle => {
                let dc = double_cycle_of(g, &a.delta, &c.nodes).expect("component was tagged as a double cycle");
                check_structure(g, &dc)?;
                proof(is_interval(g, c.support), "double cycle interval", || format!("K(C) = {} is not an interval", c.support))?;
                let end = snp_in_double_cycle_end(g, &dc)?;
                let center = snp_in_double_cycle_center(g, &dc)?;
                out.push((c.support, vec![end.vertex, center.vertex]));
            }
            Shape::Cycle => {
                proof(is_interval(g, c.support), "cycle interval", || format!("K(C) = {} is not an interval", c.support))?;
                let inside = snp_inside(g, c.support);
                proof(inside == c.support, "cycle SNP", || format!("only {inside} of K(C) = {} have the SNP in D[K(C)]", c.support))?;
                out.push((c.support, c.support.to_vec()));
            }
            Shape::Other => {
                return Err(Error::HypothesisFailed(format!("Δ component on {} is neither a path, a cycle nor a double cycle", c.support)));
            }
        }
    }
    Ok(out)
}

/// SNP vertex of a digraph missing disjoint paths of length at most 2 whose
/// length-2 paths all lie in double cycles of Δ.
///
/// Double-cycle and directed-cycle components become interval blocks with a
/// structural witness; the rest are Δ paths. The completion argument then
/// produces the certificate.
pub fn find_snp_paths(g: &OrientedGraph) -> Result<SnpCertificate> {
    let g = g.with_unit_weights();
    let mg = g.missing_graph();
    if !mg.is_disjoint_paths(2) {
        return Err(Error::HypothesisFailed("missing graph is not a union of disjoint paths of length at most 2".into()));
    }
    let a = analyze(&g);
    for v in (0..g.n()).filter(|&v| mg.degree(v) == 2) {
        let e = a.delta.index_of(v, mg.neighbors(v).first().unwrap()).unwrap();
        let comp = a.components.iter().find(|c| c.nodes.contains(&e)).unwrap();
        if comp.shape != Shape::DoubleCycle {
            return Err(Error::HypothesisFailed(format!("missing path centered at {v} is not in a double cycle")));
        }
    }
    let witnesses = structural_witnesses(&g, &a)?;
    let oracle = |_: &OrientedGraph, set: VertexSet| witnesses.iter().find(|(s, _)| *s == set).map(|(_, w)| w[0]);
    let c = good_completion_with(&g, &oracle, OrientationRange::All)?;
    Ok(trace_completion(&g, &c, true)?.certificate)
}

/// How the second SNP vertex was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoSinkCase {
    /// The feed lies in a block holding two SNP witnesses.
    BlockFeed,
    /// Whole feed; iterated sedimentation of the rest reaches the strict
    /// inequality.
    Stable,
    /// Whole feed; the rest is periodic and the second vertex comes from an
    /// iterate where the last out-neighbour of the feed is bad.
    Periodic,
}

impl fmt::Display for NoSinkCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoSinkCase::BlockFeed => "block-feed",
            NoSinkCase::Stable => "stable",
            NoSinkCase::Periodic => "periodic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoSnp {
    pub first: SnpCertificate,
    pub second: SnpCertificate,
    pub case: NoSinkCase,
    /// Order of `D` whose feed started the search.
    pub order: Vec<usize>,
    /// Sedimentation rank used for the second vertex, when there was one.
    pub rank: Option<usize>,
}

/// SNP witnesses inside every block: structural ones for cycles and double
/// cycles, brute force inside `D[J]` otherwise. Each block needs two.
fn block_witnesses(g: &OrientedGraph, a: &DependencyAnalysis) -> Result<Vec<(VertexSet, Vec<usize>)>> {
    let structural = if a.components.iter().all(|c| matches!(c.shape, Shape::Cycle | Shape::DoubleCycle)) {
        structural_witnesses(g, a)?
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for b in &a.blocks {
        let w = match structural.iter().find(|(s, _)| *s == b.support) {
            Some((_, w)) => w.clone(),
            None => snp_inside(g, b.support).to_vec(),
        };
        if w.len() < 2 {
            return Err(Error::HypothesisFailed(format!("J = {} holds fewer than two SNP vertices of D[J]", b.support)));
        }
        out.push((b.support, w));
    }
    Ok(out)
}

/// Two distinct SNP vertices of a sink-free good digraph in which every
/// block holds two SNP vertices of its own induced subgraph.
pub fn find_two_snp_no_sink(g: &OrientedGraph) -> Result<TwoSnp> {
    find_two_snp_no_sink_with(g, DEFAULT_EXACT_CAP, DEFAULT_SED_BUDGET)
}

pub fn find_two_snp_no_sink_with(g: &OrientedGraph, cap: usize, budget: usize) -> Result<TwoSnp> {
    let d = g.with_unit_weights();
    if let Some(s) = d.sinks().first() {
        return Err(Error::SinkPresent(s));
    }
    let a = analyze(&d);
    if let Some(b) = a.blocks.iter().find(|b| !b.is_interval) {
        return Err(Error::NotGoodDigraph(format!("K(ξ) = {} is not an interval", b.support)));
    }
    let witnesses = block_witnesses(&d, &a)?;
    let witness_of = |j: VertexSet| -> usize {
        if j.len() == 1 {
            j.first().unwrap()
        } else {
            witnesses.iter().find(|(s, _)| *s == j).expect("every block has witnesses").1[0]
        }
    };

    let blocks = a.partition();
    let l = good_median_order_with(&d, &blocks, cap)?;
    let xn = l.feed();

    if a.block_of(xn).is_some() {
        let w = &witnesses.iter().find(|(s, _)| *s == a.j(xn)).unwrap().1;
        let first = SnpCertificate::validate(&d, w[0], Method::NoSink(NoSinkCase::BlockFeed))?;
        let second = SnpCertificate::validate(&d, w[1], Method::NoSink(NoSinkCase::BlockFeed))?;
        return Ok(TwoSnp { first, second, case: NoSinkCase::BlockFeed, order: l.seq, rank: None });
    }

    // L' = L without its whole feed, on D - x_n with the blocks of D.
    let (dm, map) = d.induced_set(d.vertices().without(xn));
    let local = |v: usize| map.iter().position(|&u| u == v).unwrap();
    let lblocks: Vec<VertexSet> = blocks.iter().filter(|b| !b.contains(xn)).map(|b| b.iter().map(local).collect()).collect();
    let lp = LinearOrder { certified: true, ..LinearOrder::new(&dm, l.seq[..l.seq.len() - 1].iter().map(|&v| local(v)).collect())? };
    let global = |s: VertexSet| -> VertexSet { s.iter().map(|v| map[v]).collect() };

    let (case, rank, y) = match sedimentation_class(&dm, &lp, &lblocks, budget)? {
        SedClass::Stable { rank, order } => {
            let j = global(block_containing(&lblocks, order.feed()));
            (NoSinkCase::Stable, rank, witness_of(j))
        }
        SedClass::Periodic { visited, .. } => {
            let out = d.out(xn);
            let xj = *l.seq.iter().rev().find(|&&v| out.contains(v)).expect("x_n is not a sink");
            let found = visited.iter().enumerate().find_map(|(q, o)| {
                let oa = classify_vertices(&dm, &o.seq).ok()?;
                let j = global(block_containing(&lblocks, oa.feed));
                (oa.bad.contains(local(xj)) && !j.contains(xj)).then_some((q, j))
            });
            let (q, j) = found.ok_or_else(|| Error::proof("periodic sedimentation", format!("{xj} is never bad outside J(feed)")))?;
            (NoSinkCase::Periodic, q, witness_of(j))
        }
    };
    let first = SnpCertificate::validate(&d, xn, Method::NoSink(case))?;
    let second = SnpCertificate::validate(&d, y, Method::NoSink(case))?;
    proof(xn != y, "distinct vertices", || format!("both certificates name {y}"))?;
    Ok(TwoSnp { first, second, case, order: l.seq, rank: Some(rank) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_tournament_on_five() {
        // Rotational tournament: i -> i+1, i+2.
        let arcs: Vec<_> = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, (i + 2) % 5)]).collect();
        let g = OrientedGraph::new(5, &arcs).unwrap();
        let r = find_two_snp_no_sink(&g).unwrap();
        assert_ne!(r.first.vertex, r.second.vertex);
        assert!(r.first.holds_in(&g) && r.second.holds_in(&g));
    }

    #[test]
    fn sink_is_rejected() {
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(find_two_snp_no_sink(&t3), Err(Error::SinkPresent(2)));
    }

    #[test]
    fn matching_cycle_paths() {
        let g = OrientedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = find_snp_paths(&g).unwrap();
        assert!(c.holds_in(&g));
        let r = find_two_snp_no_sink(&g).unwrap();
        assert_eq!(r.case, NoSinkCase::BlockFeed);
        assert_ne!(r.first.vertex, r.second.vertex);
    }

    #[test]
    fn long_missing_path_is_rejected() {
        let g = OrientedGraph::new(4, &[(0, 2), (1, 3), (3, 0)]).unwrap();
        assert!(matches!(find_snp_paths(&g), Err(Error::HypothesisFailed(_))));
    }
}
