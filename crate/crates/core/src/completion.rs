//! Good completions and SNP extraction from them.
//!
//! Every block `J` is expected to be either the support of a single Δ
//! component that is a directed path (clause *path*), or an interval of the
//! graph that contains a vertex with the SNP inside `D[J]` (clause
//! *interval*). Path blocks are oriented track by track; interval blocks are
//! left alone. A good median order of the completion then yields a vertex
//! with the SNP in the original graph, and every step of the argument is
//! re-checked on the concrete instance.

use std::fmt;

use serde::Serialize;

use crate::certificate::{Method, SnpCertificate};
use crate::dependency::{analyze, as_directed_path, convenient_orientation, DependencyAnalysis, Shape};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::order::{classify_vertices, good_median_order_with, median_order_exact_capped, order_weight, DEFAULT_EXACT_CAP};
use crate::util::weights_equal;
use crate::vertex_set::VertexSet;

/// Finds a vertex of `set` with the SNP in `D[set]`.
pub type SnpOracle<'a> = &'a dyn Fn(&OrientedGraph, VertexSet) -> Option<usize>;

/// Smallest vertex of `set` with the SNP in the induced subgraph.
pub fn brute_force_oracle(g: &OrientedGraph, set: VertexSet) -> Option<usize> {
    let (h, map) = g.induced_set(set);
    h.snp_vertices().first().map(|i| map[i])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    Path,
    Interval,
}

/// How one block satisfies the hypothesis, or why it does not.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockEvidence {
    pub support: VertexSet,
    pub clause: Option<Clause>,
    /// Δ nodes of the path in order, for the path clause.
    pub path: Option<Vec<usize>>,
    /// Vertex with the SNP in `D[support]`, for the interval clause.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub blocks: Vec<BlockEvidence>,
}

impl HypothesisReport {
    pub fn first_failure(&self) -> Option<&BlockEvidence> {
        self.blocks.iter().find(|b| b.clause.is_none())
    }

    pub fn evidence_for(&self, support: VertexSet) -> Option<&BlockEvidence> {
        self.blocks.iter().find(|b| b.support == support)
    }
}

/// Checks each block of `analysis`; whole vertices satisfy the hypothesis
/// trivially and are not listed. The path clause is preferred when both
/// apply.
pub fn check_hypothesis(g: &OrientedGraph, analysis: &DependencyAnalysis, oracle: SnpOracle) -> HypothesisReport {
    let blocks: Vec<BlockEvidence> = (0..analysis.blocks.len())
        .map(|bi| {
            let support = analysis.blocks[bi].support;
            if let Some(c) = analysis.single_component(bi) {
                if c.shape == Shape::Path {
                    let path = as_directed_path(&analysis.delta, &c.nodes);
                    return BlockEvidence { support, clause: Some(Clause::Path), path, witness: None };
                }
            }
            if analysis.blocks[bi].is_interval {
                if let Some(p) = oracle(g, support) {
                    return BlockEvidence { support, clause: Some(Clause::Interval), path: None, witness: Some(p) };
                }
            }
            BlockEvidence { support, clause: None, path: None, witness: None }
        })
        .collect();
    HypothesisReport { holds: blocks.iter().all(|b| b.clause.is_some()), blocks }
}

/// Which path edges receive an arc.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationRange {
    /// `a_i -> b_i` for every edge of the path. Path vertices become whole.
    #[default]
    All,
    /// Every edge but the last one.
    ExceptLast,
}

/// A Δ path `a_1 b_1, .., a_k b_k` labelled so that `a_i -> a_{i+1}`,
/// `b_i -> b_{i+1}` and `(a_1, b_1)` is a convenient orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelledPath {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl LabelledPath {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn support(&self) -> VertexSet {
        self.a.iter().chain(&self.b).collect()
    }
}

/// Labels a Δ path starting from the convenient orientation of its source.
pub fn label_path(g: &OrientedGraph, analysis: &DependencyAnalysis, path: &[usize]) -> Result<LabelledPath> {
    let delta = &analysis.delta;
    let first = path[0];
    if !delta.good[first] {
        let (u, v) = delta.nodes[first];
        return Err(Error::NotGood(u, v));
    }
    let (a1, b1) = convenient_orientation(g, delta.nodes[first])?;
    let mut lp = LabelledPath { a: vec![a1], b: vec![b1] };
    for w in path.windows(2) {
        let [x, y, a, b] = delta
            .labelling(w[0], w[1])
            .ok_or_else(|| Error::proof("label path", format!("no Δ arc {} -> {}", w[0], w[1])))?;
        let cur = *lp.a.last().unwrap();
        let (na, nb) = if cur == x {
            (a, b)
        } else if cur == y {
            (b, a)
        } else {
            return Err(Error::proof("label path", format!("{cur} is not on edge {{{x},{y}}}")));
        };
        lp.a.push(na);
        lp.b.push(nb);
    }
    Ok(lp)
}

/// An added arc with the path and position that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionArc {
    pub arc: (usize, usize),
    pub path: usize,
    /// 1-based position `i` of `a_i b_i` on the path.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Completion {
    #[serde(skip)]
    pub base: OrientedGraph,
    #[serde(skip)]
    pub completed: OrientedGraph,
    pub added: Vec<CompletionArc>,
    pub paths: Vec<LabelledPath>,
    pub evidence: HypothesisReport,
    pub range: OrientationRange,
}

impl Completion {
    pub fn added_arcs(&self) -> Vec<(usize, usize)> {
        self.added.iter().map(|a| a.arc).collect()
    }

    /// Vertices incident to an added arc.
    pub fn touched(&self) -> VertexSet {
        self.added.iter().flat_map(|a| [a.arc.0, a.arc.1]).collect()
    }
}

pub fn good_completion(g: &OrientedGraph) -> Result<Completion> {
    good_completion_with(g, &brute_force_oracle, OrientationRange::All)
}

/// Builds `D' = D + F` on the unit-weighted graph.
pub fn good_completion_with(g: &OrientedGraph, oracle: SnpOracle, range: OrientationRange) -> Result<Completion> {
    let g = g.with_unit_weights();
    let analysis = analyze(&g);
    let evidence = check_hypothesis(&g, &analysis, oracle);
    if let Some(b) = evidence.first_failure() {
        return Err(Error::HypothesisFailed(format!("J = {} is neither a Δ path nor an interval with an SNP vertex", b.support)));
    }
    let mut paths = Vec::new();
    let mut added = Vec::new();
    for b in &evidence.blocks {
        let Some(path) = &b.path else { continue };
        let lp = label_path(&g, &analysis, path)?;
        let upto = match range {
            OrientationRange::All => lp.len(),
            OrientationRange::ExceptLast => lp.len() - 1,
        };
        for i in 0..upto {
            added.push(CompletionArc { arc: (lp.a[i], lp.b[i]), path: paths.len(), position: i + 1 });
        }
        paths.push(lp);
    }
    let completed = g.with_arcs(&added.iter().map(|a| a.arc).collect::<Vec<_>>())?;
    let ca = analyze(&completed);
    if let Some(b) = ca.blocks.iter().find(|b| !b.is_interval) {
        return Err(Error::NotGoodAfterCompletion(format!("K(ξ) = {} is not an interval", b.support)));
    }
    Ok(Completion { base: g, completed, added, paths, evidence, range })
}

/// Where the feed of the completion landed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionCase {
    /// The feed touches no added arc; the answer comes from its block.
    Untouched,
    /// Feed `a_t` with `t < k`.
    SourceTrack,
    /// Feed `a_k`, handled through the reversed last arc.
    SourceEnd,
    /// Feed `b_t`.
    TargetTrack,
}

impl fmt::Display for CompletionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompletionCase::Untouched => "untouched",
            CompletionCase::SourceTrack => "source-track",
            CompletionCase::SourceEnd => "source-end",
            CompletionCase::TargetTrack => "target-track",
        })
    }
}

/// Full trace of [`snp_from_completion`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletionOutcome {
    pub order: Vec<usize>,
    pub feed: usize,
    pub case: CompletionCase,
    pub certificate: SnpCertificate,
}

fn require(cond: bool, step: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::proof(step, detail()))
    }
}

pub fn snp_from_completion(g: &OrientedGraph, c: &Completion) -> Result<SnpCertificate> {
    Ok(trace_completion(g, c, false)?.certificate)
}

/// Runs the case analysis on a good median order of the completion.
/// `paths_method` only changes the method tag on the certificate.
pub fn trace_completion(g: &OrientedGraph, c: &Completion, paths_method: bool) -> Result<CompletionOutcome> {
    let d = g.with_unit_weights();
    let dp = &c.completed;
    let ca = analyze(dp);
    let blocks = ca.partition();
    let l = good_median_order_with(dp, &blocks, DEFAULT_EXACT_CAP)?;
    let f = l.feed();
    let oa = classify_vertices(dp, &l.seq)?;
    let jf = ca.j(f);

    let out_w = dp.out(f).difference(jf).len();
    let good_w = oa.good.difference(jf).len();
    if out_w > good_w {
        return Err(Error::FeedInequalityViolated { out_weight: out_w as f64, good_weight: good_w as f64 });
    }

    let on_path = c.paths.iter().find(|p| p.support().contains(f));
    let (case, p) = match on_path {
        None => {
            let p = if jf.len() == 1 {
                f
            } else {
                c.evidence
                    .evidence_for(jf)
                    .and_then(|e| e.witness)
                    .ok_or_else(|| Error::proof("untouched feed", format!("no interval witness for J = {jf}")))?
            };
            require(d.out(p) == dp.out(p), "untouched feed", || format!("N+({p}) changed by the completion"))?;
            let lost = dp.second_out(p).difference(jf).difference(d.second_out(p));
            require(lost.is_empty(), "untouched feed", || format!("N'++({p}) \\ J has {lost} outside N++({p})"))?;
            (CompletionCase::Untouched, p)
        }
        Some(lp) => {
            let k = lp.len();
            if let Some(t) = lp.a.iter().position(|&v| v == f) {
                if t + 1 < k {
                    let bn = lp.b[t + 1];
                    require(d.out(f).len() + 1 == dp.out(f).len(), "source track", || format!("|N+({f})| does not drop by one"))?;
                    require(dp.second_out(f).contains(bn), "source track", || format!("b_(t+1) = {bn} not in N'++({f})"))?;
                    let extra = dp.second_out(f).without(bn).difference(d.second_out(f));
                    require(extra.is_empty(), "source track", || format!("N'++({f}) \\ {{{bn}}} has {extra} outside N++"))?;
                    require(dp.out(f).len() <= dp.second_out(f).len(), "source track", || format!("{f} lacks the SNP in D'"))?;
                    (CompletionCase::SourceTrack, f)
                } else {
                    let bk = lp.b[t];
                    let dpp = if dp.has_arc(f, bk) { dp.with_reversed(f, bk)? } else { dp.with_arc(bk, f)? };
                    let w = order_weight(&dpp, &l.seq)?;
                    let opt = median_order_exact_capped(&dpp, None, DEFAULT_EXACT_CAP)?.weight;
                    require(weights_equal(w, opt), "source end", || format!("order weight {w} is below the optimum {opt} of D''"))?;
                    require(dpp.out(f) == d.out(f), "source end", || format!("N''+({f}) differs from N+({f})"))?;
                    require(dpp.out(f).len() <= dpp.second_out(f).len(), "source end", || format!("{f} lacks the SNP in D''"))?;
                    let extra = dpp.second_out(f).difference(d.second_out(f));
                    require(extra.is_empty(), "source end", || format!("N''++({f}) has {extra} outside N++"))?;
                    (CompletionCase::SourceEnd, f)
                }
            } else {
                require(dp.out(f) == d.out(f), "target track", || format!("N'+({f}) differs from N+({f})"))?;
                require(dp.out(f).len() <= dp.second_out(f).len(), "target track", || format!("{f} lacks the SNP in D'"))?;
                let extra = dp.second_out(f).difference(d.second_out(f));
                require(extra.is_empty(), "target track", || format!("N'++({f}) has {extra} outside N++"))?;
                (CompletionCase::TargetTrack, f)
            }
        }
    };
    let method = if paths_method { Method::Paths(case) } else { Method::Completion(case) };
    let certificate = SnpCertificate::validate(&d, p, method)?;
    Ok(CompletionOutcome { order: l.seq, feed: f, case, certificate })
}
