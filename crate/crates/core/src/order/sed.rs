use std::collections::HashMap;

use serde::Serialize;

use super::{block_containing, blocks_contiguous, classify_vertices, order_weight, LinearOrder};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::util::{weight_eps, weights_equal};
use crate::vertex_set::VertexSet;

/// Iteration cap for [`sedimentation_class`] before the `n!` bound applies.
pub const DEFAULT_SED_BUDGET: usize = 1_000_000;

/// One sedimentation step of a good median order.
///
/// `blocks` is the partition into `J` sets (whole vertices may be left out).
/// With `ω(N+(f) \ J(f)) < ω(G_L \ J(f))` the order is returned unchanged;
/// with equality the bad vertices outside `J(f)` move to the front, then
/// `J(f)`, then everything else, each group keeping its relative order.
pub fn sedimentation(g: &OrientedGraph, l: &LinearOrder, blocks: &[VertexSet]) -> Result<LinearOrder> {
    let oa = classify_vertices(g, &l.seq)?;
    let j = block_containing(blocks, oa.feed);
    let out_w = g.weight_of(g.out(oa.feed).difference(j));
    let good_w = g.weight_of(oa.good.difference(j));
    if out_w > good_w + weight_eps(good_w) {
        return Err(Error::FeedInequalityViolated { out_weight: out_w, good_weight: good_w });
    }
    if !weights_equal(out_w, good_w) {
        return Ok(l.clone());
    }
    let bad = oa.bad.difference(j);
    let mut seq: Vec<usize> = l.seq.iter().copied().filter(|&v| bad.contains(v)).collect();
    seq.extend(l.seq.iter().copied().filter(|&v| j.contains(v)));
    seq.extend(l.seq.iter().copied().filter(|&v| !bad.contains(v) && !j.contains(v)));

    let after = order_weight(g, &seq)?;
    if !weights_equal(after, l.weight) {
        return Err(Error::WeightDropped { before: l.weight, after });
    }
    if blocks_contiguous(&l.seq, blocks) && !blocks_contiguous(&seq, blocks) {
        return Err(Error::proof("sedimentation", "blocks no longer contiguous"));
    }
    Ok(LinearOrder { seq, weight: after, certified: l.certified })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "class")]
pub enum SedClass {
    /// `Sed^rank(L)` is the first iterate with the strict inequality.
    Stable { rank: usize, order: LinearOrder },
    /// No iterate has the strict inequality; `cycle` lists the repeating
    /// orders and `visited` every iterate from `L` up to the repeat.
    Periodic { cycle: Vec<LinearOrder>, visited: Vec<LinearOrder> },
}

/// Iterates [`sedimentation`] from `l` until the strict inequality appears
/// or an order repeats. The budget is `min(n!, max_iter)` steps.
pub fn sedimentation_class(g: &OrientedGraph, l: &LinearOrder, blocks: &[VertexSet], max_iter: usize) -> Result<SedClass> {
    let n = g.n();
    let budget = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX).min(max_iter);
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut visited = vec![l.clone()];
    seen.insert(l.seq.clone(), 0);
    for step in 0..=budget {
        let cur = visited.last().unwrap();
        if strict_at(g, cur, blocks)? {
            return Ok(SedClass::Stable { rank: step, order: cur.clone() });
        }
        let next = sedimentation(g, cur, blocks)?;
        if let Some(&first) = seen.get(&next.seq) {
            let cycle = visited[first..].to_vec();
            return Ok(SedClass::Periodic { cycle, visited });
        }
        seen.insert(next.seq.clone(), visited.len());
        visited.push(next);
    }
    Err(Error::IterBudgetExceeded(budget))
}

fn strict_at(g: &OrientedGraph, l: &LinearOrder, blocks: &[VertexSet]) -> Result<bool> {
    let (out_w, good_w) = super::feed_balance(g, &l.seq, blocks)?;
    Ok(!weights_equal(out_w, good_w) && out_w < good_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singletons(n: usize) -> Vec<VertexSet> {
        (0..n).map(VertexSet::singleton).collect()
    }

    #[test]
    fn three_cycle_rotates() {
        let c3 = OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let l = LinearOrder::new(&c3, vec![0, 1, 2]).unwrap();
        let s = sedimentation(&c3, &l, &singletons(3)).unwrap();
        assert_eq!(s.seq, vec![2, 0, 1]);
        assert_eq!(s.weight, 2.0);
        match sedimentation_class(&c3, &l, &singletons(3), DEFAULT_SED_BUDGET).unwrap() {
            SedClass::Periodic { cycle, .. } => {
                let seqs: Vec<_> = cycle.iter().map(|o| o.seq.clone()).collect();
                assert_eq!(seqs, vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]);
            }
            other => panic!("expected periodic, got {other:?}"),
        }
    }

    #[test]
    fn transitive_triangle_is_a_fixed_point() {
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let l = LinearOrder::new(&t3, vec![0, 1, 2]).unwrap();
        assert_eq!(sedimentation(&t3, &l, &singletons(3)).unwrap().seq, vec![0, 1, 2]);
        match sedimentation_class(&t3, &l, &singletons(3), DEFAULT_SED_BUDGET).unwrap() {
            SedClass::Periodic { cycle, .. } => assert_eq!(cycle.len(), 1),
            other => panic!("expected periodic, got {other:?}"),
        }
    }

    #[test]
    fn strict_inequality_is_stable_at_zero() {
        // Feed 2 beats only 0, while 3 and 1 are both reached through 0.
        let g = OrientedGraph::new(4, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (3, 2)]).unwrap();
        let l = LinearOrder::new(&g, vec![0, 3, 1, 2]).unwrap();
        assert_eq!(l.weight, crate::order::median_order_exact(&g, None).unwrap().weight);
        assert_eq!(crate::order::feed_balance(&g, &l.seq, &singletons(4)).unwrap(), (1.0, 2.0));
        assert_eq!(sedimentation(&g, &l, &singletons(4)).unwrap(), l);
        let class = sedimentation_class(&g, &l, &singletons(4), DEFAULT_SED_BUDGET).unwrap();
        assert!(matches!(class, SedClass::Stable { rank: 0, .. }));
    }
}
