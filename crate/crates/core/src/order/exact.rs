use std::cmp::Ordering;

use super::LinearOrder;
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::util::weight_eps;

/// Largest vertex count the exact solver accepts by default.
pub const DEFAULT_EXACT_CAP: usize = 20;

/// Exact median order by dynamic programming over prefix sets.
///
/// With `secondary = Some(x)`, ties in weight are broken towards orders that
/// place `x` as late as possible.
pub fn median_order_exact(g: &OrientedGraph, secondary: Option<usize>) -> Result<LinearOrder> {
    median_order_exact_capped(g, secondary, DEFAULT_EXACT_CAP)
}

/// `(weight, index of x)` compared lexicographically, weights up to
/// tolerance.
fn cmp_value(a: (f64, i32), b: (f64, i32)) -> Ordering {
    if (a.0 - b.0).abs() > weight_eps(a.0.abs().max(b.0.abs())) {
        a.0.partial_cmp(&b.0).unwrap()
    } else {
        a.1.cmp(&b.1)
    }
}

pub fn median_order_exact_capped(g: &OrientedGraph, secondary: Option<usize>, cap: usize) -> Result<LinearOrder> {
    let n = g.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if let Some(x) = secondary {
        if x >= n {
            return Err(Error::OutOfRange { vertex: x, n });
        }
    }
    let size = 1usize << n;
    let mut subset_w = vec![0.0f64; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        subset_w[s] = subset_w[s & (s - 1)] + g.weight(v);
    }
    let in_mask: Vec<usize> = (0..n).map(|v| g.inc(v).bits() as usize).collect();

    // value[s]: best (weight, index of x or -1) over orders of s placed first.
    let mut value = vec![(0.0f64, -1i32); size];
    let mut last = vec![0u8; size];
    for s in 1..size {
        let k = s.count_ones() as i32;
        let mut best: Option<((f64, i32), u8)> = None;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let (pw, px) = value[prev];
            let cand = (pw + g.weight(v) * subset_w[in_mask[v] & prev], if secondary == Some(v) { k - 1 } else { px });
            if best.is_none_or(|(b, _)| cmp_value(cand, b) == Ordering::Greater) {
                best = Some((cand, v as u8));
            }
        }
        let (b, v) = best.unwrap();
        value[s] = b;
        last[s] = v;
    }

    let mut seq = Vec::with_capacity(n);
    let mut s = size - 1;
    while s != 0 {
        let v = last[s] as usize;
        seq.push(v);
        s &= !(1 << v);
    }
    seq.reverse();
    Ok(LinearOrder { seq, weight: value[size - 1].0, certified: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::order_weight;

    #[test]
    fn small_examples() {
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let o = median_order_exact(&t3, None).unwrap();
        assert_eq!((o.seq.clone(), o.weight), (vec![0, 1, 2], 3.0));

        let c3 = OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let o = median_order_exact(&c3, None).unwrap();
        assert_eq!(o.weight, 2.0);
        assert_eq!(order_weight(&c3, &o.seq).unwrap(), 2.0);

        let g3 = OrientedGraph::new(4, &[(0, 2), (1, 3), (3, 0), (2, 1)]).unwrap();
        assert_eq!(median_order_exact(&g3, None).unwrap().weight, 3.0);

        let empty = OrientedGraph::new(0, &[]).unwrap();
        assert!(median_order_exact(&empty, None).unwrap().seq.is_empty());
    }

    #[test]
    fn secondary_objective_pushes_vertex_right() {
        let c3 = OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        for x in 0..3 {
            let o = median_order_exact(&c3, Some(x)).unwrap();
            assert_eq!(o.weight, 2.0);
            assert_eq!(o.feed(), x);
        }
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(median_order_exact(&t3, Some(0)).unwrap().seq, vec![0, 1, 2]);
    }

    #[test]
    fn weighted_and_capped() {
        let g = OrientedGraph::with_weight_map(3, &[(0, 1), (1, 2), (2, 0)], &[(2, 2.0)]).unwrap();
        let o = median_order_exact(&g, None).unwrap();
        // Dropping the light arc 0 -> 1 is best: 2·1 + 1·2 = 4.
        assert_eq!(o.weight, 4.0);
        assert_eq!(o.seq, vec![1, 2, 0]);
        let big = OrientedGraph::new(21, &[]).unwrap();
        assert_eq!(median_order_exact(&big, None), Err(Error::TooLarge { n: 21, cap: 20 }));
    }
}
