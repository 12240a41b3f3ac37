use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LinearOrder;
use crate::graph::OrientedGraph;
use crate::util::weight_eps;

/// Local search from a seeded random order: repeatedly move a single vertex
/// to the position that raises the forward weight most, until no move
/// helps. The result is never marked certified.
pub fn median_order_heuristic(g: &OrientedGraph, seed: u64) -> LinearOrder {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(&mut rng);

    // Signed contribution of placing u before v.
    let pair = |u: usize, v: usize| -> f64 {
        let w = g.weight(u) * g.weight(v);
        if g.has_arc(u, v) {
            w
        } else if g.has_arc(v, u) {
            -w
        } else {
            0.0
        }
    };

    loop {
        let mut improved = false;
        for i in 0..n {
            let v = seq.remove(i);
            // gain[p]: weight change of inserting v at p relative to p = 0.
            let mut best = (0.0, 0usize);
            let mut gain = 0.0;
            for (p, &u) in seq.iter().enumerate() {
                gain += pair(u, v) - pair(v, u);
                if gain > best.0 + weight_eps(gain) {
                    best = (gain, p + 1);
                }
            }
            let mut here = 0.0;
            for &u in &seq[..i] {
                here += pair(u, v) - pair(v, u);
            }
            let target = if best.0 > here + weight_eps(here) { best.1 } else { i };
            seq.insert(target, v);
            improved |= target != i;
        }
        if !improved {
            break;
        }
    }
    let weight = super::order_weight(g, &seq).expect("heuristic keeps a permutation");
    LinearOrder { seq, weight, certified: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reaches_small_optima() {
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let c3 = OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let g3 = OrientedGraph::new(4, &[(0, 2), (1, 3), (3, 0), (2, 1)]).unwrap();
        for seed in 0..20 {
            assert_eq!(median_order_heuristic(&t3, seed).weight, 3.0);
            assert_eq!(median_order_heuristic(&c3, seed).weight, 2.0);
            let o = median_order_heuristic(&g3, seed);
            assert_eq!(o.weight, 3.0);
            assert!(!o.certified);
        }
    }
}
