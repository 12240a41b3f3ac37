//! Structured candidates for double cycles and Δ cycles of a matching, and
//! composite graphs built from such blocks.
//!
//! Candidates follow a template and are only accepted once the losing
//! relations are checked directly on the concrete graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::orient_except;
use crate::dependency::{analyze, losing_labellings, Shape};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::paths::{double_cycle_of, DoubleCycle};

/// Random draws tried before the exhaustive scan.
const RANDOM_TRIES: u64 = 256;
/// Largest number of template bits scanned exhaustively.
const MAX_EXHAUSTIVE_BITS: usize = 20;

fn pair_index(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
}

/// Double-cycle template on `3k` vertices `a_i = 3i`, `b_i = 3i + 1`,
/// `c_i = 3i + 2`. Bit `p` of `r_bits` says whether the `p`-th pair `i < j`
/// has triple `i` beating triple `j`: ends of `i` beat ends of `j`, `b_i`
/// beats `b_j`, ends of `j` beat `b_i` and `b_j` beats the ends of `i`. Bit
/// `i` of `ac_bits` orients `a_i -> c_i`.
pub fn double_cycle_candidate(k: usize, r_bits: u64, ac_bits: u64) -> OrientedGraph {
    let (a, b, c) = (|i: usize| 3 * i, |i: usize| 3 * i + 1, |i: usize| 3 * i + 2);
    let mut arcs = Vec::new();
    for i in 0..k {
        arcs.push(if ac_bits >> i & 1 == 1 { (a(i), c(i)) } else { (c(i), a(i)) });
    }
    for (p, (i, j)) in pair_index(k).into_iter().enumerate() {
        let (s, t) = if r_bits >> p & 1 == 1 { (i, j) } else { (j, i) };
        arcs.extend([(a(s), a(t)), (a(s), c(t)), (c(s), a(t)), (c(s), c(t)), (b(s), b(t))]);
        arcs.extend([(a(t), b(s)), (c(t), b(s)), (b(t), a(s)), (b(t), c(s))]);
    }
    OrientedGraph::new(3 * k, &arcs).expect("template arcs are consistent")
}

/// Whether Δ of `g` is a single double cycle through all `k` triples, with
/// each of its `4k` relations confirmed by the losing definition.
pub fn certify_double_cycle(g: &OrientedGraph, k: usize) -> Option<DoubleCycle> {
    let a = analyze(g);
    if a.components.len() != 1 || a.components[0].shape != Shape::DoubleCycle {
        return None;
    }
    let dc = double_cycle_of(g, &a.delta, &a.components[0].nodes)?;
    if dc.k() != k {
        return None;
    }
    for t in 0..k {
        let (s, u) = (t, dc.next(t));
        for e1 in [(dc.a(s), dc.b(s)), (dc.b(s), dc.c(s))] {
            for e2 in [(dc.a(u), dc.b(u)), (dc.b(u), dc.c(u))] {
                if losing_labellings(g, e1, e2).is_empty() {
                    return None;
                }
            }
        }
    }
    Some(dc)
}

/// Outcome of scanning every double-cycle template for one `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub k: usize,
    pub candidates: u64,
    pub certified: u64,
}

/// Exhaustive scan of the `2^(k(k-1)/2 + k)` templates.
pub fn double_cycle_census(k: usize) -> Result<Census> {
    let bits = k * (k - 1) / 2 + k;
    if k < 2 || bits > MAX_EXHAUSTIVE_BITS {
        return Err(Error::TooLarge { n: k, cap: 5 });
    }
    let pb = k * (k - 1) / 2;
    let mut certified = 0;
    for code in 0u64..1 << bits {
        let g = double_cycle_candidate(k, code & ((1 << pb) - 1), code >> pb);
        if certify_double_cycle(&g, k).is_some() {
            certified += 1;
        }
    }
    Ok(Census { k, candidates: 1 << bits, certified })
}

/// A certified double cycle on `3k` vertices: random templates first, then
/// an exhaustive scan starting at a seed-dependent offset. Labels are
/// shuffled. Fails with [`Error::NotFound`] when no template works.
pub fn random_double_cycle_instance(k: usize, seed: u64) -> Result<OrientedGraph> {
    if k < 2 {
        return Err(Error::Infeasible(format!("a double cycle needs k >= 2, got {k}")));
    }
    let pb = k * (k - 1) / 2;
    let bits = pb + k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = |b: usize| if b >= 64 { u64::MAX } else { (1u64 << b) - 1 };
    let try_code = |r: u64, ac: u64| {
        let g = double_cycle_candidate(k, r, ac);
        certify_double_cycle(&g, k).map(|_| g)
    };
    let mut found = None;
    for _ in 0..RANDOM_TRIES {
        if let Some(g) = try_code(rng.gen::<u64>() & mask(pb), rng.gen::<u64>() & mask(k)) {
            found = Some(g);
            break;
        }
    }
    if found.is_none() && bits <= MAX_EXHAUSTIVE_BITS {
        let total = 1u64 << bits;
        let offset = rng.gen::<u64>() % total;
        found = (0..total).map(|i| (i + offset) % total).find_map(|code| try_code(code & mask(pb), code >> pb));
    }
    let g = found.ok_or(Error::NotFound(k))?;
    let mut perm: Vec<usize> = (0..3 * k).collect();
    perm.shuffle(&mut rng);
    g.relabeled(&perm)
}

/// Template for a Δ cycle of `k` missing edges `a_i b_i = (2i, 2i + 1)`.
/// Each pair of edges spans a 4-cycle: `a_i -> a_j -> b_i -> b_j -> a_i`
/// when bit `p` of `bits` is set for the `p`-th pair `i < j`, and
/// `a_i -> b_j -> b_i -> a_j -> a_i` otherwise.
pub fn matching_cycle_candidate(k: usize, bits: u64) -> OrientedGraph {
    let mut arcs = Vec::new();
    for (p, (i, j)) in pair_index(k).into_iter().enumerate() {
        let (ai, bi) = (2 * i, 2 * i + 1);
        let (x, y) = if bits >> p & 1 == 1 { (2 * j, 2 * j + 1) } else { (2 * j + 1, 2 * j) };
        arcs.extend([(ai, x), (x, bi), (bi, y), (y, ai)]);
    }
    OrientedGraph::new(2 * k, &arcs).expect("template arcs are consistent")
}

fn is_matching_cycle(g: &OrientedGraph, k: usize) -> bool {
    let a = analyze(g);
    a.components.len() == 1 && a.components[0].shape == Shape::Cycle && a.components[0].nodes.len() == k
}

/// A graph on `2k` vertices missing a perfect matching whose Δ is one
/// directed cycle. Labels are shuffled.
pub fn random_matching_cycle_instance(k: usize, seed: u64) -> Result<OrientedGraph> {
    if k < 2 {
        return Err(Error::Infeasible(format!("a Δ cycle needs k >= 2 edges, got {k}")));
    }
    let pb = k * (k - 1) / 2;
    let mask = if pb >= 64 { u64::MAX } else { (1u64 << pb) - 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = None;
    for _ in 0..RANDOM_TRIES {
        let g = matching_cycle_candidate(k, rng.gen::<u64>() & mask);
        if is_matching_cycle(&g, k) {
            found = Some(g);
            break;
        }
    }
    if found.is_none() && pb <= MAX_EXHAUSTIVE_BITS {
        let total = 1u64 << pb;
        let offset = rng.gen::<u64>() % total;
        found = (0..total)
            .map(|i| matching_cycle_candidate(k, (i + offset) % total))
            .find(|g| is_matching_cycle(g, k));
    }
    let g = found.ok_or(Error::NotFound(k))?;
    let mut perm: Vec<usize> = (0..2 * k).collect();
    perm.shuffle(&mut rng);
    g.relabeled(&perm)
}

/// A block substituted into a composite graph.
#[derive(Clone, Debug, PartialEq)]
pub enum Module {
    DoubleCycle(usize),
    MatchingCycle(usize),
    Graph(OrientedGraph),
}

/// Substitutes each module as an interval into a random graph `H` with
/// `whole` whole vertices and `matching` extra missing edges. Modules face
/// each other and every vertex of `H` uniformly, so no losing relation
/// crosses a module boundary and the modules keep their Δ structure.
pub fn composite_instance(modules: &[Module], whole: usize, matching: usize, seed: u64) -> Result<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    for (i, m) in modules.iter().enumerate() {
        let sub = seed.wrapping_mul(0x9e37_79b9).wrapping_add(i as u64);
        blocks.push(match m {
            Module::DoubleCycle(k) => random_double_cycle_instance(*k, sub)?,
            Module::MatchingCycle(k) => random_matching_cycle_instance(*k, sub)?,
            Module::Graph(g) => g.clone(),
        });
    }
    let h_n = whole + 2 * matching;
    let n = blocks.iter().map(|b| b.n()).sum::<usize>() + h_n;
    if n > crate::vertex_set::MAX_VERTICES {
        return Err(Error::TooManyVertices { n, max: crate::vertex_set::MAX_VERTICES });
    }
    let h_missing: Vec<(usize, usize)> = (0..matching).map(|i| (2 * i, 2 * i + 1)).collect();
    let h = orient_except(h_n, &h_missing, &mut rng)?;

    // Quotient nodes: modules first, then the vertices of H.
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for b in &blocks {
        members.push((next..next + b.n()).collect());
        next += b.n();
    }
    let h_offset = next;
    let q = blocks.len() + h_n;
    let mut arcs = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        let base = members[bi][0];
        arcs.extend(b.arcs().into_iter().map(|(u, v)| (base + u, base + v)));
    }
    arcs.extend(h.arcs().into_iter().map(|(u, v)| (h_offset + u, h_offset + v)));
    let node = |i: usize| -> Vec<usize> { if i < blocks.len() { members[i].clone() } else { vec![h_offset + i - blocks.len()] } };
    for i in 0..q {
        for j in i + 1..q {
            if i >= blocks.len() && j >= blocks.len() {
                continue;
            }
            let forward = rng.gen::<bool>();
            for &u in &node(i) {
                for &v in &node(j) {
                    arcs.push(if forward { (u, v) } else { (v, u) });
                }
            }
        }
    }
    let g = OrientedGraph::new(n, &arcs)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    g.relabeled(&perm)
}
