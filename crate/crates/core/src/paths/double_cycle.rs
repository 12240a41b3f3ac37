//! Double cycles of the dependency digraph and their structure.
//!
//! A double cycle is a cyclic sequence of disjoint missing paths
//! `a_i b_i c_i` where `a_i b_i c_i -> a_{i+1} b_{i+1} c_{i+1}`: each of
//! `a_i b_i` and `b_i c_i` loses to each of `a_{i+1} b_{i+1}` and
//! `b_{i+1} c_{i+1}`. Triples are indexed from 0 and subscripts wrap modulo
//! `k`, so the triple before 0 is `k - 1`.
//!
//! The structure checks work inside `H = D[K(C)]`.

use serde::Serialize;

use crate::certificate::{Method, SnpCertificate};
use crate::dependency::{DependencyAnalysis, DependencyDigraph, Shape};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::order::median_order_exact;
use crate::vertex_set::VertexSet;

/// `i` modulo `k` for possibly negative `i`.
pub fn wrap(i: isize, k: usize) -> usize {
    i.rem_euclid(k as isize) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCycle {
    /// `[a_i, b_i, c_i]` in cycle order; `b_i` is the center.
    pub triples: Vec<[usize; 3]>,
    /// `witnesses[i]` holds the labellings `[x, y, a, b]` of
    /// `ab -> ab`, `ab -> bc`, `bc -> ab`, `bc -> bc` from triple `i` to `i + 1`.
    pub witnesses: Vec<[[usize; 4]; 4]>,
}

impl DoubleCycle {
    pub fn k(&self) -> usize {
        self.triples.len()
    }

    pub fn a(&self, i: usize) -> usize {
        self.triples[i % self.k()][0]
    }

    pub fn b(&self, i: usize) -> usize {
        self.triples[i % self.k()][1]
    }

    pub fn c(&self, i: usize) -> usize {
        self.triples[i % self.k()][2]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.k()
    }

    pub fn support(&self) -> VertexSet {
        self.triples.iter().flatten().copied().collect()
    }

    pub fn a_set(&self) -> VertexSet {
        self.triples.iter().map(|t| t[0]).collect()
    }

    pub fn b_set(&self) -> VertexSet {
        self.triples.iter().map(|t| t[1]).collect()
    }

    /// The same cycle relabelled through `map[old] = new`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> DoubleCycle {
        DoubleCycle {
            triples: self.triples.iter().map(|t| t.map(&map)).collect(),
            witnesses: self.witnesses.iter().map(|w| w.map(|l| l.map(&map))).collect(),
        }
    }

    /// `D[K(C)]` and the cycle in its labels.
    pub fn local(&self, g: &OrientedGraph) -> (OrientedGraph, DoubleCycle) {
        let (h, map) = g.induced_set(self.support());
        let local = self.relabel(|v| map.iter().position(|&u| u == v).unwrap());
        (h, local)
    }
}

/// Recognises the Δ component `nodes` as a double cycle.
///
/// The nodes must be `2k` missing edges forming `k >= 2` missing paths of
/// length 2 whose vertices touch no other missing edge, and the Δ arcs
/// among them must be exactly the `4k` relations of a cyclic order of the
/// triples. `a_i` is the smaller end of each path; the definition is
/// symmetric in `a_i` and `c_i`, so the tracks never force the other choice.
/// The cycle starts at the triple holding the smallest vertex.
pub fn double_cycle_of(g: &OrientedGraph, delta: &DependencyDigraph, nodes: &[usize]) -> Option<DoubleCycle> {
    if nodes.len() < 4 || nodes.len() % 2 == 1 {
        return None;
    }
    let mg = g.missing_graph();
    let edges: Vec<(usize, usize)> = nodes.iter().map(|&i| delta.nodes[i]).collect();
    let degree = |v: usize| edges.iter().filter(|&&(p, q)| p == v || q == v).count();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for v in edges.iter().flat_map(|&(p, q)| [p, q]).collect::<VertexSet>() {
        match degree(v) {
            1 => {}
            2 => {
                let ends: Vec<usize> =
                    edges.iter().filter(|&&(p, q)| p == v || q == v).map(|&(p, q)| if p == v { q } else { p }).collect();
                let (a, c) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
                triples.push([a, v, c]);
            }
            _ => return None,
        }
    }
    let k = triples.len();
    if k * 2 != edges.len() || k < 2 {
        return None;
    }
    for &[a, b, c] in &triples {
        if degree(a) != 1 || degree(c) != 1 || !g.adjacent(a, c) {
            return None;
        }
        if mg.degree(a) != 1 || mg.degree(b) != 2 || mg.degree(c) != 1 {
            return None;
        }
    }

    let node = |u: usize, v: usize| delta.index_of(u, v).unwrap();
    let pairs = |t: &[usize; 3]| [node(t[0], t[1]), node(t[1], t[2])];
    let beats = |s: usize, t: usize| -> Option<[[usize; 4]; 4]> {
        let (ps, pt) = (pairs(&triples[s]), pairs(&triples[t]));
        let mut out = [[0; 4]; 4];
        for (slot, (&i, &j)) in [(&ps[0], &pt[0]), (&ps[0], &pt[1]), (&ps[1], &pt[0]), (&ps[1], &pt[1])].into_iter().enumerate() {
            out[slot] = delta.labelling(i, j)?;
        }
        Some(out)
    };
    let arcs_inside = nodes.iter().map(|&i| delta.out_neighbors(i).iter().filter(|j| nodes.contains(j)).count()).sum::<usize>();
    if arcs_inside != 4 * k {
        return None;
    }

    let start = (0..k).min_by_key(|&t| triples[t].iter().min().copied()).unwrap();
    let mut order = vec![start];
    let mut witnesses = Vec::new();
    loop {
        let s = *order.last().unwrap();
        let succ: Vec<usize> = (0..k).filter(|&t| t != s && beats(s, t).is_some()).collect();
        if succ.len() != 1 {
            return None;
        }
        witnesses.push(beats(s, succ[0]).unwrap());
        if succ[0] == start {
            break;
        }
        if order.contains(&succ[0]) {
            return None;
        }
        order.push(succ[0]);
    }
    if order.len() != k {
        return None;
    }
    Some(DoubleCycle { triples: order.iter().map(|&t| triples[t]).collect(), witnesses })
}

/// Every Δ component tagged as a double cycle.
pub fn find_double_cycles(g: &OrientedGraph, analysis: &DependencyAnalysis) -> Vec<DoubleCycle> {
    analysis
        .components
        .iter()
        .filter(|c| c.shape == Shape::DoubleCycle)
        .filter_map(|c| double_cycle_of(g, &analysis.delta, &c.nodes))
        .collect()
}

fn check(cond: bool, step: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::proof(step, detail()))
    }
}

fn count(identity: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::CountingMismatch { identity: identity.to_string(), expected, found })
    }
}

/// The relation table between two triples and the reversed behaviour of
/// centers and ends, on `h = D[K(C)]` with `dc` in its labels.
///
/// For `j != i` and `{x_j, y_j}`, `{x_i, y_i}` each one of the two missing
/// edges of their triple: `x_j -> x_i` iff `y_i -> x_j`, and
/// `x_j -> y_i` iff `x_i -> x_j`. Swapping labels within a pair yields the
/// remaining two statements. For `t != i`, either `a_i, c_i` are beaten by
/// `a_t, c_t` and beat `b_t` while `b_i` does the opposite, or everything is
/// reversed.
pub fn check_relation_table(h: &OrientedGraph, dc: &DoubleCycle) -> Result<()> {
    let k = dc.k();
    for j in 0..k {
        for i in (0..k).filter(|&i| i != j) {
            let pj = [(dc.a(j), dc.b(j)), (dc.b(j), dc.c(j))];
            let pi = [(dc.a(i), dc.b(i)), (dc.b(i), dc.c(i))];
            for &(xj, yj) in &pj {
                for &(xi, yi) in &pi {
                    for (u, (x, y)) in [(xj, (xi, yi)), (yj, (xi, yi)), (xj, (yi, xi)), (yj, (yi, xi))] {
                        check(h.has_arc(u, x) == h.has_arc(y, u), "relation table", || {
                            format!("{u} -> {x} and {y} -> {u} disagree (triples {j}, {i})")
                        })?;
                    }
                }
            }
        }
    }
    for t in 0..k {
        let (at, bt, ct) = (dc.a(t), dc.b(t), dc.c(t));
        let up = h.out(at).union(h.out(ct)).union(h.inc(bt));
        let up_all = h.out(at).intersection(h.out(ct)).intersection(h.inc(bt));
        let down = h.inc(at).union(h.inc(ct)).union(h.out(bt));
        let down_all = h.inc(at).intersection(h.inc(ct)).intersection(h.out(bt));
        for i in (0..k).filter(|&i| i != t) {
            let (ai, bi, ci) = (dc.a(i), dc.b(i), dc.c(i));
            let first = [up.contains(ai), up.contains(ci), up_all.contains(ai) && up_all.contains(ci), down.contains(bi), down_all.contains(bi)];
            let second = [down.contains(ai), down.contains(ci), down_all.contains(ai) && down_all.contains(ci), up.contains(bi), up_all.contains(bi)];
            check(first.iter().all(|&s| s == first[0]) && second.iter().all(|&s| s == second[0]), "center/end behaviour", || {
                format!("statements for triple {i} relative to triple {t} are not equivalent")
            })?;
        }
    }
    Ok(())
}

/// `a_i` and `c_i` are twins: equal out- and in-neighbourhoods apart from
/// each other, and equal second out- and in-neighbourhoods.
pub fn check_twins(h: &OrientedGraph, dc: &DoubleCycle) -> Result<()> {
    for i in 0..dc.k() {
        let (a, c) = (dc.a(i), dc.c(i));
        check(h.out(a).without(c) == h.out(c).without(a), "twins", || format!("N+ of {a} and {c} differ"))?;
        check(h.inc(a).without(c) == h.inc(c).without(a), "twins", || format!("N- of {a} and {c} differ"))?;
        check(h.second_out(a) == h.second_out(c), "twin second neighbourhoods", || format!("N++ of {a} and {c} differ"))?;
        check(h.second_in(a) == h.second_in(c), "twin second neighbourhoods", || format!("N-- of {a} and {c} differ"))?;
    }
    Ok(())
}

/// The second out-neighbourhoods inside `K(C)`:
///
/// * `a_t^{++} = (a_t^- ∪ {b_t}) \ {a_{t+1}, b_{t+1}, c_{t+1}, c_t}`,
/// * `c_t^{++} = (c_t^- ∪ {b_t}) \ {a_{t+1}, b_{t+1}, c_{t+1}, a_t}`,
/// * `b_t^{++} = (b_t^- ∪ {a_t, c_t}) \ {a_{t+1}, b_{t+1}, c_{t+1}}`,
///
/// and the sizes they imply.
pub fn check_second_neighbourhoods(h: &OrientedGraph, dc: &DoubleCycle) -> Result<()> {
    for t in 0..dc.k() {
        let (a, b, c) = (dc.a(t), dc.b(t), dc.c(t));
        let n = dc.next(t);
        let next: VertexSet = [dc.a(n), dc.b(n), dc.c(n)].into_iter().collect();
        let fa = h.inc(a).with(b).difference(next).without(c);
        let fc = h.inc(c).with(b).difference(next).without(a);
        let fb = h.inc(b).with(a).with(c).difference(next);
        check(h.second_out(a) == fa, "second neighbourhood of a", || format!("{} != {fa}", h.second_out(a)))?;
        check(h.second_out(c) == fc, "second neighbourhood of c", || format!("{} != {fc}", h.second_out(c)))?;
        check(h.second_out(b) == fb, "second neighbourhood of b", || format!("{} != {fb}", h.second_out(b)))?;

        let bn = dc.b(n);
        if !h.has_arc(c, a) {
            let want = if h.has_arc(bn, a) { h.in_degree(a) } else { h.in_degree(a) - 1 };
            count("|a_t++| from |a_t-|", want, h.second_out(a).len())?;
        }
        if !h.has_arc(a, c) {
            let want = if h.has_arc(bn, c) { h.in_degree(c) } else { h.in_degree(c) - 1 };
            count("|c_t++| from |c_t-|", want, h.second_out(c).len())?;
        }
        let want = h.in_degree(b) + usize::from(h.has_arc(bn, b));
        count("|b_t++| from |b_t-|", want, h.second_out(b).len())?;
    }
    Ok(())
}

/// Values behind the end-vertex finder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndReport {
    pub s: usize,
    /// `c_s` when `a_s -> c_s`, else `a_s`.
    pub vertex: usize,
    /// Out-neighbours of the vertex in `D[A_v]`, `A_v = A - a_s + v`.
    pub m1: usize,
    /// Second out-neighbours of the vertex inside `D[K(C)]` that lie in `A_v`.
    pub m2: usize,
    /// Second out-neighbours of the vertex inside `D[A_v]` alone. At most
    /// `m2`, and strictly smaller on some instances, where the identities
    /// with this value in place of `m2` fail.
    pub m2_tournament: usize,
    /// `a_{s+1}` is an out-neighbour of the returned vertex.
    pub next_is_out: bool,
    pub certificate: SnpCertificate,
}

/// SNP vertex among `{a_s, c_s}` inside `D[K(C)]`, where `a_s` is the feed
/// of a median order of the tournament on `{a_i}`. Checks
/// `|v^+| = 2m1 + m2` and `|v^{++}| = 2m2 + m1`, both plus one when
/// `a_{s+1}` is not an out-neighbour. `m2` counts second out-neighbours in
/// `A_v` taken in `D[K(C)]`, not in the tournament `D[A_v]`. Vertices are in `g`'s labels.
pub fn snp_in_double_cycle_end(g: &OrientedGraph, dc: &DoubleCycle) -> Result<EndReport> {
    let (h, l) = dc.local(g);
    let (ha, amap) = h.induced_set(l.a_set());
    let fi = median_order_exact(&ha, None)?.feed();
    check(ha.out(fi).len() <= ha.second_out(fi).len(), "tournament feed", || "feed of D[A] lacks the SNP".into())?;
    let s = (0..l.k()).find(|&i| l.a(i) == amap[fi]).unwrap();
    let v = if h.has_arc(l.a(s), l.c(s)) { l.c(s) } else { l.a(s) };

    let av = l.a_set().without(l.a(s)).with(v);
    let (hv, vmap) = h.induced_set(av);
    let vi = vmap.iter().position(|&u| u == v).unwrap();
    let (m1, m2_tournament) = (hv.out(vi).len(), hv.second_out(vi).len());
    let m2 = h.second_out(v).intersection(av).len();
    check(m1 <= m2_tournament && m2_tournament <= m2, "tournament SNP", || format!("m1 = {m1}, m2 = {m2}"))?;

    let next_is_out = h.has_arc(v, l.a(l.next(s)));
    let extra = usize::from(!next_is_out);
    count("|N+| = 2m1 + m2", 2 * m1 + m2 + extra, h.out(v).len())?;
    count("|N++| = 2m2 + m1", 2 * m2 + m1 + extra, h.second_out(v).len())?;

    let gv = g.induced_set(dc.support()).1[v];
    let cert = SnpCertificate::validate(&h, v, Method::DoubleCycleEnd)?;
    let certificate = SnpCertificate { vertex: gv, ..cert };
    Ok(EndReport { s, vertex: gv, m1, m2, m2_tournament, next_is_out, certificate })
}

/// Values behind the center finder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterReport {
    pub t: usize,
    pub vertex: usize,
    pub n1: usize,
    pub n2: usize,
    /// `b_{t+1} -> b_t`.
    pub next_is_in: bool,
    pub certificate: SnpCertificate,
}

/// SNP center `b_t` inside `D[K(C)]`: the first `t` whose out-degree in the
/// tournament on `{b_i}` is at least its in-degree. Checks
/// `|b_t^-| = 2n1 + n2`, `|b_t^+| = 2n2 + n1` and
/// `|b_t^{++}| = 2n1 + n2`, plus one when `b_{t+1} -> b_t`.
pub fn snp_in_double_cycle_center(g: &OrientedGraph, dc: &DoubleCycle) -> Result<CenterReport> {
    let (h, l) = dc.local(g);
    let bs = l.b_set();
    let t = (0..l.k())
        .find(|&t| h.out(l.b(t)).intersection(bs).len() >= h.inc(l.b(t)).intersection(bs).len())
        .ok_or_else(|| Error::proof("degree sum", "every center has more in- than out-neighbours among centers"))?;
    let b = l.b(t);
    let (n1, n2) = (h.out(b).intersection(bs).len(), h.inc(b).intersection(bs).len());
    let next_is_in = h.has_arc(l.b(l.next(t)), b);
    count("|b-| = 2n1 + n2", 2 * n1 + n2, h.in_degree(b))?;
    count("|b+| = 2n2 + n1", 2 * n2 + n1, h.out_degree(b))?;
    count("|b++| = 2n1 + n2", 2 * n1 + n2 + usize::from(next_is_in), h.second_out(b).len())?;

    let gv = g.induced_set(dc.support()).1[b];
    let cert = SnpCertificate::validate(&h, b, Method::DoubleCycleCenter)?;
    let certificate = SnpCertificate { vertex: gv, ..cert };
    Ok(CenterReport { t, vertex: gv, n1, n2, next_is_in, certificate })
}

/// Runs every structure check on one double cycle.
pub fn check_structure(g: &OrientedGraph, dc: &DoubleCycle) -> Result<()> {
    let (h, l) = dc.local(g);
    check_relation_table(&h, &l)?;
    check_twins(&h, &l)?;
    check_second_neighbourhoods(&h, &l)
}

/// Labels a Δ cycle of disjoint missing edges as `a_i b_i` with
/// `a_i -> a_{i+1}` and `b_i -> b_{i+1}` for `i < k`, following the losing
/// labellings from the first node.
pub fn label_cycle(delta: &DependencyDigraph, cycle: &[usize]) -> Option<Vec<(usize, usize)>> {
    let first = delta.labelling(cycle[0], *cycle.get(1)?)?;
    let mut labels = vec![(first[0], first[1])];
    for w in cycle.windows(2) {
        let [x, y, a, b] = delta.labelling(w[0], w[1])?;
        let (cur, _) = *labels.last().unwrap();
        labels.push(if cur == x {
            (a, b)
        } else if cur == y {
            (b, a)
        } else {
            return None;
        });
    }
    Some(labels)
}

/// Closing arcs of a labelled Δ cycle of a matching: `a_k -> a_1` and
/// `b_k -> b_1` for odd `k`, `a_k -> b_1` and `b_k -> a_1` for even `k`.
/// Requires `D[K(C)]` to miss exactly the cycle's edges.
pub fn check_cycle_parity(g: &OrientedGraph, labels: &[(usize, usize)]) -> Result<()> {
    let k = labels.len();
    let support: VertexSet = labels.iter().flat_map(|&(a, b)| [a, b]).collect();
    let (h, _) = g.induced_set(support);
    check(h.missing_graph().edges.len() == k, "cycle parity", || "D[K(C)] is not a tournament missing a matching".into())?;
    let (a1, b1) = labels[0];
    let (ak, bk) = labels[k - 1];
    let holds = if k % 2 == 1 { g.has_arc(ak, a1) && g.has_arc(bk, b1) } else { g.has_arc(ak, b1) && g.has_arc(bk, a1) };
    check(holds, "cycle parity", || format!("closing arcs of a cycle of length {k} have the wrong parity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependency::analyze;

    #[test]
    fn wrap_indices() {
        assert_eq!(wrap(-1, 3), 2);
        assert_eq!(wrap(3, 3), 0);
        assert_eq!(wrap(4, 3), 1);
        assert_eq!(wrap(0, 5), 0);
    }

    /// Triple `t` beats triple `i` when `r` says so; `a_i -> c_i` always.
    pub(crate) fn template(k: usize, beats: impl Fn(usize, usize) -> bool) -> OrientedGraph {
        let (a, b, c) = (|i: usize| 3 * i, |i: usize| 3 * i + 1, |i: usize| 3 * i + 2);
        let mut arcs = Vec::new();
        for i in 0..k {
            arcs.push((a(i), c(i)));
            for j in 0..k {
                if i != j && beats(i, j) {
                    arcs.extend([(a(i), a(j)), (a(i), c(j)), (c(i), a(j)), (c(i), c(j)), (b(i), b(j))]);
                    arcs.extend([(a(j), b(i)), (c(j), b(i)), (b(j), a(i)), (b(j), c(i))]);
                }
            }
        }
        OrientedGraph::new(3 * k, &arcs).unwrap()
    }

    #[test]
    fn cyclic_triangle_of_triples_is_a_double_cycle() {
        let g = template(3, |i, j| j == (i + 1) % 3);
        let a = analyze(&g);
        let dcs = find_double_cycles(&g, &a);
        assert_eq!(dcs.len(), 1);
        let dc = &dcs[0];
        assert_eq!(dc.triples, vec![[0, 1, 2], [3, 4, 5], [6, 7, 8]]);
        check_structure(&g, dc).unwrap();
        let end = snp_in_double_cycle_end(&g, dc).unwrap();
        assert!(end.certificate.holds_in(&g));
        let center = snp_in_double_cycle_center(&g, dc).unwrap();
        assert!(center.certificate.holds_in(&g));
        assert!(crate::dependency::is_interval(&g, dc.support()));
    }

    #[test]
    fn matching_cycle_is_not_a_double_cycle() {
        // Two missing edges {0,2} and {1,3} on a 4-cycle lose to each other.
        let g = OrientedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let a = analyze(&g);
        assert!(find_double_cycles(&g, &a).is_empty());
        assert_eq!(a.components[0].shape, Shape::Cycle);
        let cycle = crate::dependency::as_directed_cycle(&a.delta, &a.components[0].nodes).unwrap();
        let labels = label_cycle(&a.delta, &cycle).unwrap();
        check_cycle_parity(&g, &labels).unwrap();
    }

    #[test]
    fn no_missing_edges_no_cycles() {
        let t3 = OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(find_double_cycles(&t3, &analyze(&t3)).is_empty());
    }
}
