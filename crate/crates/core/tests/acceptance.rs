//! Acceptance suite. Every criterion is checked against oracles written here
//! from the arc list alone, and prints one PASS/FAIL line.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ssnc_core::completion::{good_completion, snp_from_completion};
use ssnc_core::dependency::{analyze, is_interval};
use ssnc_core::generators::{
    composite_instance, enumerate_oriented_graphs, random_delta_path_instance, random_good_instance, random_instance,
    random_matching_cycle_instance, random_oriented_graph, random_paths_composite, random_weights,
    search_counterexample, InstanceClass, InstanceSpec, Module,
};
use ssnc_core::order::{
    good_median_order_with, median_order_exact, sedimentation, sedimentation_class, LinearOrder, SedClass,
    DEFAULT_EXACT_CAP, DEFAULT_SED_BUDGET,
};
use ssnc_core::paths::{
    check_structure, find_double_cycles, find_snp_paths, find_two_snp_no_sink, snp_in_double_cycle_center,
    snp_in_double_cycle_end, DoubleCycle,
};
use ssnc_core::stars::{detect_two_stars, find_snp_two_stars, run_decomposition, StarCase};
use ssnc_core::verify::{double_cycle_instances, two_star_instance, SEARCH_CLASSES};
use ssnc_core::{Error, OrientedGraph, VertexSet};

/// Templates examined per `k` for the double-cycle census; `2^(pairs + k)`
/// is at most this for `k <= 5`, so the census is exhaustive.
const TEMPLATE_LIMIT: u64 = 1 << 15;

/// Adjacency matrix and weights read off `arcs()`.
struct Oracle {
    n: usize,
    adj: Vec<Vec<bool>>,
    w: Vec<f64>,
}

impl Oracle {
    fn new(g: &OrientedGraph) -> Self {
        let n = g.n();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.arcs() {
            adj[u][v] = true;
        }
        Oracle { n, adj, w: g.weights().to_vec() }
    }

    fn out(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[v][u]).collect()
    }

    fn second(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&z| z != v && !self.adj[v][z] && (0..self.n).any(|u| self.adj[v][u] && self.adj[u][z])).collect()
    }

    fn weight(&self, s: &[usize]) -> f64 {
        s.iter().map(|&v| self.w[v]).sum()
    }

    /// Weighted SNP. Weights are dyadic, so sums are exact.
    fn snp(&self, v: usize) -> bool {
        v < self.n && self.weight(&self.out(v)) <= self.weight(&self.second(v))
    }

    fn snp_count(&self) -> usize {
        (0..self.n).filter(|&v| self.snp(v)).count()
    }

    fn sink_free(&self) -> bool {
        (0..self.n).all(|v| !self.out(v).is_empty())
    }

    fn forward(&self, seq: &[usize]) -> f64 {
        let mut w = 0.0;
        for (i, &u) in seq.iter().enumerate() {
            for &v in &seq[i + 1..] {
                if self.adj[u][v] {
                    w += self.w[u] * self.w[v];
                }
            }
        }
        w
    }

    /// Maximum forward weight over all permutations, by depth-first
    /// extension of prefixes.
    fn best_forward(&self) -> f64 {
        fn go(o: &Oracle, placed: &mut Vec<usize>, used: &mut [bool], acc: f64, best: &mut f64) {
            if placed.len() == o.n {
                *best = best.max(acc);
                return;
            }
            for v in 0..o.n {
                if used[v] {
                    continue;
                }
                let gain: f64 = placed.iter().filter(|&&u| o.adj[u][v]).map(|&u| o.w[u] * o.w[v]).sum();
                used[v] = true;
                placed.push(v);
                go(o, placed, used, acc + gain, best);
                placed.pop();
                used[v] = false;
            }
        }
        let mut best = f64::NEG_INFINITY;
        go(self, &mut Vec::new(), &mut vec![false; self.n], 0.0, &mut best);
        best
    }
}

fn contiguous(seq: &[usize], blocks: &[VertexSet]) -> bool {
    blocks.iter().all(|b| {
        let pos: Vec<usize> = seq.iter().enumerate().filter(|(_, v)| b.contains(**v)).map(|(i, _)| i).collect();
        pos.last().zip(pos.first()).is_none_or(|(l, f)| l - f + 1 == pos.len())
    })
}

/// Tally of one criterion.
#[derive(Default)]
struct Tally {
    instances: u64,
    skipped: u64,
    failures: u64,
    first: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn fail(&mut self, msg: impl Into<String>) {
        self.failures += 1;
        if self.first.len() < 3 {
            self.first.push(msg.into());
        }
    }

    fn ensure(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.fail(msg());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Median-order DP against the permutation optimum, weighted, n <= 8.
fn criterion_1() -> Tally {
    let mut t = Tally::default();
    for seed in 0..1000u64 {
        let n = 1 + (seed % 8) as usize;
        let g = random_weights(&random_oriented_graph(n, 0.25, seed).unwrap(), seed);
        let o = Oracle::new(&g);
        t.instances += 1;
        match median_order_exact(&g, None) {
            Ok(l) => {
                let best = o.best_forward();
                t.ensure(l.weight == best && o.forward(&l.seq) == best, || {
                    format!("seed {seed}: DP {} (order weighs {}) vs {best}", l.weight, o.forward(&l.seq))
                });
            }
            Err(e) => t.fail(format!("seed {seed}: {e}")),
        }
    }
    t
}

/// Every tournament on 6 vertices, pairs enumerated lexicographically.
fn tournaments_6() -> impl Iterator<Item = OrientedGraph> {
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    (0u32..1 << 15).map(move |code| {
        let arcs: Vec<_> = pairs.iter().enumerate().map(|(b, &(i, j))| if code >> b & 1 == 1 { (i, j) } else { (j, i) }).collect();
        OrientedGraph::new(6, &arcs).unwrap()
    })
}

fn criterion_2() -> Tally {
    let mut t = Tally::default();
    let mut sink_free = 0;
    for g in tournaments_6() {
        let o = Oracle::new(&g);
        t.instances += 1;
        let l = median_order_exact(&g, None).unwrap();
        t.ensure(o.forward(&l.seq) == o.best_forward(), || format!("{:?} is not a median order", l.seq));
        t.ensure(o.snp(l.feed()), || format!("feed {} of {:?} lacks the SNP", l.feed(), l.seq));
        if o.sink_free() {
            sink_free += 1;
            t.ensure(o.snp_count() >= 2, || format!("sink-free tournament {:?} has {} SNP vertices", g.arcs(), o.snp_count()));
            match find_two_snp_no_sink(&g) {
                Ok(r) => t.ensure(r.first.vertex != r.second.vertex && o.snp(r.first.vertex) && o.snp(r.second.vertex), || {
                    format!("construction returned {} and {}", r.first.vertex, r.second.vertex)
                }),
                Err(e) => t.fail(format!("{:?}: {e}", g.arcs())),
            }
        }
    }
    t.note(format!("{sink_free} sink-free"));
    t
}

fn good_instances() -> impl Iterator<Item = (u64, OrientedGraph)> {
    (0..500u64).map(|seed| (seed, random_weights(&random_good_instance(12, seed).unwrap(), seed)))
}

/// Vertices of `seq` (feed `f`) not dominated by `f` but reached by an
/// earlier out-neighbour of `f`.
fn good_vertices(o: &Oracle, seq: &[usize]) -> Vec<usize> {
    let f = *seq.last().unwrap();
    (0..seq.len())
        .filter(|&j| seq[j] != f && !o.adj[f][seq[j]] && (0..j).any(|i| o.adj[f][seq[i]] && o.adj[seq[i]][seq[j]]))
        .map(|j| seq[j])
        .collect()
}

fn criterion_3() -> Tally {
    let mut t = Tally::default();
    for (seed, g) in good_instances() {
        let o = Oracle::new(&g);
        t.instances += 1;
        let blocks = analyze(&g).partition();
        let l = match good_median_order_with(&g, &blocks, DEFAULT_EXACT_CAP) {
            Ok(l) => l,
            Err(e) => {
                t.fail(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let optimum = median_order_exact(&g, None).unwrap().weight;
        t.ensure(o.forward(&l.seq) == optimum && contiguous(&l.seq, &blocks), || format!("seed {seed}: not a good median order"));
        let f = l.feed();
        let j = *blocks.iter().find(|b| b.contains(f)).unwrap();
        let outside = |s: Vec<usize>| -> Vec<usize> { s.into_iter().filter(|&v| !j.contains(v)).collect() };
        let good_w = o.weight(&outside(good_vertices(&o, &l.seq)));
        for x in j.iter() {
            let out_w = o.weight(&outside(o.out(x)));
            t.ensure(out_w <= good_w, || format!("seed {seed}: x = {x}, {out_w} > {good_w}"));
        }
    }
    t
}

fn matching_instances() -> impl Iterator<Item = OrientedGraph> {
    (0..1000u64).map(|seed| {
        let n = 2 + (seed % 11) as usize;
        let k = (seed / 11) as usize % (n / 2 + 1);
        random_instance(&InstanceSpec { k, ..InstanceSpec::new(InstanceClass::MissingMatching, n, seed) }).unwrap()
    })
}

fn delta_path_instances() -> impl Iterator<Item = OrientedGraph> {
    (0..500u64).map(|seed| random_delta_path_instance(12, seed).unwrap())
}

fn completion_check(t: &mut Tally, g: &OrientedGraph) {
    let o = Oracle::new(g);
    t.instances += 1;
    let c = match good_completion(g) {
        Ok(c) => c,
        Err(e) => return t.fail(e.to_string()),
    };
    let keeps = g.arcs().iter().all(|&(u, v)| c.completed.has_arc(u, v));
    t.ensure(keeps && analyze(&c.completed).is_good(), || format!("completion of {:?} is not a good superset", g.arcs()));
    match snp_from_completion(g, &c) {
        Ok(cert) => t.ensure(o.snp(cert.vertex), || format!("{cert} fails in {:?}", g.arcs())),
        Err(e) => t.fail(e.to_string()),
    }
}

fn criterion_4() -> Tally {
    let mut t = Tally::default();
    matching_instances().for_each(|g| completion_check(&mut t, &g));
    delta_path_instances().for_each(|g| completion_check(&mut t, &g));
    t
}

/// Some pair of vertices touches every missing edge.
fn covered_by_two_centers(g: &OrientedGraph) -> bool {
    let edges = g.missing_graph().edges;
    (0..g.n()).any(|x| (0..g.n()).any(|y| edges.iter().all(|&(u, v)| u == x || v == x || u == y || v == y)))
}

/// Every two-star digraph with at most 5 vertices.
fn exhaustive_two_stars() -> impl Iterator<Item = OrientedGraph> {
    (1..=5)
        .flat_map(|m| enumerate_oriented_graphs(m).unwrap())
        .filter(|g| !g.missing_graph().edges.is_empty() && detect_two_stars(g).is_ok())
}

/// 2000 seeded two-star digraphs with at most 9 vertices, cycling through
/// the three cases.
fn seeded_two_stars() -> Vec<OrientedGraph> {
    (0u64..).filter_map(|seed| two_star_instance(seed, 9)).take(2000).collect()
}

fn two_star_check(t: &mut Tally, g: &OrientedGraph) {
    let o = Oracle::new(g);
    t.instances += 1;
    t.ensure(covered_by_two_centers(g), || format!("{:?} is not missing two stars", g.arcs()));
    match find_snp_two_stars(g) {
        Ok(cert) => t.ensure(o.snp(cert.vertex), || format!("{cert} fails in {:?}", g.arcs())),
        Err(e) => t.fail(format!("{:?}: {e}", g.arcs())),
    }
}

fn criterion_5() -> Tally {
    let mut t = Tally::default();
    exhaustive_two_stars().for_each(|g| two_star_check(&mut t, &g));
    let exhaustive = t.instances;
    let seeded = seeded_two_stars();
    let mut cases = [0u64; 3];
    for g in &seeded {
        two_star_check(&mut t, g);
        if let Ok(s) = detect_two_stars(g) {
            let i = [StarCase::Disjoint, StarCase::AdjacentCenters, StarCase::SharedLeaves].iter().position(|&c| c == s.canonical().case);
            cases[i.unwrap()] += 1;
        }
    }
    t.ensure(seeded.len() == 2000 && cases.iter().all(|&c| c > 0), || format!("seeded cases {cases:?}"));
    t.note(format!("{exhaustive} exhaustive, seeded cases {cases:?}"));
    t
}

/// Sedimentation from a good median order: every iterate keeps the optimum
/// weight and block contiguity, and the classification terminates.
fn sed_check(t: &mut Tally, g: &OrientedGraph, l: Option<LinearOrder>) {
    let o = Oracle::new(g);
    let blocks = analyze(g).partition();
    let l = match l {
        Some(l) => l,
        None => match good_median_order_with(g, &blocks, DEFAULT_EXACT_CAP) {
            Ok(l) => l,
            Err(Error::NotGoodDigraph(_)) => {
                t.skipped += 1;
                return;
            }
            Err(e) => return t.fail(e.to_string()),
        },
    };
    t.instances += 1;
    let optimum = median_order_exact(g, None).unwrap().weight;
    let iterates = match sedimentation_class(g, &l, &blocks, DEFAULT_SED_BUDGET) {
        Ok(SedClass::Periodic { visited, .. }) => visited,
        Ok(SedClass::Stable { rank, .. }) => {
            let mut v = vec![l.clone()];
            for _ in 0..rank {
                match sedimentation(g, v.last().unwrap(), &blocks) {
                    Ok(next) => v.push(next),
                    Err(e) => return t.fail(e.to_string()),
                }
            }
            v
        }
        Err(e) => return t.fail(e.to_string()),
    };
    for it in &iterates {
        t.ensure(o.forward(&it.seq) == optimum && contiguous(&it.seq, &blocks), || {
            format!("iterate {:?} of {:?} weighs {} against {optimum}", it.seq, l.seq, o.forward(&it.seq))
        });
    }
}

/// The tournament `T` built by the two-star construction on `D - y`, with
/// the order the construction used.
fn two_star_tournament(g: &OrientedGraph) -> Option<(OrientedGraph, LinearOrder)> {
    let s = detect_two_stars(g).ok()?;
    let tr = run_decomposition(g, s.canonical()).ok()?;
    let (dy, map) = g.induced_set(g.vertices().without(tr.decomposition.y));
    let local = |v: usize| map.iter().position(|&u| u == v).unwrap();
    let arcs: Vec<_> = tr.completion_arcs.iter().map(|&(u, v)| (local(u), local(v))).collect();
    let tt = dy.with_arcs(&arcs).ok()?;
    let l = LinearOrder::new(&tt, tr.order.iter().map(|&v| local(v)).collect()).ok()?;
    Some((tt, l))
}

fn criterion_6() -> Tally {
    let mut t = Tally::default();
    tournaments_6().for_each(|g| sed_check(&mut t, &g, None));
    good_instances().for_each(|(_, g)| sed_check(&mut t, &g, None));
    for g in matching_instances().chain(delta_path_instances()) {
        if let Ok(c) = good_completion(&g) {
            sed_check(&mut t, &c.completed, None);
        }
    }
    for g in exhaustive_two_stars().chain(seeded_two_stars()) {
        match two_star_tournament(&g) {
            Some((tt, l)) => sed_check(&mut t, &tt, Some(l)),
            None => t.fail(format!("two-star construction failed on {:?}", g.arcs())),
        }
    }
    t
}

/// Counting identities and SNP of the end and center vertices, recomputed
/// on `D[K(C)]`. Returns whether the end identities also hold with the
/// second neighbourhood taken in the tournament on `A_v`.
fn double_cycle_check(t: &mut Tally, g: &OrientedGraph, dc: &DoubleCycle) -> bool {
    if let Err(e) = check_structure(g, dc) {
        t.fail(e.to_string());
    }
    let (h, l) = dc.local(g);
    let o = Oracle::new(&h);
    let to_local = |v: usize| g.induced_set(dc.support()).1.iter().position(|&u| u == v).unwrap();
    let mut literal = true;
    match snp_in_double_cycle_end(g, dc) {
        Ok(r) => {
            let v = to_local(r.vertex);
            let s = r.s;
            let av: Vec<usize> = (0..l.k()).map(|i| if i == s { v } else { l.a(i) }).collect();
            let m1 = o.out(v).iter().filter(|u| av.contains(u)).count();
            let m2 = o.second(v).iter().filter(|u| av.contains(u)).count();
            let m2_lit = av.iter().filter(|&&z| z != v && !o.adj[v][z] && av.iter().any(|&u| o.adj[v][u] && o.adj[u][z])).count();
            let extra = usize::from(!o.adj[v][l.a(l.next(s))]);
            let (p, pp) = (o.out(v).len(), o.second(v).len());
            t.ensure(v == if o.adj[l.a(s)][l.c(s)] { l.c(s) } else { l.a(s) }, || format!("end vertex {v} for s = {s}"));
            t.ensure(p == 2 * m1 + m2 + extra && pp == 2 * m2 + m1 + extra, || {
                format!("end {v}: |N+| {p}, |N++| {pp}, m1 {m1}, m2 {m2}, extra {extra}")
            });
            t.ensure(o.snp(v), || format!("end vertex {v} lacks the SNP in D[K(C)]"));
            literal = p == 2 * m1 + m2_lit + extra && pp == 2 * m2_lit + m1 + extra;
        }
        Err(e) => t.fail(e.to_string()),
    }
    match snp_in_double_cycle_center(g, dc) {
        Ok(r) => {
            let b = to_local(r.vertex);
            let bs: Vec<usize> = (0..l.k()).map(|i| l.b(i)).collect();
            let n1 = bs.iter().filter(|&&u| o.adj[b][u]).count();
            let n2 = bs.iter().filter(|&&u| o.adj[u][b]).count();
            let indeg = (0..o.n).filter(|&u| o.adj[u][b]).count();
            let extra = usize::from(o.adj[l.b(l.next(r.t))][b]);
            t.ensure(indeg == 2 * n1 + n2 && o.out(b).len() == 2 * n2 + n1 && o.second(b).len() == 2 * n1 + n2 + extra, || {
                format!("center {b}: in {indeg}, out {}, second {}, n1 {n1}, n2 {n2}", o.out(b).len(), o.second(b).len())
            });
            t.ensure(o.snp(b), || format!("center {b} lacks the SNP in D[K(C)]"));
        }
        Err(e) => t.fail(e.to_string()),
    }
    literal
}

/// Re-orients every arc between `K(C)` and the rest at random. A double
/// cycle that survives must still span an interval.
fn interval_check(t: &mut Tally, g: &OrientedGraph, seed: u64) -> bool {
    let h = match composite_instance(&[Module::Graph(g.clone())], 2, 0, seed) {
        Ok(h) => h,
        Err(e) => {
            t.fail(e.to_string());
            return false;
        }
    };
    let found = find_double_cycles(&h, &analyze(&h));
    t.ensure(found.len() == 1 && is_interval(&h, found[0].support()), || "embedded double cycle is not an interval".into());
    let Some(support) = found.first().map(|d| d.support()) else { return false };
    let mut arcs: Vec<_> = h.arcs().into_iter().filter(|&(u, v)| support.contains(u) == support.contains(v)).collect();
    let mut bits = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    for u in support.iter() {
        for v in h.vertices().difference(support).iter() {
            bits ^= bits << 13;
            bits ^= bits >> 7;
            bits ^= bits << 17;
            arcs.push(if bits & 1 == 1 { (u, v) } else { (v, u) });
        }
    }
    let free = OrientedGraph::new(h.n(), &arcs).unwrap();
    let survived = find_double_cycles(&free, &analyze(&free)).iter().any(|d| d.support() == support);
    t.ensure(!survived || is_interval(&free, support), || format!("surviving double cycle on {support} is not an interval"));
    survived
}

fn criterion_7() -> Tally {
    let mut t = Tally::default();
    let mut per_k = Vec::new();
    let mut literal_fail = Vec::new();
    let mut survived = 0;
    for k in 2..=5 {
        let inst = double_cycle_instances(k, TEMPLATE_LIMIT, 0);
        if inst.is_empty() {
            t.note(format!("NotFound({k})"));
        }
        let mut lit = 0;
        for (i, (g, dc)) in inst.iter().enumerate() {
            t.instances += 1;
            if !double_cycle_check(&mut t, g, dc) {
                lit += 1;
            }
            survived += usize::from(interval_check(&mut t, g, i as u64));
        }
        per_k.push(format!("k={k}: {}", inst.len()));
        literal_fail.push(lit);
    }
    t.ensure(per_k.len() == 4, || "k = 2..5 not all exercised".into());
    t.note(format!("certified {}", per_k.join(", ")));
    t.note(format!("end identities fail with m2 from the tournament on A_v in {literal_fail:?} cases (k = 2..5)"));
    t.note(format!("{survived} free re-orientations kept the double cycle"));
    t
}

fn paths_check(t: &mut Tally, g: &OrientedGraph) {
    let o = Oracle::new(g);
    t.instances += 1;
    match find_snp_paths(g) {
        Ok(cert) => t.ensure(o.snp(cert.vertex), || format!("{cert} fails in {:?}", g.arcs())),
        Err(e) => t.fail(format!("paths on {:?}: {e}", g.arcs())),
    }
    if !o.sink_free() || !analyze(g).is_good() {
        t.skipped += 1;
        return;
    }
    match find_two_snp_no_sink(g) {
        Ok(r) => t.ensure(r.first.vertex != r.second.vertex && o.snp(r.first.vertex) && o.snp(r.second.vertex), || {
            format!("no-sink returned {} and {} on {:?}", r.first.vertex, r.second.vertex, g.arcs())
        }),
        Err(e) => t.fail(format!("no-sink on {:?}: {e}", g.arcs())),
    }
}

fn criterion_8() -> Tally {
    let mut t = Tally::default();
    for k in 2..=4 {
        for (g, _) in double_cycle_instances(k, TEMPLATE_LIMIT, 0) {
            paths_check(&mut t, &g);
        }
    }
    for seed in 0..500u64 {
        paths_check(&mut t, &random_paths_composite(14, (seed % 3) as usize, seed).unwrap());
        match random_matching_cycle_instance(2 + (seed % 6) as usize, seed) {
            Ok(g) => paths_check(&mut t, &g),
            Err(Error::NotFound(_)) => t.skipped += 1,
            Err(e) => t.fail(e.to_string()),
        }
    }
    t.note(format!("{} without the two-SNP hypothesis (sink or not good)", t.skipped));
    t
}

fn criterion_9() -> Tally {
    let mut t = Tally::default();
    let r = search_counterexample(InstanceClass::Tournament, 5, 0, 0);
    t.instances += r.examined;
    t.ensure(r.exhaustive && r.counterexample.is_none(), || format!("tournaments: {:?}", r.counterexample_spec));
    for &(class, max_n) in SEARCH_CLASSES {
        let r = search_counterexample(class, max_n, 10_000, max_n as u64);
        t.instances += r.examined;
        t.skipped += r.skipped;
        t.ensure(r.examined == 10_000, || format!("{class}: examined {}", r.examined));
        if let Some(g) = &r.counterexample {
            t.ensure(Oracle::new(g).snp_count() > 0, || format!("COUNTEREXAMPLE {class}: {:?}", r.counterexample_spec));
            t.fail(format!("{class}: search reported {:?}", r.counterexample_spec));
        }
    }
    t
}

type Criterion = (u32, &'static str, Duration, fn() -> Tally);

const CRITERIA: &[Criterion] = &[
    (1, "median-order oracle", Duration::from_secs(120), criterion_1),
    (2, "tournaments on six vertices", Duration::from_secs(180), criterion_2),
    (3, "feed inequality on good digraphs", Duration::from_secs(120), criterion_3),
    (4, "good completion certificates", Duration::from_secs(300), criterion_4),
    (5, "two missing stars", Duration::from_secs(600), criterion_5),
    (6, "sedimentation", Duration::from_secs(600), criterion_6),
    (7, "double-cycle suite", Duration::from_secs(600), criterion_7),
    (8, "disjoint paths and two SNP vertices", Duration::from_secs(300), criterion_8),
    (9, "counterexample search", Duration::from_secs(600), criterion_9),
];

fn main() -> ExitCode {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&(id, name, limit, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let t = f();
                    (id, name, limit, start.elapsed(), t)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut ok = true;
    for (id, name, limit, took, t) in results {
        let pass = t.failures == 0 && t.instances > 0 && took <= limit;
        ok &= pass;
        let mut line = format!(
            "{} criterion {id} {name}: {} instances, {} skipped, {} failures, {:.1}s (limit {}s)",
            if pass { "PASS" } else { "FAIL" },
            t.instances,
            t.skipped,
            t.failures,
            took.as_secs_f64(),
            limit.as_secs()
        );
        for n in &t.notes {
            line.push_str("; ");
            line.push_str(n);
        }
        println!("{line}");
        for f in &t.first {
            println!("    {f}");
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
