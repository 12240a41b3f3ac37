//! Verification suites.
//!
//! Each target runs one family of checks over enumerated or seeded
//! instances and produces one [`CheckRecord`] per check. A record carries a
//! fingerprint of every instance it looked at, so two runs can be compared
//! byte for byte.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::completion::{good_completion, trace_completion};
use crate::dependency::{analyze, as_directed_cycle, convenient_orientation, is_good_edge, is_interval, DependencyAnalysis};
use crate::error::{Error, Result};
use crate::format::write_graph;
use crate::generators::{
    certify_double_cycle, composite_instance, double_cycle_candidate, enumerate_oriented_graphs, enumerate_tournaments,
    random_delta_path_instance, random_good_instance, random_instance, random_matching_cycle_instance,
    random_oriented_graph, random_paths_composite, random_weights, search_counterexample, InstanceClass, InstanceSpec,
    Module,
};
use crate::graph::OrientedGraph;
use crate::order::{
    blocks_contiguous, classify_vertices, good_median_order_with, median_order_exact, sedimentation_class, LinearOrder, SedClass, DEFAULT_SED_BUDGET,
};
use crate::paths::{
    check_cycle_parity, check_relation_table, check_second_neighbourhoods, check_twins, find_double_cycles,
    find_snp_paths, find_two_snp_no_sink_with, label_cycle, snp_in_double_cycle_center, snp_in_double_cycle_end,
    DoubleCycle,
};
use crate::stars::{detect_two_stars, run_decomposition, StarCase};
use crate::util::{fingerprint, weights_equal};
use crate::vertex_set::VertexSet;

/// Outcome of one check over a batch of instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// Fingerprint of the concatenated serialisations of every instance.
    pub fingerprint: String,
    pub pass: bool,
    pub values: Value,
}

/// Size knobs shared by every target. `None` picks the target's default,
/// which depends on `quick`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scale {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub seeds: Option<u64>,
    pub quick: bool,
    pub seed: u64,
    pub exact_cap: usize,
}

impl Default for Scale {
    fn default() -> Self {
        Scale { n: None, k: None, seeds: None, quick: false, seed: 0, exact_cap: crate::order::DEFAULT_EXACT_CAP }
    }
}

impl Scale {
    fn n(&self, full: usize, quick: usize) -> usize {
        self.n.unwrap_or(if self.quick { quick } else { full })
    }

    fn seeds(&self, full: u64, quick: u64) -> u64 {
        self.seeds.unwrap_or(if self.quick { quick } else { full })
    }

    /// Seed of the `i`-th draw of a suite tagged `salt`.
    fn draw(&self, salt: u64, i: u64) -> u64 {
        self.seed.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ i
    }
}

/// Targets accepted by [`run_verify`], with a one-line description.
pub const TARGETS: &[(&str, &str)] = &[
    ("median-oracle", "exact median order against brute force over all permutations"),
    ("havet-thomasse", "feed of a median order of a tournament has the SNP; sink-free ones have two"),
    ("good-edge-indegree", "good missing edges are exactly the Δ sources; convenient orientations preserve neighbourhoods"),
    ("delta-degree", "Δ degree bounds and adjacency of neighbours when the missing graph is disjoint paths"),
    ("feed-inequality", "ω(N+(x) \\ J(f)) <= ω(G_L \\ J(f)) for x in J(f) under a good median order"),
    ("sedimentation", "Sed preserves weight and contiguity; the stable/periodic iteration terminates"),
    ("good-completion", "certificates from good completions of matching and Δ-path instances"),
    ("two-stars", "two-star construction on every decomposition, exhaustive and seeded"),
    ("double-cycle-relations", "relation table of double cycles"),
    ("double-cycle-twins", "a_i and c_i are twins inside K(C)"),
    ("double-cycle-second-nbhd", "second out-neighbourhood formulas inside K(C)"),
    ("double-cycle-end-counting", "counting identities for the end vertex a_s or c_s"),
    ("double-cycle-center-counting", "counting identities for the center b_t"),
    ("double-cycle-interval", "K(C) is an interval whenever a double cycle survives an embedding"),
    ("cycle-parity", "closing arcs of a Δ cycle of matching edges follow the parity of k"),
    ("mixed-paths", "SNP for digraphs missing disjoint paths of length at most two"),
    ("two-snp-no-sink", "two SNP vertices in sink-free good digraphs"),
    ("counterexample", "no instance without an SNP vertex"),
];

/// Runs `target` (or every target for `all`), returning records sorted by id.
pub fn run_verify(target: &str, scale: &Scale) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    if target == "all" {
        for (t, _) in TARGETS {
            out.extend(run_one(t, scale)?);
        }
    } else {
        out = run_one(target, scale)?;
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

fn run_one(target: &str, s: &Scale) -> Result<Vec<CheckRecord>> {
    Ok(match target {
        "median-oracle" => median_oracle(s),
        "havet-thomasse" => havet_thomasse(s)?,
        "good-edge-indegree" => good_edge_indegree(s)?,
        "delta-degree" => delta_degree(s)?,
        "feed-inequality" => feed_inequality(s)?,
        "sedimentation" => sedimentation_suite(s)?,
        "good-completion" => completion_suite(s)?,
        "two-stars" => two_stars(s)?,
        "double-cycle-relations" | "double-cycle-twins" | "double-cycle-second-nbhd" | "double-cycle-end-counting"
        | "double-cycle-center-counting" => double_cycle_suite(s, Some(target))?,
        "double-cycle-interval" => double_cycle_interval(s)?,
        "cycle-parity" => cycle_parity(s)?,
        "mixed-paths" => mixed_paths(s)?,
        "two-snp-no-sink" => two_snp(s)?,
        "counterexample" => counterexample(s),
        _ => return Err(Error::UnknownTarget(target.to_string())),
    })
}

/// Accumulates one check: instances seen, failures, and extra values.
pub struct Check {
    id: String,
    hasher: Sha256,
    instances: u64,
    skipped: u64,
    failures: u64,
    examples: Vec<String>,
    values: serde_json::Map<String, Value>,
}

/// Failure messages kept per record.
const KEPT_FAILURES: usize = 5;

impl Check {
    pub fn new(id: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            hasher: Sha256::new(),
            instances: 0,
            skipped: 0,
            failures: 0,
            examples: Vec::new(),
            values: serde_json::Map::new(),
        }
    }

    pub fn instance(&mut self, g: &OrientedGraph) {
        self.hasher.update(write_graph(g, &[]).as_bytes());
        self.instances += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures += 1;
        if self.examples.len() < KEPT_FAILURES {
            self.examples.push(msg.into());
        }
    }

    /// Records `r`'s error as a failure tagged with `what`.
    pub fn expect<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn ensure(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.fail(msg());
        }
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("values serialise"));
    }

    pub fn bump(&mut self, key: &str) {
        let e = self.values.entry(key.to_string()).or_insert(json!(0));
        *e = json!(e.as_u64().unwrap_or(0) + 1);
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn finish(mut self) -> CheckRecord {
        self.values.insert("instances".into(), json!(self.instances));
        self.values.insert("skipped".into(), json!(self.skipped));
        self.values.insert("failures".into(), json!(self.failures));
        if !self.examples.is_empty() {
            self.values.insert("first_failures".into(), json!(self.examples));
        }
        let digest = self.hasher.finalize();
        CheckRecord { id: self.id, fingerprint: fingerprint(&digest), pass: self.failures == 0, values: Value::Object(self.values) }
    }
}

/// Maximum forward weight over every permutation, with the largest index
/// of `x` among optimal permutations.
pub fn brute_force_median(g: &OrientedGraph, x: Option<usize>) -> (f64, usize) {
    let n = g.n();
    let arcs = g.arcs();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = (f64::NEG_INFINITY, 0);
    let mut visit = |p: &[usize]| {
        let mut pos = vec![0; n];
        for (i, &v) in p.iter().enumerate() {
            pos[v] = i;
        }
        let w: f64 = arcs.iter().filter(|&&(u, v)| pos[u] < pos[v]).map(|&(u, v)| g.weight(u) * g.weight(v)).sum();
        let xi = x.map_or(0, |x| pos[x]);
        if w > best.0 + 1e-9 || (weights_equal(w, best.0) && xi > best.1) {
            best = (w.max(best.0), xi);
        }
    };
    // Heap's algorithm.
    let mut c = vec![0; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn median_oracle(s: &Scale) -> Vec<CheckRecord> {
    let max_n = s.n(8, 7);
    let mut weight = Check::new("median-oracle.weight");
    let mut secondary = Check::new("median-oracle.secondary");
    for i in 0..s.seeds(1000, 100) {
        let seed = s.draw(1, i);
        let n = 1 + (seed % max_n as u64) as usize;
        let g = random_weights(&random_oriented_graph(n, 0.25, seed).expect("n is small"), seed);
        weight.instance(&g);
        let (best, _) = brute_force_median(&g, None);
        if let Some(l) = weight.expect("exact", median_order_exact(&g, None)) {
            weight.ensure(weights_equal(l.weight, best), || format!("n = {n} seed {seed}: DP {} vs brute force {best}", l.weight));
        }
        if n <= 7 {
            let x = (seed / 7) as usize % n;
            secondary.instance(&g);
            let (_, xi) = brute_force_median(&g, Some(x));
            if let Some(l) = secondary.expect("exact", median_order_exact(&g, Some(x))) {
                let got = l.index_of(x).unwrap();
                secondary.ensure(got == xi, || format!("seed {seed}: index of {x} is {got}, best {xi}"));
            }
        }
    }
    weight.set("max_n", max_n);
    vec![weight.finish(), secondary.finish()]
}

fn havet_thomasse(s: &Scale) -> Result<Vec<CheckRecord>> {
    let n = s.n(6, 5);
    let mut feed = Check::new("havet-thomasse.feed");
    let mut two = Check::new("havet-thomasse.two-snp");
    let mut constructive = Check::new("havet-thomasse.no-sink-construction");
    for g in enumerate_tournaments(n)? {
        feed.instance(&g);
        let l = median_order_exact(&g, None)?;
        let f = l.feed();
        feed.ensure(g.has_snp(f)?, || format!("feed {f} of {l} lacks the SNP"));
        if g.sinks().is_empty() {
            two.instance(&g);
            let snp = g.snp_vertices();
            two.ensure(snp.len() >= 2, || format!("sink-free tournament with SNP vertices {snp}"));
            constructive.instance(&g);
            if let Some(r) = constructive.expect("no-sink", find_two_snp_no_sink_with(&g, s.exact_cap, DEFAULT_SED_BUDGET)) {
                constructive.ensure(r.first.vertex != r.second.vertex && r.first.holds_in(&g) && r.second.holds_in(&g), || {
                    format!("certificates {} and {}", r.first, r.second)
                });
                constructive.bump(&r.case.to_string());
            }
        }
    }
    feed.set("n", n);
    Ok(vec![feed.finish(), two.finish(), constructive.finish()])
}

/// `N+` and `N++` of every vertex outside `{a, b}` agree in `g` and `h`.
fn neighbourhoods_kept(g: &OrientedGraph, h: &OrientedGraph, a: usize, b: usize) -> bool {
    (0..g.n()).filter(|&v| v != a && v != b).all(|v| g.out(v) == h.out(v) && g.second_out(v) == h.second_out(v))
}

fn good_edge_checks(g: &OrientedGraph, a: &DependencyAnalysis, agree: &mut Check, keep: &mut Check) {
    agree.instance(g);
    for (i, &e) in a.delta.nodes.iter().enumerate() {
        let Some(def) = agree.expect("definition", is_good_edge(g, e)) else { continue };
        let sources = a.delta.in_degree(i) == 0;
        agree.ensure(def == sources, || format!("edge {e:?}: definition {def}, Δ in-degree {}", a.delta.in_degree(i)));
        if def {
            keep.instance(g);
            if let Some((u, v)) = keep.expect("orientation", convenient_orientation(g, e)) {
                let h = g.with_arc(u, v).expect("edge is missing");
                keep.ensure(neighbourhoods_kept(g, &h, u, v), || format!("orienting {u} -> {v} changed a neighbourhood"));
            }
        }
    }
}

fn good_edge_indegree(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut agree = Check::new("good-edge-indegree.agreement");
    let mut keep = Check::new("good-edge-indegree.orientation-keeps-neighbourhoods");
    let exhaustive_n = s.n(5, 4).min(5);
    for n in 2..=exhaustive_n {
        for g in enumerate_oriented_graphs(n)? {
            good_edge_checks(&g, &analyze(&g), &mut agree, &mut keep);
        }
    }
    for i in 0..s.seeds(1000, 200) {
        let seed = s.draw(3, i);
        let n = 4 + (seed % 6) as usize;
        let g = random_oriented_graph(n, 0.3, seed)?;
        good_edge_checks(&g, &analyze(&g), &mut agree, &mut keep);
    }
    agree.set("exhaustive_n", exhaustive_n);
    Ok(vec![agree.finish(), keep.finish()])
}

/// Draw `i` of the path-missing pools: mixed paths, matchings and path
/// composites.
fn path_missing_instance(s: &Scale, salt: u64, i: u64, max_n: usize) -> Result<OrientedGraph> {
    let seed = s.draw(salt, i);
    match i % 3 {
        0 => {
            let n = 3 + (seed % (max_n as u64 - 2)) as usize;
            let k = 1 + (seed / 11) as usize % (n / 3);
            let m = (seed / 101) as usize % ((n - 3 * k) / 2 + 1);
            random_instance(&InstanceSpec { k, m, ..InstanceSpec::new(InstanceClass::MissingPathsMixed, n, seed) })
        }
        1 => {
            let n = 2 + (seed % (max_n as u64 - 1)) as usize;
            random_instance(&InstanceSpec { k: (seed / 13) as usize % (n / 2 + 1), ..InstanceSpec::new(InstanceClass::MissingMatching, n, seed) })
        }
        _ => random_paths_composite(max_n, (seed % 2) as usize, seed),
    }
}

fn delta_degree(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut deg = Check::new("delta-degree.bound");
    let mut outs = Check::new("delta-degree.out-neighbours-share-vertex");
    let mut ins = Check::new("delta-degree.in-neighbours-share-vertex");
    let max_n = s.n(12, 10);
    let share = |e: (usize, usize), f: (usize, usize)| e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
    for i in 0..s.seeds(1000, 200) {
        let g = path_missing_instance(s, 4, i, max_n)?;
        let d = analyze(&g).delta;
        deg.instance(&g);
        outs.instance(&g);
        ins.instance(&g);
        for v in 0..d.len() {
            deg.ensure(d.in_degree(v) <= 2 && d.out_degree(v) <= 2, || {
                format!("node {:?}: in {} out {}", d.nodes[v], d.in_degree(v), d.out_degree(v))
            });
            for (list, check) in [(d.out_neighbors(v), &mut outs), (d.in_neighbors(v), &mut ins)] {
                for (p, &e1) in list.iter().enumerate() {
                    for &e2 in &list[p + 1..] {
                        let (x, y) = (d.nodes[e1], d.nodes[e2]);
                        check.ensure(share(x, y), || format!("neighbours {x:?} and {y:?} of {:?} are disjoint", d.nodes[v]));
                    }
                }
            }
        }
    }
    Ok(vec![deg.finish(), outs.finish(), ins.finish()])
}

/// Checks the feed inequality for every `x` in `J(f)` on one good digraph.
pub fn feed_inequality_holds(g: &OrientedGraph, cap: usize) -> Result<std::result::Result<(), String>> {
    let a = analyze(g);
    let l = good_median_order_with(g, &a.partition(), cap)?;
    let oa = classify_vertices(g, &l.seq)?;
    let jf = a.j(oa.feed);
    let good_w = g.weight_of(oa.good.difference(jf));
    for x in jf.iter() {
        let out_w = g.weight_of(g.out(x).difference(jf));
        if out_w > good_w && !weights_equal(out_w, good_w) {
            return Ok(Err(format!("x = {x} in J(f) = {jf}: ω(N+(x) \\ J) = {out_w} > ω(G_L \\ J) = {good_w}")));
        }
    }
    Ok(Ok(()))
}

fn feed_inequality(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut c = Check::new("feed-inequality");
    let max_n = s.n(12, 10);
    for i in 0..s.seeds(500, 100) {
        let seed = s.draw(5, i);
        let g = random_weights(&random_good_instance(max_n, seed)?, seed);
        c.instance(&g);
        if let Some(Err(msg)) = c.expect("good median order", feed_inequality_holds(&g, s.exact_cap)) {
            c.fail(msg);
        }
    }
    Ok(vec![c.finish()])
}

/// Iterates sedimentation from a good median order of `g` and checks every
/// iterate. Returns the class tag.
pub fn check_sedimentation(g: &OrientedGraph, l: &LinearOrder, blocks: &[VertexSet]) -> std::result::Result<&'static str, String> {
    let class = sedimentation_class(g, l, blocks, DEFAULT_SED_BUDGET).map_err(|e| e.to_string())?;
    let (tag, visited) = match &class {
        SedClass::Stable { .. } => ("stable", None),
        SedClass::Periodic { visited, .. } => ("periodic", Some(visited)),
    };
    let mut orders = vec![l.clone()];
    if let SedClass::Stable { rank, .. } = &class {
        let mut cur = l.clone();
        for _ in 0..*rank {
            cur = crate::order::sedimentation(g, &cur, blocks).map_err(|e| e.to_string())?;
            orders.push(cur.clone());
        }
    }
    for o in visited.into_iter().flatten().chain(&orders) {
        let w = crate::order::order_weight(g, &o.seq).map_err(|e| e.to_string())?;
        if !weights_equal(w, l.weight) {
            return Err(format!("iterate {o} has weight {w}, L has {}", l.weight));
        }
        if !blocks_contiguous(&o.seq, blocks) {
            return Err(format!("iterate {o} splits a block"));
        }
    }
    Ok(tag)
}

fn sed_on(c: &mut Check, g: &OrientedGraph, l: Option<LinearOrder>) {
    let a = analyze(g);
    let blocks = a.partition();
    let l = match l {
        Some(l) => l,
        None => match c.expect("good median order", good_median_order_with(g, &blocks, crate::order::DEFAULT_EXACT_CAP)) {
            Some(l) => l,
            None => return,
        },
    };
    c.instance(g);
    match check_sedimentation(g, &l, &blocks) {
        Ok(tag) => c.bump(tag),
        Err(msg) => c.fail(msg),
    }
}

fn sedimentation_suite(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut tour = Check::new("sedimentation.tournaments");
    let n = s.n(6, 5).min(6);
    for g in enumerate_tournaments(n)? {
        sed_on(&mut tour, &g, None);
    }
    let mut good = Check::new("sedimentation.good-digraphs");
    let mut completed = Check::new("sedimentation.completions");
    let mut stars = Check::new("sedimentation.two-star-tournaments");
    for i in 0..s.seeds(300, 60) {
        let seed = s.draw(6, i);
        let g = random_weights(&random_good_instance(12, seed)?, seed);
        sed_on(&mut good, &g, None);
        let g = random_delta_path_instance(12, seed)?;
        if let Some(c) = completed.expect("completion", good_completion(&g)) {
            sed_on(&mut completed, &c.completed, None);
        }
        if let Some(g) = two_star_instance(seed, 9) {
            let Ok(st) = detect_two_stars(&g) else { continue };
            if let Some(t) = stars.expect("two stars", run_decomposition(&g, st.canonical())) {
                let y = t.decomposition.y;
                let (dy, map) = g.induced_set(g.vertices().without(y));
                let local = |v: usize| map.iter().position(|&u| u == v).unwrap();
                let arcs: Vec<_> = t.completion_arcs.iter().map(|&(u, v)| (local(u), local(v))).collect();
                let tt = dy.with_arcs(&arcs)?;
                let l = LinearOrder { certified: true, ..LinearOrder::new(&tt, t.order.iter().map(|&v| local(v)).collect())? };
                sed_on(&mut stars, &tt, Some(l));
            }
        }
    }
    Ok(vec![tour.finish(), good.finish(), completed.finish(), stars.finish()])
}

fn completion_suite(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut matching = Check::new("good-completion.matching");
    let mut paths = Check::new("good-completion.delta-paths");
    let run = |c: &mut Check, g: &OrientedGraph| {
        c.instance(g);
        let Some(comp) = c.expect("completion", good_completion(g)) else { return };
        if let Some(o) = c.expect("certificate", trace_completion(g, &comp, false)) {
            c.ensure(o.certificate.holds_in(g), || format!("certificate {} does not hold", o.certificate));
            c.bump(&o.case.to_string());
        }
    };
    for i in 0..s.seeds(1000, 150) {
        let seed = s.draw(7, i);
        let n = 2 + (seed % 11) as usize;
        let spec = InstanceSpec { k: (seed / 11) as usize % (n / 2 + 1), ..InstanceSpec::new(InstanceClass::MissingMatching, n, seed) };
        run(&mut matching, &random_instance(&spec)?);
    }
    for i in 0..s.seeds(1000, 150) / 2 {
        run(&mut paths, &random_delta_path_instance(12, s.draw(8, i))?);
    }
    Ok(vec![matching.finish(), paths.finish()])
}

/// A seeded two-star instance on at most `max_n` vertices, cycling through
/// the three cases.
pub fn two_star_instance(seed: u64, max_n: usize) -> Option<OrientedGraph> {
    let case = [StarCase::Disjoint, StarCase::AdjacentCenters, StarCase::SharedLeaves][(seed % 3) as usize];
    let n = 3 + (seed / 3 % (max_n as u64 - 2)) as usize;
    let room = n - 2;
    let p = (seed / 29) as usize % (room + 1);
    let q = (seed / 31) as usize % (room - p + 1);
    let mut spec = InstanceSpec { p, q, ..InstanceSpec::new(InstanceClass::MissingTwoStars(case), n, seed) };
    if case == StarCase::SharedLeaves {
        spec.p = p.max(1);
        spec.q = q.max(1);
        spec.s = 1 + (seed / 37) as usize % spec.p.min(spec.q);
    }
    random_instance(&spec).ok()
}

fn star_checks(c: &mut Check, g: &OrientedGraph) {
    let Ok(st) = detect_two_stars(g) else {
        c.skip();
        return;
    };
    c.instance(g);
    for dec in &st.decompositions {
        if let Some(t) = c.expect("construction", run_decomposition(g, dec)) {
            c.ensure(t.certificate.holds_in(g), || format!("certificate {} does not hold", t.certificate));
            c.bump(&format!("{}/{}", dec.case, t.branch));
        }
    }
}

fn two_stars(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut ex = Check::new("two-stars.exhaustive");
    let n = s.n(5, 4).min(5);
    for m in 1..=n {
        for g in enumerate_oriented_graphs(m)? {
            if !g.missing_graph().edges.is_empty() {
                star_checks(&mut ex, &g);
            }
        }
    }
    ex.set("max_n", n);
    let mut rnd = Check::new("two-stars.seeded");
    for i in 0..s.seeds(2000, 300) {
        match two_star_instance(s.draw(9, i), 9) {
            Some(g) => star_checks(&mut rnd, &g),
            None => rnd.skip(),
        }
    }
    Ok(vec![ex.finish(), rnd.finish()])
}

/// Every certified double-cycle template for `k`, or a seeded sample when
/// there are more than `limit` templates.
pub fn double_cycle_instances(k: usize, limit: u64, seed: u64) -> Vec<(OrientedGraph, DoubleCycle)> {
    let pb = k * (k - 1) / 2;
    let bits = pb + k;
    let total = if bits >= 63 { u64::MAX } else { 1u64 << bits };
    let codes: Vec<u64> = if total <= limit {
        (0..total).collect()
    } else {
        (0..limit).map(|i| (seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15)) % total).collect()
    };
    codes
        .into_iter()
        .filter_map(|code| {
            let g = double_cycle_candidate(k, code & ((1 << pb) - 1), code >> pb);
            certify_double_cycle(&g, k).map(|dc| (g, dc))
        })
        .collect()
}

fn double_cycle_ks(s: &Scale) -> Vec<usize> {
    match s.k {
        Some(k) => vec![k],
        None if s.quick => vec![2, 3, 4],
        None => vec![2, 3, 4, 5],
    }
}

fn double_cycle_suite(s: &Scale, only: Option<&str>) -> Result<Vec<CheckRecord>> {
    let mut rel = Check::new("double-cycle-relations");
    let mut twins = Check::new("double-cycle-twins");
    let mut second = Check::new("double-cycle-second-nbhd");
    let mut end = Check::new("double-cycle-end-counting");
    let mut center = Check::new("double-cycle-center-counting");
    let limit = s.seeds(1 << 15, 1 << 10);
    let mut found = serde_json::Map::new();
    for k in double_cycle_ks(s) {
        let inst = double_cycle_instances(k, limit, s.seed);
        found.insert(k.to_string(), json!(inst.len()));
        for (g, dc) in &inst {
            let (h, l) = dc.local(g);
            for c in [&mut rel, &mut twins, &mut second, &mut end, &mut center] {
                c.instance(g);
            }
            rel.expect("relations", check_relation_table(&h, &l));
            twins.expect("twins", check_twins(&h, &l));
            second.expect("second neighbourhoods", check_second_neighbourhoods(&h, &l));
            if let Some(r) = end.expect("end", snp_in_double_cycle_end(g, dc)) {
                end.bump(if r.vertex == dc.c(r.s) { "c-branch" } else { "a-branch" });
                end.bump(if r.next_is_out { "next-out" } else { "next-not-out" });
                if r.m2_tournament != r.m2 {
                    end.bump("tournament-m2-differs");
                }
            }
            if let Some(r) = center.expect("center", snp_in_double_cycle_center(g, dc)) {
                center.bump(if r.next_is_in { "next-in" } else { "next-not-in" });
            }
        }
        if inst.is_empty() {
            for c in [&mut rel, &mut twins, &mut second, &mut end, &mut center] {
                c.bump(&format!("not-found-k{k}"));
            }
        }
    }
    let mut out = Vec::new();
    for mut c in [rel, twins, second, end, center] {
        c.set("certified_per_k", &found);
        let r = c.finish();
        if only.is_none_or(|t| t == r.id) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Embeds a double cycle next to whole vertices with arbitrary (not
/// interval-respecting) arcs. `K(C)` must be an interval whenever the
/// double cycle survives.
fn double_cycle_interval(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut kept = Check::new("double-cycle-interval.uniform-embedding");
    let mut free = Check::new("double-cycle-interval.free-embedding");
    for i in 0..s.seeds(500, 100) {
        let seed = s.draw(10, i);
        let k = 2 + (seed % 2) as usize;
        let g = composite_instance(&[Module::DoubleCycle(k)], 1 + (seed / 2 % 4) as usize, 0, seed)?;
        kept.instance(&g);
        for dc in find_double_cycles(&g, &analyze(&g)) {
            kept.ensure(is_interval(&g, dc.support()), || format!("K(C) = {} is not an interval", dc.support()));
        }
        // Re-orient every arc between K(C) and the outside at random.
        let a = analyze(&g);
        let Some(dc) = find_double_cycles(&g, &a).into_iter().next() else { continue };
        let support = dc.support();
        let mut arcs: Vec<(usize, usize)> = g.arcs().into_iter().filter(|&(u, v)| support.contains(u) == support.contains(v)).collect();
        let mut bits = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        for u in support.iter() {
            for v in g.vertices().difference(support).iter() {
                bits = bits.rotate_left(7) ^ 0x5851_f42d_4c95_7f2d;
                arcs.push(if bits & 1 == 1 { (u, v) } else { (v, u) });
            }
        }
        let h = OrientedGraph::new(g.n(), &arcs)?;
        free.instance(&h);
        let ha = analyze(&h);
        let survived = find_double_cycles(&h, &ha).into_iter().any(|d| d.support() == support);
        let interval = is_interval(&h, support);
        free.bump(match (survived, interval) {
            (true, true) => "survived-interval",
            (true, false) => "survived-not-interval",
            (false, true) => "broken-interval",
            (false, false) => "broken-not-interval",
        });
        free.ensure(!survived || interval, || format!("double cycle on {support} survived but is not an interval"));
    }
    Ok(vec![kept.finish(), free.finish()])
}

fn cycle_parity(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut c = Check::new("cycle-parity");
    let max_k = s.k.unwrap_or(if s.quick { 5 } else { 7 });
    for i in 0..s.seeds(500, 100) {
        let seed = s.draw(11, i);
        let k = 2 + (seed % (max_k as u64 - 1)) as usize;
        let g = match random_matching_cycle_instance(k, seed) {
            Ok(g) => g,
            Err(Error::NotFound(_)) => {
                c.skip();
                continue;
            }
            Err(e) => return Err(e),
        };
        c.instance(&g);
        let a = analyze(&g);
        let comp = &a.components[0];
        let Some(cycle) = as_directed_cycle(&a.delta, &comp.nodes) else {
            c.fail(format!("k = {k}: component is not a directed cycle"));
            continue;
        };
        match label_cycle(&a.delta, &cycle) {
            Some(labels) => {
                c.expect("parity", check_cycle_parity(&g, &labels));
                c.bump(if k.is_multiple_of(2) { "even" } else { "odd" });
            }
            None => c.fail(format!("k = {k}: cycle cannot be labelled")),
        }
    }
    Ok(vec![c.finish()])
}

fn mixed_paths(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut comp = Check::new("mixed-paths.composites");
    let mut rnd = Check::new("mixed-paths.random");
    let max_n = s.n(14, 12);
    for i in 0..s.seeds(500, 100) {
        let seed = s.draw(12, i);
        let g = random_paths_composite(max_n, (seed % 3) as usize, seed)?;
        comp.instance(&g);
        if let Some(cert) = comp.expect("paths", find_snp_paths(&g)) {
            comp.ensure(cert.holds_in(&g), || format!("certificate {cert} does not hold"));
            comp.bump(&cert.method.to_string());
        }
        // Random orientations rarely put every 2-path in a double cycle;
        // those draws fall outside the hypothesis and are skipped.
        let g = path_missing_instance(s, 13, i, max_n)?;
        match find_snp_paths(&g) {
            Ok(cert) => {
                rnd.instance(&g);
                rnd.ensure(cert.holds_in(&g), || format!("certificate {cert} does not hold"));
                rnd.bump(&cert.method.to_string());
            }
            Err(Error::HypothesisFailed(_)) => rnd.skip(),
            Err(e) => {
                rnd.instance(&g);
                rnd.fail(e.to_string());
            }
        }
    }
    Ok(vec![comp.finish(), rnd.finish()])
}

/// Runs the two-SNP construction on one instance; sinks and instances
/// outside the hypothesis are skipped.
pub fn two_snp_check(c: &mut Check, g: &OrientedGraph, cap: usize) {
    if !g.sinks().is_empty() || !analyze(g).is_good() {
        c.skip();
        return;
    }
    c.instance(g);
    if let Some(r) = c.expect("no-sink", find_two_snp_no_sink_with(g, cap, DEFAULT_SED_BUDGET)) {
        c.ensure(r.first.vertex != r.second.vertex && r.first.holds_in(g) && r.second.holds_in(g), || {
            format!("certificates {} and {}", r.first, r.second)
        });
        c.bump(&r.case.to_string());
    }
}

fn two_snp(s: &Scale) -> Result<Vec<CheckRecord>> {
    let mut comp = Check::new("two-snp-no-sink.composites");
    let mut cyc = Check::new("two-snp-no-sink.matching-cycles");
    let max_n = s.n(14, 12);
    for i in 0..s.seeds(500, 100) {
        let seed = s.draw(14, i);
        two_snp_check(&mut comp, &random_paths_composite(max_n, 0, seed)?, s.exact_cap);
        let k = 2 + (seed % (max_n as u64 / 2 - 1)) as usize;
        match random_matching_cycle_instance(k, seed) {
            Ok(g) => two_snp_check(&mut cyc, &g, s.exact_cap),
            Err(Error::NotFound(_)) => cyc.skip(),
            Err(e) => return Err(e),
        }
    }
    Ok(vec![comp.finish(), cyc.finish()])
}

/// Classes scanned by the counterexample target, with their size bound.
pub const SEARCH_CLASSES: &[(InstanceClass, usize)] = &[
    (InstanceClass::MissingMatching, 10),
    (InstanceClass::MissingTwoStars(StarCase::Disjoint), 8),
    (InstanceClass::MissingTwoStars(StarCase::AdjacentCenters), 8),
    (InstanceClass::MissingTwoStars(StarCase::SharedLeaves), 8),
    (InstanceClass::DoubleCycle, 12),
    (InstanceClass::MissingPathsMixed, 12),
];

fn counterexample(s: &Scale) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let tn = s.n(5, 5).min(6);
    let r = search_counterexample(InstanceClass::Tournament, tn, 0, s.seed);
    let mut c = Check::new("counterexample.tournament");
    if let Some(g) = &r.counterexample {
        c.instance(g);
        c.fail(format!("no SNP vertex: {}", r.counterexample_spec.clone().unwrap_or_default()));
    }
    c.set("examined", r.examined);
    c.set("exhaustive", r.exhaustive);
    out.push(c.finish());
    for &(class, max_n) in SEARCH_CLASSES {
        let r = search_counterexample(class, max_n, s.seeds(10_000, 500), s.draw(15, max_n as u64));
        let mut c = Check::new(format!("counterexample.{class}"));
        if let Some(g) = &r.counterexample {
            c.instance(g);
            c.fail(format!("no SNP vertex: {}", r.counterexample_spec.clone().unwrap_or_default()));
        }
        c.set("examined", r.examined);
        c.set("generator_skipped", r.skipped);
        c.set("max_n", max_n);
        out.push(c.finish());
    }
    out
}

/// Records in `records` that failed.
pub fn failures(records: &[CheckRecord]) -> Vec<&CheckRecord> {
    records.iter().filter(|r| !r.pass).collect()
}
