//! Instance enumerators, seeded random generators and counterexample search.
//!
//! Every random generator is a pure function of its parameters and seed
//! (ChaCha8), and every generated graph is checked against the shape it was
//! asked for before it is returned.

mod pools;
mod search;
mod structured;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use pools::{random_delta_path_instance, random_good_instance, random_paths_composite};
pub use search::{search_counterexample, SearchReport};
pub use structured::{
    certify_double_cycle, composite_instance, double_cycle_candidate, double_cycle_census, matching_cycle_candidate,
    random_double_cycle_instance, random_matching_cycle_instance, Census, Module,
};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::stars::StarCase;

/// Largest `n` accepted by [`enumerate_tournaments`].
pub const MAX_ENUM_TOURNAMENT: usize = 6;
/// Largest `n` accepted by [`enumerate_oriented_graphs`].
pub const MAX_ENUM_ORIENTED: usize = 5;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// All `2^(n(n-1)/2)` labelled tournaments; bit `i` orients the `i`-th pair
/// `u < v` as `u -> v`.
pub fn enumerate_tournaments(n: usize) -> Result<impl Iterator<Item = OrientedGraph>> {
    if n > MAX_ENUM_TOURNAMENT {
        return Err(Error::TooLarge { n, cap: MAX_ENUM_TOURNAMENT });
    }
    let ps = pairs(n);
    Ok((0u64..1 << ps.len()).map(move |bits| {
        let arcs: Vec<_> = ps.iter().enumerate().map(|(i, &(u, v))| if bits >> i & 1 == 1 { (u, v) } else { (v, u) }).collect();
        OrientedGraph::new(n, &arcs).expect("pairs are distinct")
    }))
}

/// All `3^(n(n-1)/2)` labelled oriented graphs; each pair is missing,
/// forward or backward.
pub fn enumerate_oriented_graphs(n: usize) -> Result<impl Iterator<Item = OrientedGraph>> {
    if n > MAX_ENUM_ORIENTED {
        return Err(Error::TooLarge { n, cap: MAX_ENUM_ORIENTED });
    }
    let ps = pairs(n);
    let total = 3u64.pow(ps.len() as u32);
    Ok((0..total).map(move |mut code| {
        let mut arcs = Vec::new();
        for &(u, v) in &ps {
            match code % 3 {
                1 => arcs.push((u, v)),
                2 => arcs.push((v, u)),
                _ => {}
            }
            code /= 3;
        }
        OrientedGraph::new(n, &arcs).expect("pairs are distinct")
    }))
}

/// Orients every pair outside `missing` uniformly at random.
pub fn orient_except(n: usize, missing: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Result<OrientedGraph> {
    let norm: Vec<(usize, usize)> = missing.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let arcs: Vec<_> = pairs(n)
        .into_iter()
        .filter(|p| !norm.contains(p))
        .map(|(u, v)| if rng.gen::<bool>() { (u, v) } else { (v, u) })
        .collect();
    OrientedGraph::new(n, &arcs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceClass {
    Tournament,
    MissingMatching,
    MissingTwoStars(StarCase),
    /// `k` disjoint missing paths of length 2 forming one double cycle,
    /// plus `n - 3k` whole vertices.
    DoubleCycle,
    /// `k` missing paths of length 2 and `m` missing edges, all disjoint.
    MissingPathsMixed,
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceClass::Tournament => f.write_str("tournament"),
            InstanceClass::MissingMatching => f.write_str("missing-matching"),
            InstanceClass::MissingTwoStars(c) => write!(f, "missing-two-stars:{c}"),
            InstanceClass::DoubleCycle => f.write_str("missing-paths-len2-double-cycle"),
            InstanceClass::MissingPathsMixed => f.write_str("missing-paths-mixed"),
        }
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tournament" => InstanceClass::Tournament,
            "missing-matching" => InstanceClass::MissingMatching,
            "missing-two-stars" | "missing-two-stars:disjoint" => InstanceClass::MissingTwoStars(StarCase::Disjoint),
            "missing-two-stars:adjacent-centers" => InstanceClass::MissingTwoStars(StarCase::AdjacentCenters),
            "missing-two-stars:shared-leaves" => InstanceClass::MissingTwoStars(StarCase::SharedLeaves),
            "missing-paths-len2-double-cycle" => InstanceClass::DoubleCycle,
            "missing-paths-mixed" => InstanceClass::MissingPathsMixed,
            _ => return Err(Error::Infeasible(format!("unknown instance class '{s}'"))),
        })
    }
}

/// Class plus size parameters and seed.
///
/// * `k`: matching edges, or length-2 paths for the path classes;
/// * `m`: extra missing edges for the mixed class;
/// * `p`, `q`, `s`: leaves of the two stars and how many are shared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub class: InstanceClass,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(class: InstanceClass, n: usize, seed: u64) -> Self {
        InstanceSpec { class, n, k: 0, m: 0, p: 0, q: 0, s: 0, seed }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},n={}", self.class, self.n)?;
        match self.class {
            InstanceClass::Tournament => {}
            InstanceClass::MissingMatching | InstanceClass::DoubleCycle => write!(f, ",k={}", self.k)?,
            InstanceClass::MissingTwoStars(_) => write!(f, ",p={},q={},s={}", self.p, self.q, self.s)?,
            InstanceClass::MissingPathsMixed => write!(f, ",k={},m={}", self.k, self.m)?,
        }
        write!(f, ",seed={}", self.seed)
    }
}

impl FromStr for InstanceSpec {
    type Err = Error;

    /// `class,key=value,...` with keys `n k m p q s seed`.
    fn from_str(text: &str) -> Result<Self> {
        let mut parts = text.split(',');
        let class: InstanceClass = parts.next().unwrap_or("").trim().parse()?;
        let mut spec = InstanceSpec::new(class, 0, 0);
        for part in parts {
            let (key, value) =
                part.split_once('=').ok_or_else(|| Error::Infeasible(format!("expected key=value, got '{part}'")))?;
            let bad = |_| Error::Infeasible(format!("bad value '{value}' for {key}"));
            let value = value.trim();
            match key.trim() {
                "n" => spec.n = value.parse().map_err(bad)?,
                "k" => spec.k = value.parse().map_err(bad)?,
                "m" => spec.m = value.parse().map_err(bad)?,
                "p" => spec.p = value.parse().map_err(bad)?,
                "q" => spec.q = value.parse().map_err(bad)?,
                "s" => spec.s = value.parse().map_err(bad)?,
                "seed" => spec.seed = value.parse().map_err(bad)?,
                other => return Err(Error::Infeasible(format!("unknown key '{other}'"))),
            }
        }
        Ok(spec)
    }
}

/// The missing edges `spec` asks for, on vertices `0..`; `None` for the
/// double-cycle class, whose layout comes from the structured search.
fn planned_missing(spec: &InstanceSpec) -> Result<Vec<(usize, usize)>> {
    let infeasible = |msg: String| Err(Error::Infeasible(msg));
    let n = spec.n;
    Ok(match spec.class {
        InstanceClass::Tournament => vec![],
        InstanceClass::MissingMatching => {
            if 2 * spec.k > n {
                return infeasible(format!("{} disjoint edges need {} vertices, n = {n}", spec.k, 2 * spec.k));
            }
            (0..spec.k).map(|i| (2 * i, 2 * i + 1)).collect()
        }
        InstanceClass::MissingTwoStars(case) => {
            let (p, q) = (spec.p, spec.q);
            let s = if case == StarCase::SharedLeaves { spec.s.max(1) } else { 0 };
            if s > p.min(q) {
                return infeasible(format!("cannot share {s} leaves between stars with {p} and {q} leaves"));
            }
            if 2 + p + q - s > n {
                return infeasible(format!("two stars with {p} and {q} leaves need {} vertices, n = {n}", 2 + p + q - s));
            }
            let (x, y) = (0, 1);
            let mut edges: Vec<(usize, usize)> = (0..p).map(|i| (x, 2 + i)).collect();
            // y's leaves reuse the last s leaves of x.
            edges.extend((0..q).map(|i| (y, 2 + p - s + i)));
            if case == StarCase::AdjacentCenters {
                edges.push((x, y));
            }
            edges
        }
        InstanceClass::DoubleCycle => {
            if spec.k < 2 || 3 * spec.k > n {
                return infeasible(format!("a double cycle with k = {} needs k >= 2 and 3k <= n = {n}", spec.k));
            }
            vec![]
        }
        InstanceClass::MissingPathsMixed => {
            if 3 * spec.k + 2 * spec.m > n {
                return infeasible(format!("{} paths and {} edges need {} vertices, n = {n}", spec.k, spec.m, 3 * spec.k + 2 * spec.m));
            }
            let mut edges: Vec<(usize, usize)> = (0..spec.k).flat_map(|i| [(3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2)]).collect();
            edges.extend((0..spec.m).map(|i| (3 * spec.k + 2 * i, 3 * spec.k + 2 * i + 1)));
            edges
        }
    })
}

/// A random graph of the requested class. Vertex labels are shuffled, the
/// remaining pairs are oriented uniformly, and the missing graph is
/// compared with the plan before returning.
pub fn random_instance(spec: &InstanceSpec) -> Result<OrientedGraph> {
    if spec.n > crate::vertex_set::MAX_VERTICES {
        return Err(Error::TooManyVertices { n: spec.n, max: crate::vertex_set::MAX_VERTICES });
    }
    let plan = planned_missing(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if spec.class == InstanceClass::DoubleCycle {
        let block = random_double_cycle_instance(spec.k, spec.seed)?;
        return composite_instance(&[Module::Graph(block)], spec.n - 3 * spec.k, 0, spec.seed);
    }
    let mut perm: Vec<usize> = (0..spec.n).collect();
    perm.shuffle(&mut rng);
    let missing: Vec<(usize, usize)> = plan.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    let g = orient_except(spec.n, &missing, &mut rng)?;

    let mut want: Vec<(usize, usize)> = missing.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    want.sort_unstable();
    if g.missing_graph().edges != want {
        return Err(Error::proof("class fidelity", format!("missing graph of {spec} differs from the plan")));
    }
    Ok(g)
}

/// Vertex weights drawn from `{1, 2, 0.5}`.
pub fn random_weights(g: &OrientedGraph, seed: u64) -> OrientedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..g.n()).map(|_| *[1.0, 2.0, 0.5].choose(&mut rng).unwrap()).collect();
    g.with_weights(&w).expect("weights are positive")
}

/// A random oriented graph on `n` vertices: each pair is missing with
/// probability `p_missing`, otherwise oriented uniformly.
pub fn random_oriented_graph(n: usize, p_missing: f64, seed: u64) -> Result<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for (u, v) in pairs(n) {
        if rng.gen::<f64>() < p_missing {
            continue;
        }
        arcs.push(if rng.gen::<bool>() { (u, v) } else { (v, u) });
    }
    OrientedGraph::new(n, &arcs)
}
