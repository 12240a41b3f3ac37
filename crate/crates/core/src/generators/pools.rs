//! Seeded instance pools used by the verification suites: good digraphs,
//! digraphs whose Δ has a long directed path, and composites of double
//! cycles and Δ cycles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{composite_instance, random_instance, random_oriented_graph, InstanceClass, InstanceSpec, Module};
use crate::dependency::{analyze, Shape};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

/// Draws per pool before giving up.
const POOL_TRIES: usize = 10_000;

/// A small good digraph with at least one missing edge, by rejection.
fn small_good_module(n: usize, rng: &mut ChaCha8Rng) -> Option<OrientedGraph> {
    (0..POOL_TRIES).find_map(|_| {
        let g = random_oriented_graph(n, 0.35, rng.gen()).ok()?;
        (!g.missing_graph().edges.is_empty() && analyze(&g).is_good()).then_some(g)
    })
}

/// A good digraph on at most `max_n` vertices: up to two good modules
/// (double cycles, Δ cycles of a matching, small random good digraphs)
/// substituted as intervals next to whole vertices.
pub fn random_good_instance(max_n: usize, seed: u64) -> Result<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modules = Vec::new();
    let mut used = 0;
    for _ in 0..rng.gen_range(1..=2) {
        let m = match rng.gen_range(0..3) {
            0 => Module::DoubleCycle(2),
            1 => Module::MatchingCycle(rng.gen_range(2..=3)),
            _ => match small_good_module(rng.gen_range(3..=5), &mut rng) {
                Some(g) => Module::Graph(g),
                None => continue,
            },
        };
        let size = match &m {
            Module::DoubleCycle(k) => 3 * k,
            Module::MatchingCycle(k) => 2 * k,
            Module::Graph(g) => g.n(),
        };
        if used + size <= max_n {
            used += size;
            modules.push(m);
        }
    }
    let whole = rng.gen_range(usize::from(modules.is_empty())..=max_n - used);
    let g = composite_instance(&modules, whole, 0, rng.gen())?;
    if !analyze(&g).is_good() {
        return Err(Error::proof("good instance", "composite of good modules is not good"));
    }
    Ok(g)
}

/// A digraph missing a matching, `4 <= n <= max_n`, whose Δ has a directed
/// path of at least two nodes.
pub fn random_delta_path_instance(max_n: usize, seed: u64) -> Result<OrientedGraph> {
    if max_n < 4 {
        return Err(Error::Infeasible(format!("a Δ path of two edges needs n >= 4, got {max_n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..POOL_TRIES {
        let n = rng.gen_range(4..=max_n);
        let spec = InstanceSpec { k: rng.gen_range(2..=n / 2), ..InstanceSpec::new(InstanceClass::MissingMatching, n, rng.gen()) };
        let g = random_instance(&spec)?;
        if analyze(&g).components.iter().any(|c| c.shape == Shape::Path && c.nodes.len() >= 2) {
            return Ok(g);
        }
    }
    Err(Error::Infeasible(format!("no Δ path of two edges in {POOL_TRIES} draws with n <= {max_n}")))
}

/// Double cycles and Δ cycles of a matching with `k <= 4`, whole vertices
/// and `matching` extra missing edges, on at most `max_n` vertices. At
/// least one module is present.
pub fn random_paths_composite(max_n: usize, matching: usize, seed: u64) -> Result<OrientedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let room = max_n
        .checked_sub(2 * matching + 4)
        .ok_or_else(|| Error::Infeasible(format!("{matching} extra edges and a module do not fit in {max_n} vertices")))?;
    let mut modules = Vec::new();
    let mut left = room + 4;
    while modules.is_empty() || (left >= 4 && rng.gen_bool(0.5)) {
        let (m, size) = if left >= 6 && rng.gen_bool(0.5) {
            let k = rng.gen_range(2..=(left / 3).min(4));
            (Module::DoubleCycle(k), 3 * k)
        } else {
            let k = rng.gen_range(2..=(left / 2).min(4));
            (Module::MatchingCycle(k), 2 * k)
        };
        modules.push(m);
        left -= size;
    }
    let whole = rng.gen_range(0..=left);
    composite_instance(&modules, whole, matching, rng.gen())
}
