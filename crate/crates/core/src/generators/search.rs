use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{enumerate_tournaments, random_instance, InstanceClass, InstanceSpec, MAX_ENUM_TOURNAMENT};
use crate::error::Error;
use crate::graph::OrientedGraph;
use crate::stars::StarCase;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub class: InstanceClass,
    pub examined: u64,
    /// Instances the generator could not build (for example no double cycle
    /// for the drawn `k`).
    pub skipped: u64,
    pub exhaustive: bool,
    #[serde(skip)]
    pub counterexample: Option<OrientedGraph>,
    pub counterexample_spec: Option<String>,
}

/// Random parameters for one draw of `class` with at most `max_n` vertices.
fn draw_spec(class: InstanceClass, max_n: usize, rng: &mut ChaCha8Rng) -> Option<InstanceSpec> {
    let seed = rng.gen::<u64>();
    let min_n = match class {
        InstanceClass::Tournament | InstanceClass::MissingMatching => 1,
        InstanceClass::MissingTwoStars(_) => 3,
        InstanceClass::DoubleCycle => 6,
        InstanceClass::MissingPathsMixed => 3,
    };
    if max_n < min_n {
        return None;
    }
    let n = rng.gen_range(min_n..=max_n);
    let mut spec = InstanceSpec::new(class, n, seed);
    match class {
        InstanceClass::Tournament => {}
        InstanceClass::MissingMatching => spec.k = rng.gen_range(0..=n / 2),
        InstanceClass::MissingTwoStars(case) => {
            let room = n - 2;
            spec.p = rng.gen_range(0..=room);
            spec.q = rng.gen_range(0..=room - spec.p);
            if case == StarCase::SharedLeaves {
                spec.p = spec.p.max(1);
                spec.q = spec.q.max(1);
                let most = spec.p.min(spec.q);
                let least = (spec.p + spec.q).saturating_sub(room).max(1);
                if least > most {
                    return None;
                }
                spec.s = rng.gen_range(least..=most);
            }
        }
        InstanceClass::DoubleCycle => spec.k = rng.gen_range(2..=(n / 3).min(5)),
        InstanceClass::MissingPathsMixed => {
            spec.k = rng.gen_range(1..=n / 3);
            spec.m = rng.gen_range(0..=(n - 3 * spec.k) / 2);
        }
    }
    Some(spec)
}

/// Looks for a graph of `class` in which no vertex has the SNP.
///
/// Tournaments with `max_n <= 6` are enumerated exhaustively for every
/// `n <= max_n`; otherwise `budget` seeded random instances are drawn.
pub fn search_counterexample(class: InstanceClass, max_n: usize, budget: u64, seed: u64) -> SearchReport {
    let mut report =
        SearchReport { class, examined: 0, skipped: 0, exhaustive: false, counterexample: None, counterexample_spec: None };
    if class == InstanceClass::Tournament && max_n <= MAX_ENUM_TOURNAMENT {
        report.exhaustive = true;
        for n in 1..=max_n {
            for g in enumerate_tournaments(n).expect("n is within the enumeration cap") {
                report.examined += 1;
                if g.snp_vertices().is_empty() {
                    report.counterexample_spec = Some(format!("tournament on {n} vertices"));
                    report.counterexample = Some(g);
                    return report;
                }
            }
        }
        return report;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let Some(spec) = draw_spec(class, max_n, &mut rng) else {
            report.skipped += 1;
            continue;
        };
        match random_instance(&spec) {
            Ok(g) => {
                report.examined += 1;
                if g.snp_vertices().is_empty() {
                    report.counterexample_spec = Some(spec.to_string());
                    report.counterexample = Some(g);
                    return report;
                }
            }
            Err(Error::NotFound(_)) | Err(Error::Infeasible(_)) => report.skipped += 1,
            Err(e) => panic!("generator failed on {spec}: {e}"),
        }
    }
    report
}
