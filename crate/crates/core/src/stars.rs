//! SNP vertices of digraphs whose missing edges form two stars.
//!
//! With centers `x` and `y`, where `y -> x` or `(y, x)` is the convenient
//! orientation of the missing edge `xy`: delete `y`, orient the remaining
//! star edges conveniently to get a tournament `T`, and take a median order
//! of `T` that puts `x` as late as possible. Its feed is the answer. The
//! branches of the argument are evaluated as runtime guards; a guard that
//! fires reports an error instead of a wrong vertex.

use std::fmt;

use serde::Serialize;

use crate::certificate::{Method, SnpCertificate};
use crate::dependency::{analyze, convenient_orientation};
use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::order::{classify_vertices, median_order_exact, order_weight, sedimentation, LinearOrder};
use crate::util::weights_equal;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarCase {
    Disjoint,
    /// The centers form a missing edge; no other vertex is shared.
    AdjacentCenters,
    /// Some leaf belongs to both stars.
    SharedLeaves,
}

impl fmt::Display for StarCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarCase::Disjoint => "disjoint",
            StarCase::AdjacentCenters => "adjacent-centers",
            StarCase::SharedLeaves => "shared-leaves",
        })
    }
}

/// Branch of the case analysis that produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarBranch {
    /// `(f, y)` is not an arc and `f` is off the star of `x`.
    OffYOutside,
    /// `(f, y)` is not an arc and `f` is `x` or one of its leaves; the
    /// missing edges at `f` are turned towards `f`.
    OffYInStar,
    /// `f -> y`, and `x` is a second out-neighbour not counted by `G_L`.
    ToYSecondX,
    /// `f -> y` with `|N+_T(f)| < |G_L|`.
    ToYStrict,
    /// As [`StarBranch::ToYSecondX`] after turning `f -> x` around.
    ToYReorientedSecondX,
    /// As [`StarBranch::ToYStrict`] after turning `f -> x` around.
    ToYReorientedStrict,
}

impl fmt::Display for StarBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarBranch::OffYOutside => "off-y-outside",
            StarBranch::OffYInStar => "off-y-in-star",
            StarBranch::ToYSecondX => "to-y-x-second",
            StarBranch::ToYStrict => "to-y-strict",
            StarBranch::ToYReorientedSecondX => "to-y-reoriented-x-second",
            StarBranch::ToYReorientedStrict => "to-y-reoriented-strict",
        })
    }
}

/// One way of covering the missing edges by two stars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StarDecomposition {
    pub x: usize,
    pub y: usize,
    pub leaves_x: VertexSet,
    pub leaves_y: VertexSet,
    pub case: StarCase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoStarStructure {
    /// Every center pair covering the missing graph, roles assigned, in
    /// canonical order (largest total missing degree first). The first one
    /// is used by [`find_snp_two_stars`].
    pub decompositions: Vec<StarDecomposition>,
}

impl TwoStarStructure {
    pub fn canonical(&self) -> &StarDecomposition {
        &self.decompositions[0]
    }
}

/// Assigns the `x`/`y` roles for the center pair `{p, q}`.
fn assign_roles(g: &OrientedGraph, p: usize, q: usize) -> Result<(usize, usize)> {
    if g.has_arc(p, q) {
        Ok((q, p))
    } else if g.has_arc(q, p) {
        Ok((p, q))
    } else {
        let (y, x) = convenient_orientation(g, (p, q))?;
        Ok((x, y))
    }
}

pub fn detect_two_stars(g: &OrientedGraph) -> Result<TwoStarStructure> {
    let mg = g.missing_graph();
    let n = g.n();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if mg.edges.iter().all(|&(u, v)| u == p || u == q || v == p || v == q) {
                pairs.push((p, q));
            }
        }
    }
    pairs.sort_by_key(|&(p, q)| (std::cmp::Reverse(mg.degree(p) + mg.degree(q)), p, q));
    let decompositions = pairs
        .into_iter()
        .map(|(p, q)| {
            let (x, y) = assign_roles(g, p, q)?;
            let leaves_x = mg.neighbors(x).without(y);
            let leaves_y = mg.neighbors(y).without(x);
            let case = if !leaves_x.is_disjoint(leaves_y) {
                StarCase::SharedLeaves
            } else if mg.contains(x, y) {
                StarCase::AdjacentCenters
            } else {
                StarCase::Disjoint
            };
            Ok(StarDecomposition { x, y, leaves_x, leaves_y, case })
        })
        .collect::<Result<Vec<_>>>()?;
    if decompositions.is_empty() {
        return Err(Error::NotTwoStars);
    }
    Ok(TwoStarStructure { decompositions })
}

/// Everything the construction computed, in original vertex labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarTrace {
    pub decomposition: StarDecomposition,
    /// Arcs added to `D - y` to make the tournament `T`.
    pub completion_arcs: Vec<(usize, usize)>,
    /// Median order of `T` maximising the index of `x`.
    pub order: Vec<usize>,
    pub alpha: usize,
    pub feed: usize,
    /// Arcs of `T` turned around before the final count.
    pub reoriented: Vec<(usize, usize)>,
    pub branch: StarBranch,
    pub certificate: SnpCertificate,
}

pub fn find_snp_two_stars(g: &OrientedGraph) -> Result<SnpCertificate> {
    let s = detect_two_stars(g)?;
    Ok(run_decomposition(g, s.canonical())?.certificate)
}

fn require(cond: bool, step: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::proof(step, detail()))
    }
}

/// Runs the construction for one decomposition.
pub fn run_decomposition(g: &OrientedGraph, dec: &StarDecomposition) -> Result<StarTrace> {
    let d = g.with_unit_weights();
    let (x, y) = (dec.x, dec.y);
    let keep: Vec<usize> = (0..d.n()).filter(|&v| v != y).collect();
    let local = |v: usize| if v < y { v } else { v - 1 };
    let (dm, _) = d.induced_set(d.vertices().without(y));

    let a = analyze(&dm);
    if let Some(i) = a.delta.good.iter().position(|&good| !good) {
        let (u, v) = a.delta.nodes[i];
        return Err(Error::proof("remove y", format!("missing edge {{{},{}}} of D - y is not good", keep[u], keep[v])));
    }
    let mut added = Vec::new();
    for &e in &a.delta.nodes {
        added.push(convenient_orientation(&dm, e)?);
    }
    let t = dm.with_arcs(&added)?;
    let xl = local(x);
    let l = median_order_exact(&t, Some(xl))?;
    let alpha = l.index_of(xl).unwrap();
    let fl = l.feed();
    let f = keep[fl];
    let in_star = f == x || dec.leaves_x.contains(f);
    let global = |s: VertexSet| -> VertexSet { s.iter().map(|v| keep[v]).collect() };

    // Turns the listed arcs of T around and checks L stays a median order.
    let reorient = |arcs: &[(usize, usize)]| -> Result<OrientedGraph> {
        let mut tp = t.clone();
        for &(u, v) in arcs {
            tp = tp.with_reversed(u, v)?;
        }
        let w = order_weight(&tp, &l.seq)?;
        let opt = median_order_exact(&tp, None)?.weight;
        require(weights_equal(w, opt), "reorient", || format!("L has weight {w} < {opt} after reorientation"))?;
        Ok(tp)
    };

    let (tstar, reoriented, branch) = if !d.has_arc(f, y) {
        if !in_star {
            (t.clone(), vec![], StarBranch::OffYOutside)
        } else {
            let flips: Vec<(usize, usize)> = added.iter().copied().filter(|&(u, _)| u == fl).collect();
            (reorient(&flips)?, flips, StarBranch::OffYInStar)
        }
    } else {
        require(f != x && !dec.leaves_y.contains(f), "feed beats y", || format!("feed {f} cannot be x or a leaf of y"))?;
        let flip = in_star && t.has_arc(fl, xl) && added.contains(&(fl, xl));
        if flip {
            (reorient(&[(fl, xl)])?, vec![(fl, xl)], StarBranch::ToYReorientedSecondX)
        } else {
            (t.clone(), vec![], StarBranch::ToYSecondX)
        }
    };

    let oa = classify_vertices(&tstar, &l.seq)?;
    let out_t = tstar.out(fl);
    let good = oa.good;
    require(out_t.len() <= good.len(), "feed inequality", || format!("|N+_T({f})| = {} > |G_L| = {}", out_t.len(), good.len()))?;
    require(global(good).is_subset(d.second_out(f)), "good vertices", || format!("G_L of {f} not inside N++_D({f})"))?;

    let branch = match branch {
        StarBranch::OffYOutside | StarBranch::OffYInStar => {
            require(d.out(f) == global(out_t), "out-neighbourhood", || format!("N+_D({f}) differs from N+_T({f})"))?;
            branch
        }
        _ => {
            require(d.out(f) == global(out_t).with(y), "out-neighbourhood", || format!("N+_D({f}) is not N+_T({f}) plus y"))?;
            let x_counted = out_t.contains(xl) || good.contains(xl);
            if x_counted && out_t.len() == good.len() {
                let sed = sedimentation(&tstar, &LinearOrder { seq: l.seq.clone(), weight: l.weight, certified: true }, &[])?;
                return Err(Error::proof(
                    "maximal index of x",
                    format!("x is counted and |N+_T(f)| = |G_L|; sedimentation moves x from {alpha} to {:?}", sed.index_of(xl)),
                ));
            }
            let reoriented_branch = branch == StarBranch::ToYReorientedSecondX;
            if !x_counted {
                require(d.second_out(f).contains(x), "x is second", || format!("x = {x} not in N++_D({f})"))?;
                if reoriented_branch { StarBranch::ToYReorientedSecondX } else { StarBranch::ToYSecondX }
            } else if reoriented_branch {
                StarBranch::ToYReorientedStrict
            } else {
                StarBranch::ToYStrict
            }
        }
    };

    let certificate = SnpCertificate::validate(&d, f, Method::TwoStars(dec.case, branch))?;
    Ok(StarTrace {
        decomposition: *dec,
        completion_arcs: added.iter().map(|&(u, v)| (keep[u], keep[v])).collect(),
        order: l.seq.iter().map(|&v| keep[v]).collect(),
        alpha,
        feed: f,
        reoriented: reoriented.iter().map(|&(u, v)| (keep[u], keep[v])).collect(),
        branch,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Orients every non-missing pair `u < v` as `u -> v` when `bit` is set.
    fn with_missing(n: usize, missing: &[(usize, usize)], bits: u64) -> OrientedGraph {
        let mut arcs = Vec::new();
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if missing.contains(&(u, v)) {
                    continue;
                }
                arcs.push(if bits >> k & 1 == 1 { (u, v) } else { (v, u) });
                k += 1;
            }
        }
        OrientedGraph::new(n, &arcs).unwrap()
    }

    #[test]
    fn detection_examples() {
        let g = with_missing(4, &[(0, 1), (0, 2)], 0);
        let s = detect_two_stars(&g).unwrap();
        let d = s.canonical();
        assert!(d.x == 0 || d.y == 0);

        let g = with_missing(6, &[(0, 1), (0, 2), (3, 4)], 5);
        let d = *detect_two_stars(&g).unwrap().canonical();
        assert_eq!([d.x.min(d.y), d.x.max(d.y)], [0, 3]);
        assert_eq!(d.case, StarCase::Disjoint);

        // The path 0-1-2-3 is covered by the centers 1 and 2.
        let d = *detect_two_stars(&with_missing(4, &[(0, 1), (1, 2), (2, 3)], 0)).unwrap().canonical();
        assert_eq!(d.case, StarCase::AdjacentCenters);

        let g = with_missing(6, &[(0, 1), (2, 3), (4, 5)], 0);
        assert_eq!(detect_two_stars(&g), Err(Error::NotTwoStars));
        let g = with_missing(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)], 0);
        assert_eq!(detect_two_stars(&g), Err(Error::NotTwoStars));
    }

    #[test]
    fn single_missing_edge() {
        for bits in 0..8 {
            let g = with_missing(3, &[(0, 1)], bits);
            let c = find_snp_two_stars(&g).unwrap();
            assert!(c.holds_in(&g));
        }
    }

    #[test]
    fn exhaustive_small_shapes() {
        let shapes: &[&[(usize, usize)]] = &[&[(0, 1), (0, 2), (3, 4)], &[(0, 1), (0, 2), (1, 3)], &[(0, 2), (1, 2), (0, 3)]];
        for missing in shapes {
            let pairs = 10 - missing.len();
            for bits in 0..1u64 << pairs {
                let g = with_missing(5, missing, bits);
                let s = detect_two_stars(&g).unwrap();
                for dec in &s.decompositions {
                    let tr = run_decomposition(&g, dec).unwrap();
                    assert!(tr.certificate.holds_in(&g));
                }
            }
        }
    }
}
