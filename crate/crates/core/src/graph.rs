//! Oriented graphs with optional positive vertex weights.
//!
//! Vertices are the dense indices `0..n`. Each vertex keeps its out- and
//! in-neighbourhood as a [`VertexSet`], so the second out-neighbourhood of
//! `v` is the union of the out-rows of `N+(v)` with `N+(v)` and `v` removed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// A finite loopless digon-free digraph with strictly positive vertex weights.
///
/// Immutable once built; the `with_*` methods return modified copies.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedGraph {
    n: usize,
    out: Vec<VertexSet>,
    inc: Vec<VertexSet>,
    weights: Vec<f64>,
}

/// First and second out- and in-neighbourhoods of one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighborhoods {
    pub out: VertexSet,
    pub inc: VertexSet,
    pub second_out: VertexSet,
    pub second_in: VertexSet,
}

impl OrientedGraph {
    /// Validates `arcs` and builds a unit-weighted graph.
    ///
    /// Repeated copies of the same arc are accepted once.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut g = OrientedGraph {
            n,
            out: vec![VertexSet::EMPTY; n],
            inc: vec![VertexSet::EMPTY; n],
            weights: vec![1.0; n],
        };
        for &(u, v) in arcs {
            g.insert_arc(u, v)?;
        }
        Ok(g)
    }

    /// Like [`OrientedGraph::new`] but with explicit vertex weights. Vertices
    /// absent from `weights` keep weight 1.
    pub fn with_weight_map(n: usize, arcs: &[(usize, usize)], weights: &[(usize, f64)]) -> Result<Self> {
        let mut g = Self::new(n, arcs)?;
        for &(v, w) in weights {
            g.set_weight(v, w)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange { vertex: v, n: self.n })
        }
    }

    fn insert_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::LoopArc(u));
        }
        if self.out[v].contains(u) {
            return Err(Error::DigonArc(u, v));
        }
        self.out[u].insert(v);
        self.inc[v].insert(u);
        Ok(())
    }

    fn set_weight(&mut self, v: usize, w: f64) -> Result<()> {
        self.check_vertex(v)?;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::BadWeight { vertex: v, weight: w });
        }
        self.weights[v] = w;
        Ok(())
    }

    /// Copy with the arc `(u, v)` added. Fails if it would create a loop or
    /// a digon.
    pub fn with_arc(&self, u: usize, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.insert_arc(u, v)?;
        Ok(g)
    }

    /// Copy with every arc of `arcs` added.
    pub fn with_arcs(&self, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = self.clone();
        for &(u, v) in arcs {
            g.insert_arc(u, v)?;
        }
        Ok(g)
    }

    /// Copy with the existing arc `(u, v)` replaced by `(v, u)`.
    pub fn with_reversed(&self, u: usize, v: usize) -> Result<Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_arc(u, v) {
            return Err(Error::proof("reverse arc", format!("({u},{v}) is not an arc")));
        }
        let mut g = self.clone();
        g.out[u].remove(v);
        g.inc[v].remove(u);
        g.out[v].insert(u);
        g.inc[u].insert(v);
        Ok(g)
    }

    /// Copy with new weights (one per vertex).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.n {
            return Err(Error::Infeasible(format!("expected {} weights, got {}", self.n, weights.len())));
        }
        let mut g = self.clone();
        for (v, &w) in weights.iter().enumerate() {
            g.set_weight(v, w)?;
        }
        Ok(g)
    }

    pub fn with_unit_weights(&self) -> Self {
        OrientedGraph { weights: vec![1.0; self.n], ..self.clone() }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v) || self.out[v].contains(u)
    }

    /// `{u, v}` is a missing edge: distinct and joined by no arc.
    pub fn is_missing(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && !self.adjacent(u, v)
    }

    /// `N+(v)`. Panics if `v` is out of range.
    pub fn out(&self, v: usize) -> VertexSet {
        self.out[v]
    }

    /// `N-(v)`. Panics if `v` is out of range.
    pub fn inc(&self, v: usize) -> VertexSet {
        self.inc[v]
    }

    /// `N++(v)`: vertices at distance exactly two.
    pub fn second_out(&self, v: usize) -> VertexSet {
        let first = self.out[v];
        let reach = first.iter().fold(VertexSet::EMPTY, |acc, u| acc.union(self.out[u]));
        reach.difference(first).without(v)
    }

    /// `N--(v)`.
    pub fn second_in(&self, v: usize) -> VertexSet {
        let first = self.inc[v];
        let reach = first.iter().fold(VertexSet::EMPTY, |acc, u| acc.union(self.inc[u]));
        reach.difference(first).without(v)
    }

    /// `N+(v) ∪ N++(v)`: everything reachable from `v` in one or two steps.
    pub fn reach2(&self, v: usize) -> VertexSet {
        self.out[v].union(self.second_out(v))
    }

    pub fn neighborhoods(&self, v: usize) -> Result<Neighborhoods> {
        self.check_vertex(v)?;
        Ok(Neighborhoods {
            out: self.out[v],
            inc: self.inc[v],
            second_out: self.second_out(v),
            second_in: self.second_in(v),
        })
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inc[v].len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// All arcs, sorted lexicographically.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.out[u].iter().map(move |v| (u, v))).collect()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_of(&self, set: VertexSet) -> f64 {
        set.iter().map(|v| self.weights[v]).sum()
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// `|N+(v)| <= |N++(v)|`.
    pub fn has_snp(&self, v: usize) -> Result<bool> {
        self.check_vertex(v)?;
        Ok(self.out[v].len() <= self.second_out(v).len())
    }

    /// `ω(N+(v)) <= ω(N++(v))`.
    pub fn has_weighted_snp(&self, v: usize) -> Result<bool> {
        self.check_vertex(v)?;
        Ok(self.weight_of(self.out[v]) <= self.weight_of(self.second_out(v)) + crate::util::weight_eps(self.weight_of(self.out[v])))
    }

    /// Every vertex with the (unweighted) second neighbourhood property.
    pub fn snp_vertices(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.out[v].len() <= self.second_out(v).len()).collect()
    }

    pub fn sinks(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.out[v].is_empty()).collect()
    }

    pub fn is_tournament(&self) -> bool {
        self.arc_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> OrientedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let m = vertices.len();
        let mut g = OrientedGraph {
            n: m,
            out: vec![VertexSet::EMPTY; m],
            inc: vec![VertexSet::EMPTY; m],
            weights: vertices.iter().map(|&v| self.weights[v]).collect(),
        };
        for (i, &u) in vertices.iter().enumerate() {
            for v in self.out[u].iter() {
                let j = local[v];
                if j != usize::MAX {
                    g.out[i].insert(j);
                    g.inc[j].insert(i);
                }
            }
        }
        g
    }

    /// Induced subgraph on a vertex set, members in ascending order.
    pub fn induced_set(&self, set: VertexSet) -> (OrientedGraph, Vec<usize>) {
        let vertices = set.to_vec();
        (self.induced(&vertices), vertices)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<OrientedGraph> {
        if perm.len() != self.n || perm.iter().copied().collect::<VertexSet>() != self.vertices() {
            return Err(Error::NotPermutation);
        }
        let arcs: Vec<_> = self.arcs().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        let mut weights = vec![1.0; self.n];
        for v in 0..self.n {
            weights[perm[v]] = self.weights[v];
        }
        Self::new(self.n, &arcs)?.with_weights(&weights)
    }

    pub fn missing_graph(&self) -> MissingGraph {
        let mut edges = Vec::new();
        let mut touched = VertexSet::EMPTY;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.adjacent(u, v) {
                    edges.push((u, v));
                    touched.insert(u);
                    touched.insert(v);
                }
            }
        }
        MissingGraph { n: self.n, edges, whole: self.vertices().difference(touched) }
    }

    /// Vertices incident to at least one missing edge.
    pub fn non_whole(&self) -> VertexSet {
        (0..self.n)
            .filter(|&v| self.out[v].union(self.inc[v]).len() + 1 < self.n)
            .collect()
    }
}

/// The undirected graph of missing edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingGraph {
    pub n: usize,
    /// Missing edges `{u, v}` stored as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Vertices incident to no missing edge.
    pub whole: VertexSet,
}

impl MissingGraph {
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// Connected components of the missing graph, as edge lists.
    pub fn components(&self) -> Vec<Vec<(usize, usize)>> {
        let mut uf = crate::util::UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
        for &(a, b) in &self.edges {
            groups.entry(uf.find(a)).or_default().push((a, b));
        }
        groups.into_values().collect()
    }

    /// The missing graph is a vertex-disjoint union of paths, each with at
    /// most `max_len` edges.
    pub fn is_disjoint_paths(&self, max_len: usize) -> bool {
        self.components().iter().all(|comp| {
            let verts: VertexSet = comp.iter().flat_map(|&(a, b)| [a, b]).collect();
            comp.len() <= max_len
                && comp.len() + 1 == verts.len()
                && verts.iter().all(|v| self.degree(v) <= 2)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> OrientedGraph {
        OrientedGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn t3() -> OrientedGraph {
        OrientedGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn g3() -> OrientedGraph {
        OrientedGraph::new(4, &[(0, 2), (1, 3), (3, 0), (2, 1)]).unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(cycle3().is_tournament());
        assert_eq!(OrientedGraph::new(3, &[(0, 1), (1, 0)]), Err(Error::DigonArc(1, 0)));
        assert_eq!(OrientedGraph::new(2, &[(0, 0)]), Err(Error::LoopArc(0)));
        assert_eq!(OrientedGraph::new(2, &[(0, 2)]), Err(Error::OutOfRange { vertex: 2, n: 2 }));
        assert!(matches!(
            OrientedGraph::with_weight_map(2, &[(0, 1)], &[(1, 0.0)]),
            Err(Error::BadWeight { vertex: 1, .. })
        ));
        assert!(matches!(OrientedGraph::new(65, &[]), Err(Error::TooManyVertices { .. })));
    }

    #[test]
    fn neighborhoods_by_definition() {
        let nb = cycle3().neighborhoods(0).unwrap();
        assert_eq!(nb.out.to_vec(), vec![1]);
        assert_eq!(nb.second_out.to_vec(), vec![2]);
        assert_eq!(nb.second_in.to_vec(), vec![1]);

        let nb = t3().neighborhoods(0).unwrap();
        assert_eq!(nb.out.to_vec(), vec![1, 2]);
        assert!(nb.second_out.is_empty());

        let nb = g3().neighborhoods(0).unwrap();
        assert_eq!(nb.out.to_vec(), vec![2]);
        assert_eq!(nb.second_out.to_vec(), vec![1]);
        assert!(matches!(g3().neighborhoods(4), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn snp_predicate() {
        assert!((0..3).all(|v| cycle3().has_snp(v).unwrap()));
        assert!(!t3().has_snp(0).unwrap());
        assert!(t3().has_snp(2).unwrap());
        assert!(g3().has_snp(0).unwrap());

        let w = OrientedGraph::with_weight_map(3, &[(0, 1), (1, 2), (2, 0)], &[(1, 2.0)]).unwrap();
        assert!(!w.has_weighted_snp(0).unwrap());
        assert!(w.has_weighted_snp(1).unwrap());
    }

    #[test]
    fn missing_graph_complement() {
        let mg = cycle3().missing_graph();
        assert!(mg.edges.is_empty());
        assert_eq!(mg.whole, VertexSet::full(3));

        let mg = g3().missing_graph();
        assert_eq!(mg.edges, vec![(0, 1), (2, 3)]);
        assert!(mg.whole.is_empty());

        let t3m = OrientedGraph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let mg = t3m.missing_graph();
        assert_eq!(mg.edges, vec![(1, 2)]);
        assert_eq!(mg.whole.to_vec(), vec![0]);
        assert_eq!(t3m.non_whole().to_vec(), vec![1, 2]);
    }

    #[test]
    fn induced_and_reversal() {
        let g = g3();
        let (h, map) = g.induced_set([0, 2, 3].into_iter().collect());
        assert_eq!(map, vec![0, 2, 3]);
        assert_eq!(h.arcs(), vec![(0, 1), (2, 0)]);
        let r = g.with_reversed(0, 2).unwrap();
        assert!(r.has_arc(2, 0) && !r.has_arc(0, 2));
        assert!(g.with_reversed(2, 0).is_err());
        assert!(g.with_arc(2, 0).is_err());
    }

    #[test]
    fn disjoint_paths_shape() {
        let g = OrientedGraph::new(5, &[(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        let mg = g.missing_graph();
        // missing: 0-1, 0-2, 1-2 (triangle) and 3-4
        assert!(!mg.is_disjoint_paths(2));
        let g = OrientedGraph::new(4, &[(0, 2), (0, 3), (1, 3)]).unwrap();
        // missing: 0-1, 1-2, 2-3: a path with three edges
        assert!(g.missing_graph().is_disjoint_paths(3));
        assert!(!g.missing_graph().is_disjoint_paths(2));
    }
}
