use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;

/// Which constructive route produced an SNP vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exhaustive scan of every vertex.
    BruteForce,
    /// Feed vertex of a median order of a tournament.
    MedianFeed,
    /// Good-completion argument; the case records where the feed landed.
    Completion(crate::completion::CompletionCase),
    /// Two-star construction; records the branch taken through the case tree.
    TwoStars(crate::stars::StarCase, crate::stars::StarBranch),
    /// Endpoint `a_s` or `c_s` of a double cycle, inside `D[K(C)]`.
    DoubleCycleEnd,
    /// Center `b_t` of a double cycle, inside `D[K(C)]`.
    DoubleCycleCenter,
    /// Missing disjoint paths of length at most two, via completion.
    Paths(crate::completion::CompletionCase),
    /// Second SNP vertex of a sink-free good digraph.
    NoSink(crate::paths::NoSinkCase),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::BruteForce => write!(f, "brute-force"),
            Method::MedianFeed => write!(f, "median-feed"),
            Method::Completion(c) => write!(f, "completion/{c}"),
            Method::TwoStars(c, b) => write!(f, "two-stars/{c}/{b}"),
            Method::DoubleCycleEnd => write!(f, "double-cycle/end"),
            Method::DoubleCycleCenter => write!(f, "double-cycle/center"),
            Method::Paths(c) => write!(f, "paths/{c}"),
            Method::NoSink(c) => write!(f, "no-sink/{c}"),
        }
    }
}

/// A vertex with `|N+(p)| <= |N++(p)|`, checked against the graph when the
/// certificate is built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnpCertificate {
    pub vertex: usize,
    pub out_size: usize,
    pub second_size: usize,
    pub method: Method,
    /// Companion vertex when a construction yields two SNP vertices.
    pub second_vertex: Option<usize>,
}

impl SnpCertificate {
    /// Recomputes both neighbourhoods of `vertex` in `g` and fails with
    /// [`Error::CertificateFailed`] unless the SNP holds.
    pub fn validate(g: &OrientedGraph, vertex: usize, method: Method) -> Result<Self> {
        if vertex >= g.n() {
            return Err(Error::OutOfRange { vertex, n: g.n() });
        }
        let out_size = g.out(vertex).len();
        let second_size = g.second_out(vertex).len();
        if out_size > second_size {
            return Err(Error::CertificateFailed { vertex, out_size, second_size, method: method.to_string() });
        }
        Ok(SnpCertificate { vertex, out_size, second_size, method, second_vertex: None })
    }

    /// Re-checks the certificate against `g`.
    pub fn holds_in(&self, g: &OrientedGraph) -> bool {
        self.vertex < g.n()
            && g.out(self.vertex).len() == self.out_size
            && g.second_out(self.vertex).len() == self.second_size
            && self.out_size <= self.second_size
    }
}

impl fmt::Display for SnpCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {} |N+| = {} |N++| = {} via {}", self.vertex, self.out_size, self.second_size, self.method)
    }
}

/// Smallest vertex with the SNP, found by scanning every vertex.
pub fn brute_force_snp(g: &OrientedGraph) -> Option<SnpCertificate> {
    g.snp_vertices().first().map(|v| SnpCertificate::validate(g, v, Method::BruteForce).expect("scanned vertex has SNP"))
}
