use thiserror::Error;

/// Errors raised by graph construction, the solvers and the constructive
/// SNP finders.
///
/// Variants documented as "bug signals" can only fire if an implementation
/// step, or a hypothesis the caller promised, is wrong. They are never
/// swallowed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("loop arc at vertex {0}")]
    LoopArc(usize),
    #[error("digon between {0} and {1}")]
    DigonArc(usize, usize),
    #[error("weight of vertex {vertex} must be strictly positive and finite, got {weight}")]
    BadWeight { vertex: usize, weight: f64 },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("graphs are limited to {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("{{{0},{1}}} is not a missing edge")]
    NotMissing(usize, usize),
    #[error("missing edge {{{0},{1}}} admits no convenient orientation")]
    NotGood(usize, usize),
    #[error("instance of size {n} exceeds the limit {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("sequence is not a permutation of the vertex set")]
    NotPermutation,
    #[error("graph is not a good digraph: {0}")]
    NotGoodDigraph(String),
    #[error("interval-constrained order weight {constrained} differs from the optimum {optimum}")]
    IntervalOptimalityMismatch { constrained: f64, optimum: f64 },
    #[error("sedimentation changed the order weight from {before} to {after}")]
    WeightDropped { before: f64, after: f64 },
    #[error("feed inequality violated: out-weight {out_weight} exceeds good-vertex weight {good_weight}")]
    FeedInequalityViolated { out_weight: f64, good_weight: f64 },
    #[error("iteration budget of {0} steps exceeded")]
    IterBudgetExceeded(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("completion is not a good digraph: {0}")]
    NotGoodAfterCompletion(String),
    #[error("certificate failed for vertex {vertex} ({method}): |N+| = {out_size} > |N++| = {second_size}")]
    CertificateFailed { vertex: usize, out_size: usize, second_size: usize, method: String },
    #[error("missing graph is not a union of two stars")]
    NotTwoStars,
    #[error("counting identity {identity} failed: expected {expected}, found {found}")]
    CountingMismatch { identity: String, expected: usize, found: usize },
    #[error("vertex {0} is a sink")]
    SinkPresent(usize),
    #[error("infeasible instance parameters: {0}")]
    Infeasible(String),
    #[error("no double cycle with k = {0} found")]
    NotFound(usize),
    #[error("proof step '{step}' did not hold: {detail}")]
    ProofStep { step: String, detail: String },
    #[error("{0}")]
    Io(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: Box<Error> },
    #[error("unknown verification target '{0}'")]
    UnknownTarget(String),
}

impl Error {
    pub(crate) fn proof(step: &str, detail: impl Into<String>) -> Self {
        Error::ProofStep { step: step.to_string(), detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
