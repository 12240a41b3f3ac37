//! Constructive tools around the second neighbourhood property of oriented
//! graphs.
//!
//! The crate covers the full pipeline used to find a vertex `v` with
//! `|N+(v)| <= |N++(v)|` in digraphs whose missing edges form two stars or
//! disjoint short paths:
//!
//! * [`graph`]: oriented graphs, neighbourhoods, the missing graph;
//! * [`dependency`]: the losing relation, the dependency digraph, good
//!   missing edges, intervals and the `J(·)` blocks;
//! * [`order`]: weighted median orders (exact and heuristic), good median
//!   orders, good/bad vertices and sedimentation;
//! * [`completion`]: good completions and SNP extraction from them;
//! * [`stars`]: digraphs missing two stars;
//! * [`paths`]: double cycles and digraphs missing disjoint paths;
//! * [`generators`]: enumerators, seeded random instances, counterexample
//!   search;
//! * [`verify`]: brute-force verification suites used by the CLI and the
//!   acceptance tests.

pub mod certificate;
pub mod completion;
pub mod dependency;
pub mod dot;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod order;
pub mod paths;
pub mod stars;
pub mod util;
pub mod verify;
pub mod vertex_set;

pub use certificate::{Method, SnpCertificate};
pub use error::{Error, Result};
pub use graph::{MissingGraph, Neighborhoods, OrientedGraph};
pub use vertex_set::VertexSet;
