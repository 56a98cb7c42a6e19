//! Backlink selection for PageRank maximization.
//!
//! Given a directed graph, a target node, and a budget of `k` new backlinks,
//! the crate selects source nodes whose links raise the target's PageRank,
//! and provides the machinery around that problem:
//!
//! * [`graph`]: compact directed graphs with value-semantic edits and an
//!   edge-list file format.
//! * [`surfer`]: PageRank plus the reach/self-visit factorization of a single
//!   node's score.
//! * [`selectors`]: the selection strategies (naive one-shot scoring, greedy
//!   on the reach objective, greedy on PageRank itself, exhaustive search).
//! * [`families`]: parameterized benchmark graphs on which cheap strategies
//!   provably pick the wrong sources.
//! * [`closed_form`]: exact per-role scores and strategy-gap ratios for those
//!   families, solved symbolically rather than simulated.
//! * [`witness`]: search for small graphs certifying that the objective is
//!   not submodular.

pub mod closed_form;
pub mod error;
pub mod families;
pub mod graph;
pub mod selectors;
pub mod surfer;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, NodeId};
pub use selectors::{SelectionResult, Strategy, TraceStep};
pub use surfer::{PageRankVector, SurferMetrics, SurferParams};
