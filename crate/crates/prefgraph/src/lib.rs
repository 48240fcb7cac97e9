//! Tournament-graph analysis and purification of pairwise preference data.
//!
//! Pairwise judgments from an LLM judge are modeled as per-question
//! tournament graphs (edges point loser to winner, ties are bidirectional).
//! On top of that model the crate measures preference non-transitivity (the
//! fraction of vertices caught in preference cycles), preference clarity
//! (normalized two-dimensional structural entropy over the SCC partition),
//! and purifies judgment corpora by flattening each cycle through in-degree
//! ranking and keeping only the records consistent with the result.

pub mod corpus;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod purify;
pub mod scc;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{combine_ordered_verdicts, Judgment, Relation, TournamentGraph, Verdict};
pub use purify::{build_global_dag, purify_question, verify_purity};
pub use scc::{non_transitivity_ratio, tarjan_scc};
