//! Representative sub-hypergraph sampling.
//!
//! Thirteen samplers (node selection, hyperedge selection, Metropolis search
//! and the degree-biased weighted hyperedge sampler with automatic exponent
//! tuning), ten structural statistics, the distance/ranking evaluation and
//! the bias-monotonicity checks.

pub mod bench;
pub mod error;
pub mod eval;
pub mod hypergraph;
pub mod midas;
pub mod samplers;
pub mod seed;
pub mod stats;
pub mod synthetic;
pub mod theory;

pub use error::{Error, Result};
pub use hypergraph::{EdgeId, Hypergraph, NodeId, Selection, SubHypergraph};
