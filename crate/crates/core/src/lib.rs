//! Minimum-length path decompositions of bounded width.
//!
//! The exact [`generic`] search works for any width and doubles as the
//! reference oracle. For width at most three, [`general::solve`] runs the
//! polynomial pipeline: [`connected`] search over boundary states, [`chunk`]
//! solves for one big component plus isolated vertices and edges, and a
//! dynamic program distributing the small components. [`gadgets`] builds the
//! width-4 hardness instances from 3-PARTITION.

pub mod bits;
pub mod chunk;
pub mod connected;
pub mod decomposition;
pub mod gadgets;
pub mod general;
pub mod generic;
pub mod graph;
mod symmetry;

use thiserror::Error;

pub use decomposition::{PathDecomposition, Violation};
pub use graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph has {n} vertices; the solver supports at most {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("width {0} is outside the supported range")]
    UnsupportedWidth(usize),
    #[error("bag cap {cap} is outside 2..={max}")]
    InvalidCap { cap: usize, max: usize },
    #[error("big component must be connected with at least three vertices")]
    NotAChunk,
    #[error("malformed state: {0}")]
    MalformedState(String),
}
