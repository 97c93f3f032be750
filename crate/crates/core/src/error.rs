use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("invalid ordering: {0}")]
    InvalidOrder(String),

    #[error("ordering covers {order} vertices but graph has {graph}")]
    SizeMismatch { order: usize, graph: usize },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// Exhaustive searches refuse inputs above their factorial cap.
    #[error("graph has {n} vertices, exhaustive search is capped at {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("graph is cyclic (vertex {vertex} lies on a cycle)")]
    Cyclic { vertex: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state at vertex {vertex} in sweep {sweep}")]
    NonFinite { vertex: usize, sweep: usize },

    #[error("edge ({u}, {v}) has non-integer weight {weight}")]
    NonIntegerWeight { u: usize, v: usize, weight: f64 },
}
