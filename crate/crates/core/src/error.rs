//! Error type shared by every module in the crate.

use thiserror::Error;

/// Failures surfaced by planners, the oracle and the decoders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A query whose two sides share a vertex. `index` is the plan position.
    #[error("query sides overlap in plan entry {index}")]
    Overlap { index: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A decoder could not produce an output from a complete answer set.
    #[error("decode failure: {0}")]
    Decode(String),
    /// A structural guarantee (round count, query-free phase, edge validity) was broken.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
