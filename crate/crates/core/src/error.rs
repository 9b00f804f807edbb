use std::io;

use thiserror::Error;

/// Errors produced by the kernelization engine and its file formats.
#[derive(Debug, Error)]
pub enum KernelError {
    /// Input data (graph, partition, independent set) violates its format or contract.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// An API was called in a state that its precondition forbids.
    #[error("usage error: {0}")]
    Usage(String),

    /// An internal consistency check failed; the run cannot be trusted.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// The exact oracles refuse instances above their size limit.
    #[error("instance too large: {size} vertices exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl KernelError {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        KernelError::MalformedInput(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        KernelError::Usage(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        KernelError::Invariant(msg.into())
    }
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;
