//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by sieve construction, data ingestion, and numerics.
#[derive(Debug, Error)]
pub enum Error {
    /// A field parameter was rejected (not squarefree, too small, ...).
    #[error("invalid field parameter: {0}")]
    InvalidField(String),

    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A requested evaluation point is not on the checkpoint grid.
    #[error("x = {0} is not a checkpoint of this sieve result")]
    NotACheckpoint(u64),

    /// Zero-data file could not be parsed.
    #[error("zero data: {0}")]
    ZeroData(String),

    /// I/O while reading or writing data files.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Internal consistency check failed (indicates a bug, not bad input).
    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
