use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, QstError>;

#[derive(Debug, Error)]
pub enum QstError {
    #[error("invalid chain: need at least 2 sites, got {n_sites}")]
    InvalidChain { n_sites: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// The tridiagonal QL iteration did not converge. Carries the offending matrix.
    #[error("eigendecomposition failed to converge for N={n_sites} (eigenvalue {index} exceeded {max_iterations} iterations)")]
    NumericFailure {
        n_sites: usize,
        index: usize,
        max_iterations: usize,
        diag: Vec<f64>,
        offdiag: Vec<f64>,
    },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("realization {index} (stream seed {seed:#018x}) failed: {source}")]
    Realization {
        index: usize,
        seed: u64,
        #[source]
        source: Box<QstError>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("thread pool error: {0}")]
    ThreadPool(String),
}

impl QstError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QstError::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        QstError::Config(msg.into())
    }
}
