//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, solvers, and network evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("{0} out of range: {1}")]
    Domain(&'static str, f64),

    #[error("eigensolver did not converge within the sweep cap")]
    EigNoConvergence,

    #[error("no strictly feasible starting point: {0}")]
    Infeasible(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("Newton system is rank-deficient beyond regularization")]
    IllConditioned,

    #[error("unsupported dimensions {dim_in}x{dim_out}: PPT relaxation is exact only for 2x2 and 2x3")]
    UnsupportedDims { dim_in: usize, dim_out: usize },

    #[error("unsupported channel kind for this method: {0}")]
    UnsupportedKind(String),

    #[error("missing measure {measure} on edge {edge}")]
    MissingMeasure { edge: String, measure: String },

    #[error("cut enumeration too large: {nodes} intermediate nodes (max {max})")]
    TooLarge { nodes: usize, max: usize },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
