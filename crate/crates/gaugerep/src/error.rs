//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Principal matrix logarithm undefined: an eigenvalue argument is at or
    /// near the cut locus (±π), or the requested branch does not exist in
    /// the traceless algebra.
    #[error("cut locus: eigenvalue argument {arg} too close to ±π (or no principal branch)")]
    CutLocus { arg: f64 },

    /// Requested structure is not implemented for this group rank.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two lattice objects live on different sampled manifolds.
    #[error("manifold mismatch")]
    ManifoldMismatch,

    /// A bump radius leaves no exterior (or no interior) site.
    #[error("degenerate support: bump must have interior and exterior sites")]
    DegenerateSupport,

    /// An exponential-vector pairing would overflow double precision.
    #[error("overflow: Re<x,y> = {re} exceeds the exponent budget")]
    Overflow { re: f64 },

    /// Operands act on spaces of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A real subspace fails the standardness conditions.
    #[error("subspace not standard: {0}")]
    NotStandard(String),

    /// Near-identity factorization cannot reach the requested neighborhood.
    #[error("epsilon not reached: factor deviation {max_deviation} > epsilon {epsilon}")]
    EpsilonNotReached { max_deviation: f64, epsilon: f64 },

    /// A numerical routine failed to converge or validate.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Invalid value or syntax in a configuration source.
    #[error("config error (line {line}): {message}")]
    Config { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
