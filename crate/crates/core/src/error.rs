use thiserror::Error;

/// Errors surfaced by game construction, reduction, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside an operation's domain (bad threshold, weight out of
    /// range, grouping too large, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact enumeration was requested beyond its size budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The Jacobi sweep did not reach the off-diagonal threshold within the
    /// iteration cap; carries the remaining off-diagonal Frobenius norm.
    #[error("eigen-decomposition did not converge (off-diagonal residual {residual:.3e})")]
    EigenNonConvergence { residual: f64 },

    /// A strategy or protocol does not match the game's input alphabets.
    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    /// The primal solution is not rank 2 within tolerance, so no planar
    /// protocol can be read off; carries the discarded spectral mass.
    #[error("observable extraction unsupported: solution is not rank 2 (residual {residual:.3e})")]
    ExtractionUnsupported { residual: f64 },

    /// An internal identity that must hold by construction failed; indicates
    /// a bug, not a caller error.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    /// Malformed serialized input (rational strings, game JSON).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
