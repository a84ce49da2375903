use alloc::string::String;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The request is valid mathematically but exceeds what the
    /// implementation supports (e.g. exact mode beyond its size cap).
    #[error("capability limit: {0}")]
    CapabilityLimit(String),
    /// An internal exactness check failed (inexact division of integers
    /// that must divide, non-vanishing odd coefficients, ...).
    #[error("internal consistency check failed: {0}")]
    Corruption(String),
    /// An evaluation landed on (or numerically next to) a singularity.
    #[error("near-singular evaluation: {0}")]
    NearSingular(String),
    /// An iterative method did not converge.
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidParameter(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
