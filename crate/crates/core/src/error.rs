//! Error taxonomy shared by every module.
//!
//! The variants mirror the failure classes the operations are allowed to
//! report: domain violations, resource-budget overruns, precision targets
//! that could not be met, and unsupported weight/operation combinations.
//! Mathematical failures (a verification that found a counterexample) are
//! kept separate because they must abort loudly, never be swallowed.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's stated precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Work or memory beyond the configured budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// Requested accuracy unattainable; carries the achieved error bound.
    #[error("precision error: {msg} (achieved error bound {achieved:e})")]
    Precision { msg: String, achieved: f64 },

    /// Operation undefined for this smoothing kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A mathematical assertion failed (would-be counterexample). Carries a
    /// full state dump so the offending instance can be reproduced.
    #[error("mathematical failure: {0}")]
    MathFailure(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 0 success, 2 mathematical failure,
    /// 3 resource, 64 usage.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MathFailure(_) => 2,
            Error::Resource(_) => 3,
            Error::Usage(_) => 64,
            _ => 1,
        }
    }
}
