//! Error taxonomy shared by every module in the crate.
//!
//! Four categories cover all failure modes: rejected arguments, text that
//! fails to parse, iterative numerics that fail to converge, and work that
//! would exceed the configured desk-scale budgets.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Polynomial or configuration text failed to parse. `position` is the
    /// byte offset of the offending token in the input.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// An iterative numeric routine (eigensolve, local descent) did not
    /// converge within its iteration budget.
    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// The request is structurally valid but larger than the configured
    /// desk-scale budget (dimension caps, grid budgets).
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericFailure(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}
