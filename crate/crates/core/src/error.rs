//! Error type shared across the crate.
//!
//! Variants are grouped by who is at fault: [`Error::Config`] and
//! [`Error::Argument`] mean the caller handed us something invalid,
//! [`Error::Domain`] means the inputs were individually valid but the
//! requested quantity does not exist (e.g. a non-positive radicand),
//! [`Error::EmptyNetwork`] flags operations that need at least one alive
//! node, and [`Error::Internal`] is a self-check failure that indicates a
//! bug in this crate rather than in the caller.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the simulator and the analytical models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent. The message
    /// names the offending field.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A function argument is out of its documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested quantity is undefined for these inputs.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation that requires alive nodes was called on a network with
    /// none remaining.
    #[error("no alive nodes in network")]
    EmptyNetwork,

    /// An internal consistency check failed; this is a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by caller-supplied configuration or arguments
    /// (as opposed to runtime/domain failures). CLIs use this to pick exit
    /// codes.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Argument(_))
    }
}
