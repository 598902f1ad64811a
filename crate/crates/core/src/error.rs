use thiserror::Error;

/// Errors raised by the fan toolkit.
///
/// Axiom violations of an otherwise well-formed table or chain are not errors;
/// they are collected into validation reports instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: an index out of range, inconsistent lengths.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An operation was given arguments that do not belong together.
    #[error("usage error: {0}")]
    Usage(String),
    /// A configured search or enumeration bound was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("not a fan: {0}")]
    NotAFan(String),
    #[error("no successor of depth {target} for a character of depth {depth}")]
    NoSuccessor { depth: usize, target: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The hypothesis of a construction step does not hold.
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("specialization orders are not isomorphic: {left} vs {right}")]
    OrderMismatch { left: String, right: String },
}

pub type Result<T> = std::result::Result<T, Error>;
