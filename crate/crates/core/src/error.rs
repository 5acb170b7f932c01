use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// A vertex, graph, or parameter failed validation.
    #[error("invalid input: {0}")]
    Input(String),

    /// A computation would exceed the configured exact-arithmetic or
    /// enumeration budget.
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// A quantity is mathematically undefined for the given arguments.
    #[error("undefined: {0}")]
    Undefined(String),

    /// A loaded artifact violates one of its structural invariants.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
