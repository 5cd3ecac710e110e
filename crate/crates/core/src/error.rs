use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-domain input (parse failures, negative entries,
    /// dimension mismatches).
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Non-convergence, overflow, or an eigen-quantity that has no exact
    /// rational value.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Two routes that must agree did not.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
