use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The variants are grouped so that a front end can map them onto exit
/// codes: parse/usage, hypothesis, capacity and violation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {what} is {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("interval budget exceeded: {needed} intervals needed, budget {budget}; use a count-only API")]
    Budget { needed: u128, budget: u128 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("sets live in different groups")]
    GroupMismatch,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("invariant violated: {0}")]
    Violation(String),

    #[error("singular matrix")]
    Singular,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn capacity(
    what: &'static str,
    requested: impl Into<u128>,
    limit: impl Into<u128>,
) -> Error {
    Error::Capacity {
        what,
        requested: requested.into(),
        limit: limit.into(),
    }
}
