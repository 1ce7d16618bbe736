use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A computation would exceed its configured size budget.
    #[error("budget exceeded for {what}: need {needed}, limit {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// A hypothesis of a bound check does not hold, so the check is void.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A construction produced an entry that failed verification.
    #[error("internal verification failure: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(
        what: &'static str,
        needed: impl Into<u128>,
        limit: impl Into<u128>,
    ) -> Self {
        Error::Budget {
            what,
            needed: needed.into(),
            limit: limit.into(),
        }
    }
}
