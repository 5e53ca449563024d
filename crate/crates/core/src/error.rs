use thiserror::Error;

use crate::term::Term;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An application whose argument count violates its operation's arity.
    #[error("malformed term: `{op}` expects {expected} arguments, got {found}")]
    Malformed {
        op: String,
        expected: String,
        found: usize,
    },

    #[error("incomplete substitution: variable `{0}` is unbound")]
    IncompleteSubstitution(String),

    /// A sequence ended up where a single term is required, or vice versa.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid subject: {0}")]
    InvalidSubject(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("discrimination net exceeds the state budget of {limit} states")]
    NetTooLarge { limit: usize },

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("signature error: {0}")]
    Signature(String),

    /// Rewriting did not reach a fixpoint within the iteration budget.
    #[error("no normal form after {iterations} rewrites; last term: {term}")]
    IterationLimit { iterations: usize, term: Term },

    #[error("net file: {0}")]
    NetFormat(String),

    /// Two matchers reported different matches for the same input.
    #[error("matchers disagree: {0}")]
    Mismatch(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
