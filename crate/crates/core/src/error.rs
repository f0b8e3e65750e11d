use thiserror::Error;

/// Errors raised while building or analysing Boolean networks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("component `{0}` is declared twice")]
    Duplicate(String),

    #[error("variable `{0}` is used but has no rule")]
    Undeclared(String),

    #[error("unknown component `{0}`")]
    UnknownComponent(String),

    #[error("invalid component name `{0}`")]
    InvalidName(String),

    #[error("local function of `{0}` is not unate")]
    NotUnate(String),

    #[error("{what} exceeds the configured bound ({size} > {limit})")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("domain too large: {0}")]
    DomainTooLarge(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
