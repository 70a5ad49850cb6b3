use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A source sequence ran out of digits.
    #[error("length error: needed {needed} digits, {available} available")]
    Length { needed: usize, available: usize },

    /// Malformed digit file or JSON document.
    #[error("parse error at line {line}, offset {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },

    /// Brute-force enumeration would exceed the configured cap.
    #[error("refusing to enumerate {count} block functions (cap {cap})")]
    EnumerationCap { count: String, cap: u64 },

    /// A transition matrix has several closed classes, so its stationary
    /// distribution is not unique.
    #[error("stationary distribution is ambiguous: closed classes {classes:?}")]
    AmbiguousStationary { classes: Vec<Vec<usize>> },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
