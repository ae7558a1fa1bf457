use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field {field} has fewer than {needed} elements; use an extension field")]
    FieldTooSmall { needed: String, field: String },

    #[error("{what} budget exceeded: needs {needed}, limit {limit}")]
    Budget {
        what: String,
        needed: String,
        limit: String,
    },

    #[error("invalid ABP: {0}")]
    InvalidAbp(String),

    #[error("ABP is not ordered: {0}")]
    NotOrdered(String),

    #[error("ABP is not oblivious: {0}")]
    NotOblivious(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("polynomial is not multilinear in {0}")]
    NotMultilinear(String),

    #[error("bad cut: {0}")]
    BadCut(String),

    #[error("{0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
