use thiserror::Error;

/// Errors produced by complex construction, queries, estimators and the
/// exact oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {id} out of range 1..={n}")]
    VertexOutOfRange { id: u32, n: u32 },

    #[error("invalid face: vertex set must be nonempty without duplicates")]
    InvalidFace,

    #[error("{face} is not a face of the complex")]
    NotAFace { face: String },

    #[error("the complex has no faces of dimension {k}")]
    EmptyDimension { k: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("sample budget {required:.3e} exceeds limit {limit:.3e}; increase the precision parameter, raise the budget limit, or shorten the walks")]
    Budget { required: f64, limit: f64 },

    #[error("instance too large for the exact oracle: {0}")]
    OracleScale(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
