use thiserror::Error;

use crate::grading::Tridegree;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("invalid monomial for ring {ring}: {detail}")]
    InvalidMonomial { ring: &'static str, detail: String },
    #[error("the unit monomial has no reduced coproduct")]
    UnitMonomial,
    #[error("slice {ring} {deg} has {size} words, above the budget of {budget}")]
    SliceTooLarge {
        ring: &'static str,
        deg: Tridegree,
        size: u128,
        budget: u128,
    },
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("R-word {0} is missing from the Z2 basis")]
    MissingWord(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cache file {path}: {message}")]
    Cache { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
