use thiserror::Error;

/// Errors surfaced by the engine. Validation-style operations return reports
/// instead; `Error` is for hard misuse (dimension mismatches, unsupported
/// shapes, parse failures).
#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("unbounded polytope: {0}")]
    Unbounded(String),
    #[error("map shape unsupported: {0}")]
    Unsupported(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("insufficient smoothness: {0}")]
    Smoothness(String),
    #[error("partition-of-unity construction failed: {0}")]
    Partition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unresolved reference: {0}")]
    Unresolved(String),
}

pub type Result<T> = std::result::Result<T, Error>;
