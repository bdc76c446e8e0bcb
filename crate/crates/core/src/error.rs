use thiserror::Error;

/// Errors surfaced by complex construction, map sampling, and the
/// obstruction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex: repeated vertex {0}")]
    MalformedSimplex(u32),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("point lies on the topological diagonal; the retraction is undefined there")]
    DiagonalPoint,

    #[error("genericity violation: {0}")]
    Genericity(String),

    #[error("no map in general position found after {0} attempts")]
    GenericityExhausted(u32),

    #[error("cocycle is not equivariant at cell {0}")]
    InconsistentCocycle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
