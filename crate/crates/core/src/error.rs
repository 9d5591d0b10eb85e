use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("expected a {expected}D mesh, got {found}D")]
    WrongDimension { expected: usize, found: usize },
    #[error("invalid entity: dimension {dim}, id {id}")]
    InvalidEntity { dim: usize, id: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {degree} is not supported here (minimum {min}, maximum {max})")]
    UnsupportedDegree {
        degree: usize,
        min: usize,
        max: usize,
    },
    #[error("value rank mismatch: {0}")]
    RankMismatch(String),
    #[error(
        "ambiguous rank decision: singular value {value:.3e} lies within a factor 10 of the threshold {threshold:.3e}; pass an explicit tolerance"
    )]
    AmbiguousRank { threshold: f64, value: f64 },
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error(
        "image not contained in target space: basis function {index} has residual {residual:.3e}"
    )]
    NotContained { index: usize, residual: f64 },
    #[error("constrained space is empty")]
    EmptySpace,
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("parse error: {0}")]
    Parse(String),
}
