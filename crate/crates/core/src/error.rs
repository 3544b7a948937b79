use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input points span an affine subspace of dimension {rank} < {dim}")]
    DegenerateInput { dim: usize, rank: usize },
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("halfspace intersection is empty")]
    Empty,
    #[error("halfspace intersection is lower dimensional (volume {volume:e})")]
    LowerDimensional { volume: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not supported (only n = 2 or n = 3)")]
    TooHighDimension(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not orthogonal (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("largest step leaves the support of the covariogram")]
    StepTooLarge,
    #[error("gauge evaluated to non-positive value {value}")]
    GaugeNonPositive { value: f64 },
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
