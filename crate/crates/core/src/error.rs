use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid constraint system: {0}")]
    InvalidConstraints(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("constraint matrix has numerical rank zero")]
    RankZero,
    #[error("rank-deficient constraints are inconsistent (residual {residual:e})")]
    InconsistentConstraints { residual: f64 },
    #[error("gradient returned a non-finite value")]
    NonFiniteGradient,
    #[error("objective returned a non-finite value at the initial point")]
    NonFiniteObjective,
    #[error("regularized matrix is numerically singular")]
    SingularFactor,
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("unsupported dimension: {0}")]
    DimensionError(String),
    #[error("KKT matrix of the quadratic oracle is singular")]
    SingularKkt,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
