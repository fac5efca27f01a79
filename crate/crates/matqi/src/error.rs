use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace {0} exceeds 1")]
    TraceTooLarge(f64),
    #[error("vector norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("matrix is not an isometry (defect {0:.3e})")]
    NotIsometry(f64),
    #[error("unknown system label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate system label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid system label: {0}")]
    InvalidLabel(String),
    #[error("total dimension {0} exceeds the dense-storage guard")]
    DimensionGuard(usize),
    #[error("rank {rank} exceeds dimension {dim}")]
    RankTooLarge { rank: usize, dim: usize },
    #[error("operator is zero")]
    ZeroOperator,
}

pub type Result<T> = std::result::Result<T, Error>;
