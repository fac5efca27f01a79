use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("constraint `{0}` is not Hermitian")]
    NotHermitian(String),
    #[error("problem exceeds the dimension guard ({0})")]
    TooLarge(usize),
    #[error("linear algebra failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
