use thiserror::Error;

/// Errors raised by the engine library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("measured subsystem must be a qubit, got dimension {0}")]
    NotQubit(usize),

    #[error("stage order violation: {0}")]
    OrderViolation(String),

    #[error("invalid stage: {0}")]
    InvalidStage(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("protocol document error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
