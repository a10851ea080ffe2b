use thiserror::Error;

/// Failures reported by the numerical routines.
///
/// The variants are grouped by how the command-line front end maps them to
/// exit codes: input validation (2), numeric trouble (3), solver trouble (4).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("reality violation: imaginary part {im:e} exceeds {bound:e}")]
    RealityViolation { im: f64, bound: f64 },

    #[error("cancellation failure: residual {residual:e} at eps^{power} exceeds {bound:e}")]
    CancellationFailure {
        power: i32,
        residual: f64,
        bound: f64,
    },

    #[error("invalid shift configuration: {0}")]
    InvalidConfiguration(String),

    #[error("square-root branch undecidable: {0}")]
    BranchUndecidable(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("endpoint violation: {0}")]
    EndpointViolation(String),

    #[error("empty report: {0}")]
    EmptyReport(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),
}

impl Error {
    /// Process exit status used by the `dgaps` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::InvalidConfiguration(_)
            | Error::EndpointViolation(_)
            | Error::EmptyReport(_) => 2,
            Error::SolverFailure(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
