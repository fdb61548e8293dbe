use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("column {column} has zero variance; unit-column normalization is undefined")]
    DegenerateColumn { column: usize },

    #[error("preprocessing contract violated: {0}")]
    Preprocessing(String),

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },

    #[error("rotation angle within {tolerance:e} of pi; real logarithm branch is ambiguous")]
    BranchAmbiguity { tolerance: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("transport solver failed after {pivots} pivots: {reason}")]
    SolverFailure { pivots: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. }
            | Error::BranchAmbiguity { .. }
            | Error::Numerical(_)
            | Error::SolverFailure { .. } => 4,
            Error::InvalidArgument(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NonFinite { .. } => "non_finite",
            Error::DegenerateColumn { .. } => "degenerate_column",
            Error::Preprocessing(_) => "preprocessing",
            Error::NoConvergence { .. } => "no_convergence",
            Error::BranchAmbiguity { .. } => "branch_ambiguity",
            Error::Numerical(_) => "numerical",
            Error::Infeasible(_) => "infeasible",
            Error::SolverFailure { .. } => "solver_failure",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
