//! Command-line front end: CSV ingestion, pipeline runs and artifact emission.

pub mod artifacts;
pub mod commands;
pub mod ingest;
pub mod plot;

use trpca::TrpcaError;

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or unusable input (exit 2).
    #[error("{0}")]
    Data(String),
    /// The optimizer did not converge (exit 3).
    #[error("{0}")]
    Convergence(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<TrpcaError> for CliError {
    fn from(e: TrpcaError) -> Self {
        match e.root() {
            TrpcaError::Convergence { .. } => CliError::Convergence(e.to_string()),
            TrpcaError::InsufficientData { .. }
            | TrpcaError::InvalidArgument(_)
            | TrpcaError::Domain(_)
            | TrpcaError::UndefinedMean(_)
            | TrpcaError::UndefinedPve
            | TrpcaError::DegenerateCovariance(_)
            | TrpcaError::ConcentrationTooHigh { .. } => CliError::Data(e.to_string()),
            _ => CliError::Other(anyhow::Error::new(e)),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
