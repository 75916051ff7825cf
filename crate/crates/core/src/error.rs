use thiserror::Error;

use crate::fitting::FitResult;

pub type Result<T, E = TrpcaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TrpcaError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("circular mean undefined: resultant length {0:e} is below 1e-12")]
    UndefinedMean(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error(
        "rejection sampler acceptance rate {rate:e} is below 1e-4; \
         rescale the concentration parameters or sample a less concentrated model"
    )]
    ConcentrationTooHigh { rate: f64 },

    #[error("no ridge point lies within {delta} of the seed location")]
    SeedNotFound { delta: f64 },

    #[error("ridge cannot be parametrized: {0}")]
    Parametrization(String),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no trajectory converged ({attempted} starts)")]
    EulerNotConverged { attempted: usize },

    #[error("optimizer failed to converge: {message}")]
    Convergence {
        message: String,
        best: Option<Box<FitResult>>,
    },

    #[error("restricted fit beats the unrestricted one by {0:e}; optimizer inconsistency")]
    OptimizerInconsistency(f64),

    #[error("proportion of variance explained is undefined: both score variances vanish")]
    UndefinedPve,

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("step {step} failed: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: Box<TrpcaError>,
    },
}

impl TrpcaError {
    pub(crate) fn at_step(self, step: &'static str) -> Self {
        TrpcaError::Step {
            step,
            source: Box::new(self),
        }
    }

    /// Innermost error, unwrapping step annotations.
    pub fn root(&self) -> &TrpcaError {
        match self {
            TrpcaError::Step { source, .. } => source.root(),
            other => other,
        }
    }
}
