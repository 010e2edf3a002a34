//! Error surface shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Numerical routines never panic on bad input; they return one of these
/// variants so callers (and the CLI) can map failures to exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A NaN or infinity reached a function that requires finite input.
    #[error("non-finite input: {context}")]
    NonFiniteInput { context: &'static str },

    /// An argument violated a documented precondition.
    #[error("invalid argument: {context}")]
    InvalidArgument { context: String },

    /// A matrix claimed to be Hermitian deviates from its adjoint.
    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    /// No closed form exists for the requested quantity; use the Monte
    /// Carlo estimator instead.
    #[error("analytic form unavailable: {context}; use the Monte Carlo estimator")]
    AnalyticUnavailable { context: String },

    /// A ratio or normalization has a vanishing denominator.
    #[error("degenerate configuration: {context}")]
    DegenerateConfiguration { context: String },

    /// The third-order Taylor truncation produced a negative variance,
    /// so its output cannot parameterize a Gaussian.
    #[error(
        "Taylor truncation invalid at snr {snr}: variance {variance:.3e} < 0; \
         use Monte Carlo capacity statistics instead"
    )]
    TaylorTruncationInvalid { snr: f64, variance: f64 },

    /// A sample set has zero variance where a spread is required.
    #[error("degenerate distribution: {context}")]
    DegenerateDistribution { context: String },

    /// The run was too large to allocate; reports how far it got.
    #[error("resource exhausted after {completed} of {requested} trials")]
    ResourceExhausted { completed: u64, requested: u64 },

    /// The requested statistic is not defined for the given configuration.
    #[error("unsupported statistic: {context}")]
    UnsupportedStatistic { context: String },

    /// An eigenvalue iteration failed to converge.
    #[error("eigensolver failed to converge on row {row} after {iterations} iterations")]
    EigenNoConvergence { row: usize, iterations: usize },
}

impl Error {
    pub(crate) fn invalid(context: impl Into<String>) -> Self {
        Error::InvalidArgument { context: context.into() }
    }

    pub(crate) fn unavailable(context: impl Into<String>) -> Self {
        Error::AnalyticUnavailable { context: context.into() }
    }
}
