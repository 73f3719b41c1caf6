use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid static configuration (grid sizes, protocol parameters, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with incompatible arguments.
    #[error("usage error: {0}")]
    Usage(String),

    /// A requested eigenstate does not fit on the grid.
    #[error("level {n} at f = {f} is not resolved on the grid (norm deviates from 1 by {norm_dev:.3e})")]
    Resolution { n: usize, f: f64, norm_dev: f64 },

    /// The state has zero norm and cannot be projected or normalised.
    #[error("degenerate state: zero norm")]
    DegenerateState,

    /// A Zeno stroke hit a zero-norm state mid-run; the partial record is kept.
    #[error("degenerate trajectory after {} of {} measurements (survival so far {:.3e})",
            .0.measurements_done, .0.measurements_scheduled, .0.survival)]
    DegenerateTrajectory(Box<crate::stroke::PartialStroke>),

    /// Parameter outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The perturbative predictor left its validity range.
    #[error("predictor out of range: per-interval leakage {leakage:.3e} >= 1")]
    PredictorOutOfRange { leakage: f64 },

    /// The truncated eigenbasis integration is not trustworthy.
    #[error("eigenbasis oracle invalid: truncation residual {residual:.3e} > 1e-6")]
    OracleInvalid { residual: f64 },

    /// Every cycle of a run was excluded or degenerate.
    #[error("run failed: {0}")]
    RunFailed(String),
}
