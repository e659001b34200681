use thiserror::Error;

/// Errors produced by estimation, sampling and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid sample: {0}")]
    Validation(String),

    #[error("MLE does not exist: need failures from both groups (k1 = {k1}, k2 = {k2})")]
    NoMle { k1: usize, k2: usize },

    #[error("failed to converge after {iterations} iterations: {reason}")]
    NonConvergence { iterations: usize, reason: String },

    #[error("target is not integrable: {0}")]
    NonIntegrable(String),

    #[error("target is not log-concave near x = {at}")]
    NotLogConcave { at: f64 },

    #[error("posterior is improper: {0}")]
    ImproperPosterior(String),

    #[error("information matrix is singular or not positive definite")]
    SingularInformation,

    #[error("bootstrap unstable: {skipped} of {total} resamples were degenerate")]
    UnstableBootstrap { skipped: usize, total: usize },

    #[error("all importance weights are zero")]
    DegenerateWeights,

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("study failed: all {replications} replications were skipped")]
    StudyFailed { replications: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("level must lie in (0, 1), got {level}")))
    }
}
