use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Stored or supplied data violates a field invariant (symmetry, divergence, mode layout).
    #[error("data integrity: {0}")]
    DataIntegrity(String),

    /// Caller combined incompatible objects (different mode sets, time grids).
    #[error("usage: {0}")]
    Usage(String),

    #[error("configuration: {0}")]
    Config(String),

    /// The V-norm cap was exceeded; strong regularity is lost at this resolution.
    #[error("blow-up detected at t = {t_star} (|y|_V = {norm_v:e})")]
    BlowUpDetected { t_star: f64, norm_v: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (last distance {last:e})")]
    NonConvergence { iterations: usize, last: f64, history: Vec<f64> },

    #[error("estimation: {0}")]
    Estimation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
