use thiserror::Error;

pub type Result<T> = std::result::Result<T, PtError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtError {
    #[error("N must be even, got {0}")]
    OddChannelCount(usize),

    #[error("N must be at least 2, got {0}")]
    TooFewChannels(usize),

    #[error("gamma must be non-negative, got {0}")]
    NegativeGamma(f64),

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "eigensolver did not converge within {max_iter} iterations \
         ({deflated} of {dim} eigenvalues deflated)"
    )]
    NoConvergence {
        max_iter: usize,
        deflated: usize,
        dim: usize,
    },

    #[error("integration produced non-finite amplitudes at step {step} (t = {time}); reduce dt")]
    Unstable { step: usize, time: f64 },

    #[error("degenerate growth-rate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid configuration JSON: {0}")]
    ConfigParse(String),
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PtError::NonFinite { name, value })
    }
}

/// Checks the channel-count rules shared by every N-dependent operation.
pub(crate) fn ensure_channel_count(n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(PtError::OddChannelCount(n));
    }
    if n < 2 {
        return Err(PtError::TooFewChannels(n));
    }
    Ok(())
}
