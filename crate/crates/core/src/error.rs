use thiserror::Error;

/// Errors raised by the coefficient, moment, limit and mode routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n must be at least {min}, got {n}")]
    SizeTooSmall { n: usize, min: usize },

    #[error("scale parameter must be finite, got {0}")]
    NonFiniteScale(f64),

    #[error("{what} is out of its domain: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("raw recurrence is capped at n = {cap} (requested {n}); use the normalized product path")]
    RecurrenceCap { n: usize, cap: usize },

    #[error("exact expansion is capped at |s| = {cap} (requested {s})")]
    ExponentCap { s: i64, cap: i64 },

    #[error("exact arithmetic requires an integer exponent, got s = {0}")]
    NonIntegerScale(f64),

    #[error("mode detection is numerically ambiguous between indices {0:?}")]
    AmbiguousModes(Vec<usize>),

    #[error("integrity violation: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::SizeTooSmall { n, min })
    } else {
        Ok(())
    }
}
