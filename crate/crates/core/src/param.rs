use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent `s` of the weight `h_s(k) = k^s`, with `h_s(0) = 0` for every `s`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ScaleParam(f64);

impl ScaleParam {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::NonFiniteScale(s))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `s` is a whole number, which enables exact arithmetic.
    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }

    /// `Some(s)` when `s` is a whole number representable as `i64`.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() && self.0.abs() < 9.0e15 {
            Some(self.0 as i64)
        } else {
            None
        }
    }

    /// `h_s(k) = k^s`, with the convention `h_s(0) = 0`.
    #[inline]
    pub fn weight(self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else if self.0 == 0.0 {
            1.0
        } else {
            (k as f64).powf(self.0)
        }
    }
}

impl TryFrom<f64> for ScaleParam {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<ScaleParam> for f64 {
    fn from(s: ScaleParam) -> f64 {
        s.0
    }
}

impl std::fmt::Display for ScaleParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
