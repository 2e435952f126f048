//! Normalized coefficient rows via the Poisson-binomial product.

use serde::{Deserialize, Serialize};

use crate::error::{require_n, Error, Result};
use crate::param::ScaleParam;
use crate::sum::{sum, CompensatedSum};

/// Natural log of a positive quantity that may not fit in an `f64`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogValue(pub f64);

impl LogValue {
    pub fn ln(self) -> f64 {
        self.0
    }

    /// `exp` of the stored log; `None` if it over- or underflows.
    pub fn exp(self) -> Option<f64> {
        let v = self.0.exp();
        (v.is_finite() && v > 0.0).then_some(v)
    }
}

/// Distribution of `Z_n(s)`: `p[k] = A_{n,k}(s) / P_n(1)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRow {
    pub n: usize,
    pub s: ScaleParam,
    pub p: Vec<f64>,
}

impl ProbabilityRow {
    pub fn total(&self) -> f64 {
        sum(self.p.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        sum(self.p.iter().enumerate().map(|(k, &pk)| k as f64 * pk))
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        sum(self
            .p
            .iter()
            .enumerate()
            .map(|(k, &pk)| (k as f64 - mu).powi(2) * pk))
    }

    /// Cumulative probabilities `F(k) = P(Z <= k)`.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = CompensatedSum::new();
        self.p
            .iter()
            .map(|&pk| {
                acc.add(pk);
                acc.value().min(1.0)
            })
            .collect()
    }

    /// `ln A_{n,k}(s)`, rebuilt from the probability and the log-partition.
    pub fn log_raw(&self, k: usize) -> f64 {
        self.p[k].ln() + log_partition(self.n, self.s).map_or(f64::NAN, LogValue::ln)
    }

    /// First interior index violating `p[k]^2 >= p[k-1] p[k+1] (1 - rel_tol)`,
    /// ignoring entries at or below `floor`.
    pub fn log_concavity_violation(&self, rel_tol: f64, floor: f64) -> Option<usize> {
        (1..self.p.len().saturating_sub(1)).find(|&k| {
            let pk = self.p[k];
            pk > floor && pk * pk < self.p[k - 1] * self.p[k + 1] * (1.0 - rel_tol)
        })
    }

    /// Checks sum-to-one, `p[0] = 0` and log-concavity.
    pub fn validate(&self) -> Result<()> {
        if self.p.len() != self.n + 1 {
            return Err(Error::Integrity(format!(
                "row has {} entries, expected {}",
                self.p.len(),
                self.n + 1
            )));
        }
        if self.p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::Integrity("row has a negative or non-finite entry".into()));
        }
        let total = self.total();
        if (total - 1.0).abs() > 1e-12 * self.n as f64 {
            return Err(Error::Integrity(format!("row sums to {total}")));
        }
        if self.n >= 1 && self.p[0] != 0.0 {
            return Err(Error::Integrity(format!("p[0] = {} != 0", self.p[0])));
        }
        if let Some(k) = self.log_concavity_violation(1e-9, 1e-300) {
            return Err(Error::Integrity(format!("log-concavity fails at k = {k}")));
        }
        Ok(())
    }
}

/// Success probabilities `P(X_{n,k} = 1) = 1 / (1 + h_s(k-1))` for `k = 1..=n`.
pub fn bernoulli_probs(n: usize, s: ScaleParam) -> Result<Vec<f64>> {
    require_n(n, 1)?;
    Ok((1..=n).map(|k| 1.0 / (1.0 + s.weight(k - 1))).collect())
}

/// Normalized row `A_{n,k}(s) / P_n(1)` by convolving the factors `(x + r)/(1 + r)`.
pub fn row_product(n: usize, s: ScaleParam) -> Result<ProbabilityRow> {
    require_n(n, 1)?;
    let mut p = vec![0.0; n + 1];
    p[1] = 1.0;
    for k in 2..=n {
        let r = s.weight(k - 1);
        let hit = 1.0 / (1.0 + r);
        let miss = r / (1.0 + r);
        // support is currently 1..k-1; extend to 1..k in place, high to low
        for j in (1..=k).rev() {
            p[j] = p[j] * miss + p[j - 1] * hit;
        }
    }
    Ok(ProbabilityRow { n, s, p })
}

/// `ln P_n(1) = -s ln n! + sum_{k=1}^{n-1} ln(1 + k^s)`.
pub fn log_partition(n: usize, s: ScaleParam) -> Result<LogValue> {
    require_n(n, 1)?;
    let sv = s.value();
    let log_fact = sum((2..=n).map(|k| (k as f64).ln()));
    let log_prod = sum((1..n).map(|k| s.weight(k).ln_1p()));
    Ok(LogValue(-sv * log_fact + log_prod))
}

/// Log-differences `ln LHS - ln RHS` of the `s <-> -s` reflection identity
/// `P_n^{h_s}(x) = c * x^{n+1} P_n^{h_{-s}}(1/x)` for both candidate prefactors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionResidual {
    /// `c = h_s(n) prod_{k<=n} h_s(k) = n^s (n!)^s`.
    pub forward: f64,
    /// `c = h_{-s}(n) prod_{k<=n} h_{-s}(k) = n^{-s} (n!)^{-s}`.
    pub inverse: f64,
}

impl ReflectionResidual {
    /// Prefactor orientation whose residual is below `tol`, if exactly one is.
    pub fn consistent_orientation(&self, tol: f64) -> Option<&'static str> {
        match (self.forward.abs() < tol, self.inverse.abs() < tol) {
            (true, false) => Some("forward"),
            (false, true) => Some("inverse"),
            (true, true) => Some("both"),
            (false, false) => None,
        }
    }
}

/// `ln P_n^{h_s}(x)` for `x > 0` from the product form `(n!)^{-s} x prod_{k<n} (x + k^s)`.
fn log_poly_at(n: usize, s: ScaleParam, x: f64) -> f64 {
    let log_fact = sum((2..=n).map(|k| (k as f64).ln()));
    -s.value() * log_fact + x.ln() + sum((1..n).map(|k| (x + s.weight(k)).ln()))
}

pub fn reflection_residual(n: usize, s: ScaleParam, x: f64) -> Result<ReflectionResidual> {
    require_n(n, 1)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            what: "x",
            detail: format!("reflection needs a positive finite x, got {x}"),
        });
    }
    let neg = ScaleParam::new(-s.value())?;
    let lhs = log_poly_at(n, s, x);
    let mirrored = (n as f64 + 1.0) * x.ln() + log_poly_at(n, neg, 1.0 / x);
    let log_pref = s.value() * ((n as f64).ln() + sum((2..=n).map(|k| (k as f64).ln())));
    Ok(ReflectionResidual {
        forward: lhs - (log_pref + mirrored),
        inverse: lhs - (-log_pref + mirrored),
    })
}
