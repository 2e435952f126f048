//! Closed-form moments of `Z_n(s)`, their `s`-derivatives, and the
//! asymptotic bound checks.
//!
//! Every sum runs over the Bernoulli weights `u_k = k^s`, `k = 1..n-1`, in
//! ascending order with compensated summation.

use serde::{Deserialize, Serialize};

use crate::error::{require_n, Error, Result};
use crate::sum::sum;

#[inline]
fn pow(k: usize, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        (k as f64).powf(s)
    }
}

/// Moments of the row `{A_{n,k}(s)}_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: usize,
    pub s: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub mu_prime: f64,
    pub mu_second: f64,
    pub rho_sum: f64,
    /// `rho_sum / sigma2^{3/2}`; zero for the degenerate `n = 1` row.
    pub be_ratio: f64,
}

impl MomentSummary {
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

pub fn moment_summary(n: usize, s: f64) -> Result<MomentSummary> {
    require_n(n, 1)?;
    let sigma2 = sigma2(n, s);
    let rho_sum = rho_sum(n, s);
    Ok(MomentSummary {
        n,
        s,
        mu: mu(n, s),
        sigma2,
        mu_prime: mu_prime(n, s),
        mu_second: mu_second(n, s),
        rho_sum,
        be_ratio: if rho_sum == 0.0 { 0.0 } else { rho_sum / sigma2.powf(1.5) },
    })
}

/// `mu_n(s) = 1 + sum_{k=1}^{n-1} 1 / (1 + k^s)`.
pub fn mu(n: usize, s: f64) -> f64 {
    1.0 + sum((1..n).map(|k| 1.0 / (1.0 + pow(k, s))))
}

/// `sigma_n^2(s) = sum_{k=1}^{n-1} k^s / (1 + k^s)^2`.
pub fn sigma2(n: usize, s: f64) -> f64 {
    sum((1..n).map(|k| {
        let u = pow(k, s);
        // u / (1+u)^2 written to stay finite for huge u
        let t = 1.0 / (1.0 + u);
        t * (u * t)
    }))
}

/// `d mu_n / ds = -sum_{k=2}^{n-1} k^s ln k / (1 + k^s)^2`.
pub fn mu_prime(n: usize, s: f64) -> f64 {
    -sum((2..n).map(|k| {
        let u = pow(k, s);
        let t = 1.0 / (1.0 + u);
        t * (u * t) * (k as f64).ln()
    }))
}

/// `d^2 mu_n / ds^2 = sum_{k=2}^{n-1} k^s (k^s - 1) (ln k)^2 / (1 + k^s)^3`.
pub fn mu_second(n: usize, s: f64) -> f64 {
    sum((2..n).map(|k| {
        let u = pow(k, s);
        let t = 1.0 / (1.0 + u);
        let l = (k as f64).ln();
        (u * t) * ((u - 1.0) * t) * t * l * l
    }))
}

/// Sum of absolute third central moments `sum r (1 + r^2) / (1 + r)^4` of the Bernoulli factors.
pub fn rho_sum(n: usize, s: f64) -> f64 {
    sum((1..n).map(|k| {
        let r = pow(k, s);
        let t = 1.0 / (1.0 + r);
        // r(1+r^2)/(1+r)^4 = (r t)(t^3 + (r t)^2 t)
        let rt = r * t;
        rt * (t * t * t + rt * rt * t)
    }))
}

/// Generalized harmonic number `H_n^{(r)} = sum_{k=1}^n k^{-r}`.
pub fn harmonic(n: usize, r: u32) -> f64 {
    sum((1..=n).map(|k| (k as f64).powi(-(r as i32))))
}

/// `sum_{k=1}^n k^{-s}` for real `s`.
pub fn partial_zeta(n: usize, s: f64) -> f64 {
    sum((1..=n).map(|k| (k as f64).powf(-s)))
}

/// Growth of `mu_n(s)` and the explicit variance bounds for `s in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub n: usize,
    pub s: f64,
    pub mu: f64,
    pub sigma2: f64,
    /// `mu (1-s) / n^{1-s}` for `s < 1`, `mu / ln n` for `s = 1`.
    pub mean_ratio: f64,
    /// `(n^{1-s} - 1) / (4 - 4s)` for `s < 1`, `ln(n) / 4` for `s = 1`.
    pub variance_lower: f64,
    pub lower_ok: bool,
    /// `sigma2 <= mu`.
    pub upper_ok: bool,
}

impl AsymptoticReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }

    pub fn ratio_within(&self, lo: f64, hi: f64) -> bool {
        (lo..=hi).contains(&self.mean_ratio)
    }
}

pub fn asymptotic_report(n: usize, s: f64) -> Result<AsymptoticReport> {
    require_n(n, 2)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "s",
            detail: format!("asymptotic bounds need s in [0, 1], got {s}"),
        });
    }
    let mu = mu(n, s);
    let sigma2 = sigma2(n, s);
    let nf = n as f64;
    let (mean_ratio, variance_lower) = if s < 1.0 {
        let g = nf.powf(1.0 - s);
        (mu * (1.0 - s) / g, (g - 1.0) / (4.0 - 4.0 * s))
    } else {
        (mu / nf.ln(), nf.ln() / 4.0)
    };
    Ok(AsymptoticReport {
        n,
        s,
        mu,
        sigma2,
        mean_ratio,
        variance_lower,
        lower_ok: sigma2 >= variance_lower,
        upper_ok: sigma2 <= mu,
    })
}

/// Comparison of `sigma_n^2(s)` against the zeta partial sums for `s > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaCapReport {
    pub n: usize,
    pub s: f64,
    pub sigma2: f64,
    /// `sum_{k=1}^{n-1} k^{-s}`.
    pub partial_sum: f64,
    /// Partial sum plus the integral tail bound; an upper bound on `zeta(s)`.
    pub zeta_upper: f64,
    pub passed: bool,
}

pub fn zeta_cap_check(n: usize, s: f64) -> Result<ZetaCapReport> {
    require_n(n, 1)?;
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            what: "s",
            detail: format!("zeta cap needs s > 1, got {s}"),
        });
    }
    let sigma2 = sigma2(n, s);
    let m = (n - 1).max(1);
    let head = partial_zeta(m, s);
    let zeta_upper = head + (m as f64).powf(1.0 - s) / (s - 1.0);
    let partial_sum = partial_zeta(n - 1, s);

    // partial sums along a doubling ladder must increase and stay under the cap
    let mut ladder_ok = true;
    let mut prev = 0.0;
    let mut j = 1;
    while j <= n - 1 {
        let v = partial_zeta(j, s);
        ladder_ok &= v > prev && v <= zeta_upper;
        prev = v;
        j *= 2;
    }
    Ok(ZetaCapReport {
        n,
        s,
        sigma2,
        partial_sum,
        zeta_upper,
        passed: ladder_ok && sigma2 <= partial_sum && partial_sum <= zeta_upper,
    })
}
