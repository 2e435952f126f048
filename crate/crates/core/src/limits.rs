//! Kolmogorov distance to the normal law, Berry-Esseen and local-limit
//! reports, and the Gaussian approximation of Stirling numbers.

use serde::{Deserialize, Serialize};

use crate::coeff::{factorial, ratio_to_f64, row_product, stirling_row, ProbabilityRow};
use crate::error::{require_n, Error, Result};
use crate::moments::{mu, rho_sum, sigma2};
use crate::normal::{normal_cdf, normal_pdf};
use crate::param::ScaleParam;

/// Berry-Esseen constant.
pub const BERRY_ESSEEN_C: f64 = 0.7975;

/// `sup_x |P((Z - mu)/sigma <= x) - Phi(x)|` for a lattice row.
pub fn kolmogorov_distance(row: &ProbabilityRow, mu: f64, sigma: f64) -> Result<f64> {
    kolmogorov_distance_with(row, mu, sigma, false)
}

/// As [`kolmogorov_distance`]. With `continuity_correction` the comparison is
/// `max_k |F(k) - Phi((k + 1/2 - mu)/sigma)|` at the lattice points only, which
/// is not a supremum over all `x`.
pub fn kolmogorov_distance_with(
    row: &ProbabilityRow,
    mu: f64,
    sigma: f64,
    continuity_correction: bool,
) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain {
            what: "sigma",
            detail: format!("Kolmogorov distance needs sigma > 0, got {sigma}"),
        });
    }
    let cdf = row.cdf();
    if continuity_correction {
        return Ok(cdf
            .iter()
            .enumerate()
            .map(|(k, &fk)| (fk - normal_cdf((k as f64 + 0.5 - mu) / sigma)).abs())
            .fold(0.0, f64::max));
    }
    // The step CDF jumps at each k; between jumps Phi is monotone, so the
    // supremum is attained at a jump, from the left or from the right.
    let mut best: f64 = 0.0;
    let mut below = 0.0;
    for (k, &fk) in cdf.iter().enumerate() {
        let phi = normal_cdf((k as f64 - mu) / sigma);
        best = best.max((fk - phi).abs()).max((phi - below).abs());
        below = fk;
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub n: usize,
    pub s: f64,
    pub mu: f64,
    pub sigma: f64,
    pub sup_distance: f64,
    /// `C * rho_sum / sigma^3`.
    pub be_bound: f64,
    /// `C / sigma`.
    pub coarse_bound: f64,
    pub passed: bool,
}

/// Berry-Esseen certificate for `Z_n(s)`, `s in [0, 1]`.
pub fn clt_check(n: usize, s: f64) -> Result<CltReport> {
    require_n(n, 2)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "s",
            detail: format!("the CLT certificate is stated for s in [0, 1], got {s}"),
        });
    }
    let row = row_product(n, ScaleParam::new(s)?)?;
    let mu = mu(n, s);
    let sigma = sigma2(n, s).sqrt();
    let sup_distance = kolmogorov_distance(&row, mu, sigma)?;
    let be_bound = BERRY_ESSEEN_C * rho_sum(n, s) / sigma.powi(3);
    let coarse_bound = BERRY_ESSEEN_C / sigma;
    Ok(CltReport {
        n,
        s,
        mu,
        sigma,
        sup_distance,
        be_bound,
        coarse_bound,
        passed: sup_distance <= be_bound && be_bound <= coarse_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LltReport {
    pub n: usize,
    pub s: f64,
    pub mu: f64,
    pub sigma: f64,
    /// `max_k |sigma p[k] - phi((k - mu)/sigma)|`.
    pub max_dev: f64,
    pub argmax_k: usize,
    /// `max_dev * sigma`.
    pub empirical_k: f64,
}

pub fn llt_from_row(row: &ProbabilityRow, mu: f64, sigma: f64) -> LltReport {
    let (argmax_k, max_dev) = row
        .p
        .iter()
        .enumerate()
        .map(|(k, &pk)| (k, (sigma * pk - normal_pdf((k as f64 - mu) / sigma)).abs()))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    LltReport {
        n: row.n,
        s: row.s.value(),
        mu,
        sigma,
        max_dev,
        argmax_k,
        empirical_k: max_dev * sigma,
    }
}

/// Local-limit deviation of `Z_n(s)` from the Gaussian density.
pub fn llt_check(n: usize, s: f64) -> Result<LltReport> {
    require_n(n, 2)?;
    let row = row_product(n, ScaleParam::new(s)?)?;
    Ok(llt_from_row(&row, mu(n, s), sigma2(n, s).sqrt()))
}

/// `max |sigma p[k] / phi(x_k) - 1|` over `|k - mu| <= width * sigma`.
pub fn local_ratio_deviation(row: &ProbabilityRow, mu: f64, sigma: f64, width: f64) -> f64 {
    row.p
        .iter()
        .enumerate()
        .filter(|(k, _)| (*k as f64 - mu).abs() <= width * sigma)
        .map(|(k, &pk)| (sigma * pk / normal_pdf((k as f64 - mu) / sigma) - 1.0).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub n: usize,
    pub k: usize,
    /// `c(n, k) / (n-1)!`.
    pub exact_value: f64,
    /// `n phi((k - H_n) / sigma_n(1)) / sigma_n(1)`.
    pub approx_value: f64,
    pub relative_error_percent: f64,
}

/// Gaussian approximation of `c(n, k) / (n-1)!` from the local limit at `s = 1`.
pub fn approx_stirling(n: usize, k: usize) -> Result<ApproxReport> {
    require_n(n, 2)?;
    if !(1..=n).contains(&k) {
        return Err(Error::Domain {
            what: "k",
            detail: format!("k must lie in 1..={n}, got {k}"),
        });
    }
    let row = stirling_row(n)?;
    let exact_value = ratio_to_f64(&row.numerators[k], &factorial(n - 1));
    let mean = mu(n, 1.0);
    let sigma = sigma2(n, 1.0).sqrt();
    let approx_value = n as f64 * normal_pdf((k as f64 - mean) / sigma) / sigma;
    Ok(ApproxReport {
        n,
        k,
        exact_value,
        approx_value,
        relative_error_percent: (approx_value - exact_value).abs() / exact_value * 100.0,
    })
}
