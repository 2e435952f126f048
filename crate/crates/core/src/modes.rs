//! Modes of `{A_{n,k}(s)}_k`: detection, Darroch localization, the
//! unique-mode criterion, and solving `mu_n(s) = k0` for `s`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{exact_row, row_product, ExactRow, ProbabilityRow};
use crate::error::{require_n, Error, Result};
use crate::grid::{self, Execution};
use crate::moments::{harmonic, mu, mu_prime, mu_second};
use crate::param::ScaleParam;
use crate::sum::sum;

/// Relative gap below which two float entries count as a plateau.
pub const PLATEAU_REL_TOL: f64 = 1e-9;
/// Relative gap below which a float comparison is not trusted.
pub const AMBIGUITY_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub n: usize,
    pub s: f64,
    /// One index (peak) or two adjacent indices (plateau).
    pub modes: Vec<usize>,
    pub mu: f64,
    /// Every mode lies strictly within distance 1 of `mu`.
    pub darroch_ok: bool,
    /// The unique-mode criterion evaluated at `k0 = round(mu)`.
    pub unique_by_criterion: Option<bool>,
}

impl ModeReport {
    fn build(n: usize, s: f64, modes: Vec<usize>) -> Result<Self> {
        check_mode_shape(&modes)?;
        let mean = mu(n, s);
        let darroch_ok = modes.iter().all(|&m| (m as f64 - mean).abs() < 1.0);
        let k0 = mean.round();
        let unique_by_criterion = (k0 >= 0.0 && k0 <= n as f64)
            .then(|| unique_mode_criterion(mean, k0 as usize, n));
        if unique_by_criterion == Some(true) && modes != [k0 as usize] {
            return Err(Error::Integrity(format!(
                "criterion certifies a single mode at {k0} for n = {n}, s = {s}, found {modes:?}"
            )));
        }
        Ok(Self { n, s, modes, mu: mean, darroch_ok, unique_by_criterion })
    }

    pub fn is_peak(&self) -> bool {
        self.modes.len() == 1
    }
}

fn check_mode_shape(modes: &[usize]) -> Result<()> {
    match modes {
        [_] => Ok(()),
        [a, b] if b == &(a + 1) => Ok(()),
        _ => Err(Error::Integrity(format!(
            "a real-rooted row has one mode or two adjacent modes, found {modes:?}"
        ))),
    }
}

/// Modes of a float row. Near-ties that cannot be resolved in floating point
/// are recomputed exactly for integer `s`, and reported as ambiguous otherwise.
pub fn find_modes(row: &ProbabilityRow) -> Result<ModeReport> {
    require_n(row.n, 1)?;
    let peak = row.p.iter().copied().fold(0.0, f64::max);
    let plateau: Vec<usize> = indices_within(&row.p, peak, PLATEAU_REL_TOL);
    let near: Vec<usize> = indices_within(&row.p, peak, AMBIGUITY_REL_TOL);
    if near.len() > plateau.len() {
        if let Some(si) = row.s.as_integer() {
            if let Ok(exact) = exact_row(row.n, row.s) {
                debug_assert_eq!(exact.scale(), si);
                return find_modes_exact(&exact);
            }
        }
        return Err(Error::AmbiguousModes(near));
    }
    ModeReport::build(row.n, row.s.value(), plateau)
}

fn indices_within(p: &[f64], peak: f64, rel: f64) -> Vec<usize> {
    p.iter()
        .enumerate()
        .filter(|(_, &x)| x >= peak * (1.0 - rel))
        .map(|(k, _)| k)
        .collect()
}

/// Modes of an exact row by integer comparison.
pub fn find_modes_exact(row: &ExactRow) -> Result<ModeReport> {
    require_n(row.n, 1)?;
    let peak = row.numerators.iter().max().cloned().unwrap_or_else(BigUint::zero);
    let modes: Vec<usize> = row
        .numerators
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == peak)
        .map(|(k, _)| k)
        .collect();
    ModeReport::build(row.n, row.scale() as f64, modes)
}

/// Builds the row and requires every mode within distance 1 of the mean.
pub fn darroch_check(n: usize, s: f64) -> Result<ModeReport> {
    let row = row_product(n, ScaleParam::new(s)?)?;
    let report = find_modes(&row)?;
    if !report.darroch_ok {
        return Err(Error::Integrity(format!(
            "mode {:?} is not within 1 of mu = {} (n = {n}, s = {s})",
            report.modes, report.mu
        )));
    }
    Ok(report)
}

/// [`darroch_check`] over a list of `(n, s)` points, in input order.
pub fn darroch_grid(points: &[(usize, f64)], exec: Execution) -> Result<Vec<ModeReport>> {
    grid::try_map(points, exec, |&(n, s)| darroch_check(n, s))
}

/// Sufficient condition for exactly one mode at `k0`:
/// `k0 <= mu < k0 + 1/(k0+2)` or `k0 - 1/(n-k0+2) < mu <= k0`.
pub fn unique_mode_criterion(mu: f64, k0: usize, n: usize) -> bool {
    if k0 > n {
        return false;
    }
    let k = k0 as f64;
    let above = k <= mu && mu < k + 1.0 / (k + 2.0);
    let below = k - 1.0 / ((n - k0) as f64 + 2.0) < mu && mu <= k;
    above || below
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SParamSolution {
    pub n: usize,
    pub k0: usize,
    pub s_star: f64,
    /// `|mu_n(s_star) - k0|`.
    pub residual: f64,
    /// Open interval of `s` on which the unique-mode criterion holds for `k0`.
    pub window: (f64, f64),
}

/// Integers strictly between `H_n` and `(n+1)/2`.
pub fn admissible_targets(n: usize) -> std::ops::RangeInclusive<usize> {
    let lo = harmonic(n, 1).floor() as usize + 1;
    let half = (n as f64 + 1.0) / 2.0;
    let hi = half.ceil() as usize - 1;
    lo..=hi
}

/// Solves `mu_n(s) = target` on `[0, 1]` by Newton steps kept inside a
/// shrinking bisection bracket. `mu_n` is strictly decreasing there.
fn invert_mu(n: usize, target: f64) -> f64 {
    let f = |s: f64| mu(n, s) - target;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if f(lo) <= 0.0 {
        return lo;
    }
    if f(hi) >= 0.0 {
        return hi;
    }
    let mut s = 0.5;
    for _ in 0..200 {
        let fs = f(s);
        if fs.abs() <= 1e-14 {
            break;
        }
        if fs > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let d = mu_prime(n, s);
        let newton = s - fs / d;
        let next = if d < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - s).abs() < 1e-15 {
            s = next;
            break;
        }
        s = next;
    }
    s
}

/// Finds `s* in (0, 1)` with `mu_n(s*) = k0`, together with the window of `s`
/// around it on which `k0` is certified as the unique mode.
pub fn solve_s_for_mean(n: usize, k0: usize) -> Result<SParamSolution> {
    let range = admissible_targets(n);
    if n < 6 || !range.contains(&k0) {
        return Err(Error::Domain {
            what: "k0",
            detail: format!(
                "need n >= 6 and H_n < k0 < (n+1)/2; admissible k0 for n = {n}: {}",
                if range.is_empty() {
                    "none".to_string()
                } else {
                    format!("{}..={}", range.start(), range.end())
                }
            ),
        });
    }
    let k = k0 as f64;
    let s_star = invert_mu(n, k);
    let residual = (mu(n, s_star) - k).abs();
    if residual > 1e-12 {
        return Err(Error::Integrity(format!(
            "root finder stalled at s = {s_star} with residual {residual}"
        )));
    }
    let s_lo = invert_mu(n, k + 1.0 / (k + 2.0));
    let s_hi = invert_mu(n, k - 1.0 / ((n - k0) as f64 + 2.0));
    Ok(SParamSolution { n, k0, s_star, residual, window: (s_lo, s_hi) })
}

/// One entry of the Stirling-row mode scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErdosEntry {
    pub n: usize,
    pub mode: usize,
    /// `H_n`, the mean of the normalized row.
    pub mean: f64,
    /// The unique-mode criterion alone already certifies this `n`.
    pub certified_by_criterion: bool,
}

/// Verifies a single mode for every Stirling row `3 <= n <= n_max`.
pub fn erdos_unique_mode_scan(n_max: usize, exec: Execution) -> Result<Vec<ErdosEntry>> {
    require_n(n_max, 3)?;
    const CHUNK: usize = 64;
    let mut out = Vec::with_capacity(n_max - 2);
    let mut row = vec![BigUint::zero(), BigUint::one()];
    let mut chunk: Vec<(usize, Vec<BigUint>)> = Vec::with_capacity(CHUNK);
    for m in 1..n_max {
        // advance from c(m, .) to c(m+1, .)
        row.push(BigUint::zero());
        for k in (1..=m + 1).rev() {
            row[k] *= m;
            let (lo, hi) = row.split_at_mut(k);
            hi[0] += &lo[k - 1];
        }
        if m + 1 >= 3 {
            chunk.push((m + 1, row.clone()));
        }
        if chunk.len() == CHUNK || m + 1 == n_max {
            out.extend(grid::try_map(&chunk, exec, |(n, r)| scan_entry(*n, r))?);
            chunk.clear();
        }
    }
    Ok(out)
}

fn scan_entry(n: usize, row: &[BigUint]) -> Result<ErdosEntry> {
    let peak = row.iter().max().expect("row is non-empty");
    let modes: Vec<usize> = row.iter().enumerate().filter(|(_, c)| *c == peak).map(|(k, _)| k).collect();
    if modes.len() != 1 {
        return Err(Error::Integrity(format!("Stirling row n = {n} has modes {modes:?}")));
    }
    let mean = harmonic(n, 1);
    Ok(ErdosEntry {
        n,
        mode: modes[0],
        mean,
        certified_by_criterion: unique_mode_criterion(mean, modes[0], n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub n: usize,
    pub s: f64,
    /// `|mu_n(s) - (n+1)/2 + (1/4) sum_{k=2}^{n-1} ln k * s|`.
    pub remainder: f64,
    /// `(s^2 / 2) max_{xi in [0,1]} |mu_n''(xi)|`.
    pub bound: f64,
    pub max_second: f64,
    pub argmax_xi: f64,
    pub holds: bool,
}

/// Checks the second-order Taylor bound of `mu_n` around `s = 0`.
pub fn taylor_mu_check(n: usize, s: f64) -> Result<TaylorReport> {
    require_n(n, 3)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain { what: "s", detail: format!("need s in [0, 1], got {s}") });
    }
    let linear = 0.25 * sum((2..n).map(|k| (k as f64).ln()));
    let remainder = (mu(n, s) - (n as f64 + 1.0) / 2.0 + linear * s).abs();
    let (argmax_xi, max_second) = max_abs_second(n);
    let bound = 0.5 * s * s * max_second;
    let slack = 8.0 * f64::EPSILON * (n as f64 + 1.0);
    Ok(TaylorReport { n, s, remainder, bound, max_second, argmax_xi, holds: remainder <= bound + slack })
}

/// `max |mu_n''|` on `[0, 1]`: 64-point grid, then golden-section refinement
/// around the best grid point.
fn max_abs_second(n: usize) -> (f64, f64) {
    let g = |x: f64| mu_second(n, x).abs();
    const POINTS: usize = 64;
    let step = 1.0 / (POINTS - 1) as f64;
    let (best_i, _) = (0..POINTS)
        .map(|i| (i, g(i as f64 * step)))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let mut a = (best_i as f64 - 1.0).max(0.0) * step;
    let mut b = (best_i as f64 + 1.0).min((POINTS - 1) as f64) * step;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if g(c) >= g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = 0.5 * (a + b);
    let grid_best = best_i as f64 * step;
    if g(mid) >= g(grid_best) {
        (mid, g(mid))
    } else {
        (grid_best, g(grid_best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{binomial_row, stirling_row};

    fn sp(s: f64) -> ScaleParam {
        ScaleParam::new(s).unwrap()
    }

    #[test]
    fn binomial_plateau_and_stirling_peaks() {
        let r = find_modes_exact(&binomial_row(10).unwrap()).unwrap();
        assert_eq!(r.modes, vec![5, 6]);
        assert!(r.darroch_ok);
        assert_eq!(find_modes_exact(&stirling_row(10).unwrap()).unwrap().modes, vec![3]);
        assert_eq!(find_modes_exact(&stirling_row(1000).unwrap()).unwrap().modes, vec![7]);
    }

    #[test]
    fn float_plateau_is_merged() {
        let r = find_modes(&row_product(10, sp(0.0)).unwrap()).unwrap();
        assert_eq!(r.modes, vec![5, 6]);
        let r = find_modes(&row_product(7, sp(0.0)).unwrap()).unwrap();
        assert_eq!(r.modes, vec![4]);
    }

    #[test]
    fn bad_mode_shapes_are_integrity_errors() {
        let split = ProbabilityRow { n: 4, s: sp(0.5), p: vec![0.0, 0.3, 0.2, 0.3, 0.2] };
        assert!(matches!(find_modes(&split), Err(Error::Integrity(_))));
        let flat = ProbabilityRow { n: 3, s: sp(0.5), p: vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0] };
        assert!(matches!(find_modes(&flat), Err(Error::Integrity(_))));
    }

    #[test]
    fn near_ties_escalate() {
        // integer s: resolved exactly, here a genuine plateau
        let mut row = row_product(6, sp(0.0)).unwrap();
        row.p[4] *= 1.0 - 1e-7;
        assert_eq!(find_modes(&row).unwrap().modes, vec![3, 4]);
        // non-integer s: refused
        let mut row = row_product(6, sp(0.5)).unwrap();
        let m = find_modes(&row).unwrap().modes[0];
        row.p[m + 1] = row.p[m] * (1.0 - 1e-7);
        assert!(matches!(find_modes(&row), Err(Error::AmbiguousModes(_))));
    }

    #[test]
    fn darroch_examples() {
        let r = darroch_check(10, 1.0).unwrap();
        assert_eq!(r.modes, vec![3]);
        assert!((r.mu - 2.93).abs() < 0.005);
        let r = darroch_check(7, 0.0).unwrap();
        assert_eq!((r.modes.clone(), r.mu), (vec![4], 4.0));
        let r = darroch_check(50, 0.37).unwrap();
        assert!(r.modes.iter().all(|&m| (m as f64 - r.mu).abs() < 1.0));
    }

    #[test]
    fn criterion_examples() {
        assert!(unique_mode_criterion(harmonic(10, 1), 3, 10));
        let h30 = harmonic(30, 1);
        assert!((h30 - 3.995).abs() < 0.0005);
        assert!(unique_mode_criterion(h30, 4, 30));
        assert!(!unique_mode_criterion(2.5, 2, 4));
        assert!(!unique_mode_criterion(2.0, 5, 4));
    }

    #[test]
    fn solver_examples() {
        let sol = solve_s_for_mean(10, 4).unwrap();
        assert!(sol.s_star > 0.0 && sol.s_star < 1.0);
        assert!(sol.residual <= 1e-12);
        assert!(sol.window.0 < sol.s_star && sol.s_star < sol.window.1);
        let modes = find_modes(&row_product(10, sp(sol.s_star)).unwrap()).unwrap();
        assert_eq!(modes.modes, vec![4]);

        assert_eq!(admissible_targets(6), 3..=3);
        assert!(solve_s_for_mean(6, 3).unwrap().residual <= 1e-12);

        let err = solve_s_for_mean(10, 6).unwrap_err();
        assert!(err.to_string().contains("3..=5"), "{err}");
        assert!(solve_s_for_mean(5, 3).is_err());
    }

    #[test]
    fn erdos_scan_matches_table() {
        let scan = erdos_unique_mode_scan(100, Execution::default()).unwrap();
        let first: Vec<usize> = scan.iter().take(8).map(|e| e.mode).collect();
        assert_eq!(first, vec![2, 2, 2, 2, 2, 3, 3, 3]);
        for e in scan.iter().filter(|e| (83..=95).contains(&e.n)) {
            assert_eq!(e.mode, 5);
            assert!(e.certified_by_criterion);
        }
        assert_eq!(scan.last().unwrap().n, 100);
        assert_eq!(scan.last().unwrap().mode, 5);
        assert!(erdos_unique_mode_scan(2, Execution::Sequential).is_err());
    }

    #[test]
    fn taylor_examples() {
        let r = taylor_mu_check(3, 0.0).unwrap();
        assert_eq!((r.remainder, r.bound), (0.0, 0.0));
        assert!(r.holds);
        assert!(taylor_mu_check(10, 0.5).unwrap().holds);
        let r = taylor_mu_check(100, 1.0).unwrap();
        let lhs = (harmonic(100, 1) - 50.5 + 0.25 * (2..100).map(|k| (k as f64).ln()).sum::<f64>()).abs();
        assert!((r.remainder - lhs).abs() < 1e-9);
        assert!(r.holds);
    }
}
