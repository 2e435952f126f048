//! Arbitrary-precision rows for integer exponents.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::product::ProbabilityRow;
use super::recurrence::ldexp;
use crate::error::{require_n, Error, Result};
use crate::param::ScaleParam;

pub const DEFAULT_EXPONENT_CAP: i64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "s")]
pub enum ExactRowKind {
    /// Unsigned Stirling numbers `c(n, k)` over `n!`.
    StirlingFirstKind,
    /// `C(n-1, k-1)` over `2^{n-1}`.
    BinomialShifted,
    /// Coefficients of `x prod_{k<n} (x + k^s)` over a denominator clearing `k^s` for `s < 0`.
    IntegerSRational(i64),
}

/// An exact coefficient row `numerators[k] / common_denominator`.
///
/// For the Stirling and binomial kinds the denominator is the row total, so
/// the entries are the probabilities. For [`ExactRowKind::IntegerSRational`]
/// the entries are the coefficients of the monic product
/// `(n!)^s P_n^{h_s}(x)`; probabilities come from dividing by the row total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRow {
    pub n: usize,
    pub kind: ExactRowKind,
    pub numerators: Vec<BigUint>,
    pub common_denominator: BigUint,
}

impl ExactRow {
    /// The exponent `s` this row corresponds to.
    pub fn scale(&self) -> i64 {
        match self.kind {
            ExactRowKind::StirlingFirstKind => 1,
            ExactRowKind::BinomialShifted => 0,
            ExactRowKind::IntegerSRational(s) => s,
        }
    }

    pub fn total(&self) -> BigUint {
        self.numerators.iter().sum()
    }

    /// `P(Z_n = k)` rounded to the nearest float.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total();
        self.numerators.iter().map(|c| ratio_to_f64(c, &total)).collect()
    }

    pub fn to_probability_row(&self) -> ProbabilityRow {
        ProbabilityRow {
            n: self.n,
            s: ScaleParam::new(self.scale() as f64).expect("integer scale is finite"),
            p: self.probabilities(),
        }
    }

    /// `(n!)^s A_{n,k}(s)` as an unreduced fraction `(numerator, denominator)`.
    pub fn monic_coefficient(&self, k: usize) -> (BigUint, BigUint) {
        match self.kind {
            ExactRowKind::StirlingFirstKind | ExactRowKind::BinomialShifted => {
                (self.numerators[k].clone(), BigUint::one())
            }
            ExactRowKind::IntegerSRational(_) => {
                (self.numerators[k].clone(), self.common_denominator.clone())
            }
        }
    }

    /// Exact check of `A_{n,n}(s) (n!)^s = 1`.
    pub fn leading_is_unit(&self) -> bool {
        let (num, den) = self.monic_coefficient(self.n);
        num == den
    }
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `num / den` correctly rounded to about one ulp, even when both exceed `f64`.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let shift = 80 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    ldexp(q.to_f64().unwrap_or(f64::INFINITY), -shift)
}

/// Unsigned Stirling numbers of the first kind `c(n, k)`, `k = 0..=n`.
pub fn stirling_row(n: usize) -> Result<ExactRow> {
    require_n(n, 1)?;
    // row for m = 1: c(1,0) = 0, c(1,1) = 1
    let mut row = vec![BigUint::zero(); n + 1];
    row[1] = BigUint::one();
    for m in 1..n {
        // c(m+1, k) = m c(m, k) + c(m, k-1)
        for k in (1..=m + 1).rev() {
            row[k] *= m;
            let (lo, hi) = row.split_at_mut(k);
            hi[0] += &lo[k - 1];
        }
    }
    Ok(ExactRow {
        n,
        kind: ExactRowKind::StirlingFirstKind,
        numerators: row,
        common_denominator: factorial(n),
    })
}

/// Shifted binomial row `C(n-1, k-1)` over `2^{n-1}`.
pub fn binomial_row(n: usize) -> Result<ExactRow> {
    require_n(n, 1)?;
    let mut row = vec![BigUint::zero(); n + 1];
    row[1] = BigUint::one();
    for m in 1..n {
        for k in (1..=m + 1).rev() {
            let (lo, hi) = row.split_at_mut(k);
            hi[0] += &lo[k - 1];
        }
    }
    Ok(ExactRow {
        n,
        kind: ExactRowKind::BinomialShifted,
        numerators: row,
        common_denominator: BigUint::one() << (n - 1),
    })
}

pub fn exact_row_integer_s(n: usize, s: i64) -> Result<ExactRow> {
    exact_row_integer_s_capped(n, s, DEFAULT_EXPONENT_CAP)
}

/// Exact expansion of `x prod_{k=1}^{n-1} (x + k^s)` for integer `s`.
pub fn exact_row_integer_s_capped(n: usize, s: i64, cap: i64) -> Result<ExactRow> {
    require_n(n, 1)?;
    if s.abs() > cap {
        return Err(Error::ExponentCap { s, cap });
    }
    let power = s.unsigned_abs() as u32;
    let mut row = vec![BigUint::zero(); n + 1];
    row[1] = BigUint::one();
    let mut denominator = BigUint::one();
    for k in 1..n {
        let w = BigUint::from(k).pow(power);
        // s >= 0: multiply by (x + k^s); s < 0: by (k^{|s|} x + 1)
        for j in (1..=k + 1).rev() {
            let (lo, hi) = row.split_at_mut(j);
            if s >= 0 {
                hi[0] *= &w;
                hi[0] += &lo[j - 1];
            } else {
                hi[0] += &lo[j - 1] * &w;
            }
        }
        if s < 0 {
            denominator *= &w;
        }
    }
    Ok(ExactRow {
        n,
        kind: ExactRowKind::IntegerSRational(s),
        numerators: row,
        common_denominator: denominator,
    })
}

/// Exact row for an integer exponent, picking the named family where one exists.
pub fn exact_row(n: usize, s: ScaleParam) -> Result<ExactRow> {
    match s.as_integer() {
        Some(0) => binomial_row(n),
        Some(1) => stirling_row(n),
        Some(si) => exact_row_integer_s(n, si),
        None => Err(Error::NonIntegerScale(s.value())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_stirling_rows() {
        assert_eq!(stirling_row(1).unwrap().numerators, ints(&[0, 1]));
        let r = stirling_row(3).unwrap();
        assert_eq!(r.numerators, ints(&[0, 2, 3, 1]));
        assert_eq!(r.common_denominator, BigUint::from(6u32));
        assert_eq!(stirling_row(5).unwrap().numerators, ints(&[0, 24, 50, 35, 10, 1]));
        assert!(stirling_row(0).is_err());
    }

    #[test]
    fn stirling_sum_is_factorial() {
        for n in [1, 2, 10, 57, 200] {
            let r = stirling_row(n).unwrap();
            assert_eq!(r.total(), factorial(n));
            assert_eq!(r.total(), r.common_denominator);
            assert!(r.leading_is_unit());
        }
    }

    #[test]
    fn binomial_rows() {
        let r = binomial_row(5).unwrap();
        assert_eq!(r.numerators, ints(&[0, 1, 4, 6, 4, 1]));
        assert_eq!(r.common_denominator, BigUint::from(16u32));
        let r = binomial_row(1).unwrap();
        assert_eq!(r.numerators, ints(&[0, 1]));
        assert_eq!(r.common_denominator, BigUint::one());
        let r = binomial_row(64).unwrap();
        assert_eq!(r.total(), r.common_denominator);
    }

    #[test]
    fn integer_s_rows() {
        let r = exact_row_integer_s(3, 1).unwrap();
        assert_eq!(r.numerators, ints(&[0, 2, 3, 1]));
        assert_eq!(r.total(), BigUint::from(6u32));

        let r = exact_row_integer_s(3, 0).unwrap();
        assert_eq!(r.numerators, ints(&[0, 1, 2, 1]));
        assert_eq!(r.total(), BigUint::from(4u32));

        // x (x + 1)(x + 1/2) = (2x^3 + 3x^2 + x) / 2
        let r = exact_row_integer_s(3, -1).unwrap();
        assert_eq!(r.numerators, ints(&[0, 1, 3, 2]));
        assert_eq!(r.common_denominator, BigUint::from(2u32));
        assert_eq!(ratio_to_f64(&r.total(), &r.common_denominator), 3.0);
        assert!(r.leading_is_unit());

        // s = -2: denominator ((n-1)!)^2
        let r = exact_row_integer_s(6, -2).unwrap();
        assert_eq!(r.common_denominator, factorial(5).pow(2));
        assert!(r.leading_is_unit());

        assert_eq!(
            exact_row_integer_s(3, 9).unwrap_err(),
            Error::ExponentCap { s: 9, cap: 8 }
        );
    }

    #[test]
    fn exact_row_dispatch() {
        let sp = |s| ScaleParam::new(s).unwrap();
        assert_eq!(exact_row(4, sp(0.0)).unwrap().kind, ExactRowKind::BinomialShifted);
        assert_eq!(exact_row(4, sp(1.0)).unwrap().kind, ExactRowKind::StirlingFirstKind);
        assert_eq!(exact_row(4, sp(2.0)).unwrap().kind, ExactRowKind::IntegerSRational(2));
        assert_eq!(exact_row(4, sp(0.5)).unwrap_err(), Error::NonIntegerScale(0.5));
    }

    #[test]
    fn ratio_conversion() {
        let third = ratio_to_f64(&BigUint::from(1u32), &BigUint::from(3u32));
        assert_eq!(third, 1.0 / 3.0);
        // 1000! / 999! = 1000 with both far outside f64
        assert_eq!(ratio_to_f64(&factorial(1000), &factorial(999)), 1000.0);
        let tiny = ratio_to_f64(&BigUint::one(), &factorial(170));
        assert!(tiny > 0.0 && tiny < 1e-300);
        assert_eq!(ratio_to_f64(&BigUint::one(), &factorial(200)), 0.0);
    }

    #[test]
    fn table2_exact_value() {
        let r = stirling_row(100).unwrap();
        let v = ratio_to_f64(&r.numerators[5], &factorial(99));
        assert!((v - 21.1204415).abs() < 5e-7, "{v}");
    }
}
