//! The defining recurrence `P_n = x / h_s(n) * sum_{k<n} P_k`, evaluated in
//! extended-range floating point. This is a cross-check for [`row_product`],
//! not a production path.
//!
//! [`row_product`]: super::row_product

use std::ops::{Add, Mul};

use crate::error::{require_n, Error, Result};
use crate::param::ScaleParam;

pub const DEFAULT_RECURRENCE_CAP: usize = 300;

/// `mantissa * 2^exponent` with `mantissa` in `[0.5, 1)` or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    mantissa: f64,
    exponent: i64,
}

impl ExtFloat {
    pub const ZERO: Self = Self { mantissa: 0.0, exponent: 0 };

    pub fn from_f64(x: f64) -> Self {
        Self { mantissa: x, exponent: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return Self { mantissa: self.mantissa, exponent: 0 };
        }
        let (m, e) = frexp(self.mantissa);
        Self { mantissa: m, exponent: self.exponent + e }
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn ln(self) -> f64 {
        self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// Nearest `f64`, flushing to zero or infinity outside the range.
    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }
}

impl Add for ExtFloat {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exponent >= rhs.exponent { (self, rhs) } else { (rhs, self) };
        let shift = lo.exponent - hi.exponent;
        Self {
            mantissa: hi.mantissa + ldexp(lo.mantissa, shift),
            exponent: hi.exponent,
        }
        .normalized()
    }
}

impl Mul<f64> for ExtFloat {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        Self { mantissa: self.mantissa * rhs, exponent: self.exponent }.normalized()
    }
}

pub(crate) fn frexp(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, raw_exp - 1022)
}

pub(crate) fn ldexp(mut m: f64, mut e: i64) -> f64 {
    if m == 0.0 {
        return m;
    }
    if e < -2200 {
        return 0.0;
    }
    if e > 2200 {
        return m * f64::INFINITY;
    }
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

/// Raw coefficient triangle `A_{m,k}(s)` for `m = 0..=n`, `k = 0..=m`.
pub fn row_recurrence(n: usize, s: ScaleParam) -> Result<Vec<Vec<ExtFloat>>> {
    row_recurrence_capped(n, s, DEFAULT_RECURRENCE_CAP)
}

pub fn row_recurrence_capped(n: usize, s: ScaleParam, cap: usize) -> Result<Vec<Vec<ExtFloat>>> {
    require_n(n, 1)?;
    if n > cap {
        return Err(Error::RecurrenceCap { n, cap });
    }
    let mut rows: Vec<Vec<ExtFloat>> = Vec::with_capacity(n + 1);
    rows.push(vec![ExtFloat::from_f64(1.0)]);
    // running sum of P_0..P_{m-1}
    let mut partial = vec![ExtFloat::from_f64(1.0)];
    for m in 1..=n {
        let inv_h = 1.0 / s.weight(m);
        let mut row = vec![ExtFloat::ZERO; m + 1];
        for (k, c) in partial.iter().enumerate() {
            row[k + 1] = *c * inv_h;
        }
        partial.resize(m + 1, ExtFloat::ZERO);
        for (acc, c) in partial.iter_mut().zip(&row) {
            *acc = *acc + *c;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Normalize a raw row by its own sum, returning plain floats.
pub fn normalize_raw(row: &[ExtFloat]) -> Vec<f64> {
    let total = row.iter().fold(ExtFloat::ZERO, |acc, &c| acc + c);
    let log_total = total.ln();
    row.iter()
        .map(|c| if c.is_zero() { 0.0 } else { (c.ln() - log_total).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(s: f64) -> ScaleParam {
        ScaleParam::new(s).unwrap()
    }

    fn plain(row: &[ExtFloat]) -> Vec<f64> {
        row.iter().map(|c| c.to_f64()).collect()
    }

    #[test]
    fn hand_expansions() {
        let t = row_recurrence(2, sp(1.0)).unwrap();
        assert_eq!(plain(&t[1]), vec![0.0, 1.0]);
        assert_eq!(plain(&t[2]), vec![0.0, 0.5, 0.5]);

        let t = row_recurrence(3, sp(1.0)).unwrap();
        let expected = [0.0, 1.0 / 3.0, 0.5, 1.0 / 6.0];
        for (a, b) in plain(&t[3]).iter().zip(expected) {
            assert_relative_eq!(*a, b, max_relative = 1e-15);
        }

        let t = row_recurrence(3, sp(0.0)).unwrap();
        assert_eq!(plain(&t[3]), vec![0.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            row_recurrence(301, sp(1.0)).unwrap_err(),
            Error::RecurrenceCap { n: 301, cap: 300 }
        );
        assert!(row_recurrence_capped(10, sp(1.0), 5).is_err());
    }

    #[test]
    fn extended_range_survives_huge_spread() {
        // A_{n,n}(2) = (n!)^{-2} is far below f64 range at n = 200
        let n = 200;
        let t = row_recurrence(n, sp(2.0)).unwrap();
        let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(t[n][n].ln(), -2.0 * log_fact, max_relative = 1e-12);
        assert_eq!(t[n][n].to_f64(), 0.0);
    }

    #[test]
    fn ext_float_arithmetic() {
        let a = ExtFloat::from_f64(3.0);
        let b = ExtFloat::from_f64(5e-310);
        assert_eq!((a + ExtFloat::ZERO).to_f64(), 3.0);
        assert_relative_eq!((a * 0.25).to_f64(), 0.75);
        assert_relative_eq!(b.to_f64(), 5e-310, max_relative = 1e-10);
        let mut tiny = ExtFloat::from_f64(1.0);
        for _ in 0..50 {
            tiny = tiny * 1e-300;
        }
        assert_relative_eq!(tiny.ln(), -15000.0 * 10f64.ln(), max_relative = 1e-12);
        assert_eq!((tiny + a).to_f64(), 3.0);
    }
}
