//! Decimal significand and significant-digit arithmetic.
//!
//! Every number x != 0 is written uniquely as sign * s * 10^k with
//! s in [1, 10); s is the significand and k the decimal exponent. By
//! convention the significand of 0 is 0 and S(-x) = S(x).

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, ToPrimitive};

use crate::error::{domain, BenfordError, Result};
use crate::fixed::log10_of_big_rational;

/// Sign, significand in [1,10) (or exactly 0), and decimal exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificandDecomposition<F> {
    pub sign: i8,
    pub significand: F,
    pub exponent: i64,
}

impl<F: Float + FromPrimitive> SignificandDecomposition<F> {
    /// sign * significand * 10^exponent.
    pub fn reconstruct(&self) -> F {
        let ten = F::from_f64(10.0).unwrap();
        let sign = F::from_i8(self.sign).unwrap();
        sign * self.significand * ten.powi(self.exponent as i32)
    }
}

/// Ordered significant digits D1..Dm; all zero exactly when x = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    pub digits: Vec<u8>,
}

impl DigitVector {
    pub fn is_valid(&self) -> bool {
        match self.digits.first() {
            None => false,
            Some(0) => self.digits.iter().all(|&d| d == 0),
            Some(d) => *d <= 9 && self.digits[1..].iter().all(|&d| d <= 9),
        }
    }

    pub fn first_digit(&self) -> u8 {
        self.digits[0]
    }
}

/// Decompose a finite real into sign, significand in [1,10), and exponent.
pub fn significand<F: Float + FromPrimitive>(x: F) -> Result<SignificandDecomposition<F>> {
    if !x.is_finite() {
        return Err(domain("significand of a non-finite value"));
    }
    if x.is_zero() {
        return Ok(SignificandDecomposition {
            sign: 0,
            significand: F::zero(),
            exponent: 0,
        });
    }
    let sign = if x > F::zero() { 1 } else { -1 };
    let a = x.abs();
    let ten = F::from_f64(10.0).unwrap();
    let mut exponent = a.log10().floor().to_i64().unwrap();
    let mut s = a / ten.powi(exponent as i32);
    // Float noise at decade boundaries: clamp back into [1, 10).
    if s < F::one() {
        s = s * ten;
        exponent -= 1;
    }
    if s >= ten {
        s = F::one();
        exponent += 1;
    }
    Ok(SignificandDecomposition {
        sign,
        significand: s,
        exponent,
    })
}

/// First m significant decimal digits of x (truncated, not rounded).
///
/// m is capped at 15: past that, the decimal digits of a binary double
/// carry no information about the number it represents.
pub fn digits(x: f64, m: usize) -> Result<DigitVector> {
    if !x.is_finite() {
        return Err(domain("digits of a non-finite value"));
    }
    if m == 0 || m > 15 {
        return Err(domain(format!("digit count {m} outside 1..=15")));
    }
    if x == 0.0 {
        return Ok(DigitVector { digits: vec![0; m] });
    }
    // Format the exact decimal expansion of |x| and truncate. 30 digits
    // after the point is far past the float budget, so rounding there
    // cannot reach the digits we keep.
    let s = format!("{:.*e}", 30, x.abs());
    let mantissa = s.split('e').next().unwrap();
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .take(m)
        .collect();
    debug_assert_eq!(digits.len(), m);
    Ok(DigitVector { digits })
}

/// First significant digit of x (0 only for x = 0).
pub fn first_digit(x: f64) -> Result<u8> {
    Ok(digits(x, 1)?.digits[0])
}

/// frac(log10 |x|), with log 0 := 0. Satisfies S(x) = 10^r for x != 0.
pub fn log_significand<F: Float + FromPrimitive>(x: F) -> Result<F> {
    if !x.is_finite() {
        return Err(domain("log_significand of a non-finite value"));
    }
    if x.is_zero() {
        return Ok(F::zero());
    }
    let l = x.abs().log10();
    let mut r = l - l.floor();
    if r >= F::one() {
        r = F::zero();
    }
    Ok(r)
}

const EXACT_POW_MAX_N: u64 = 100_000;
const EXACT_POW_MAX_BASE: u64 = 1_000_000;

/// Exact decomposition of (p/q)^n via big-integer arithmetic.
///
/// The significand is produced by extracting the first 17 decimal digits
/// of the exact power, so the exponent is always exact and the significand
/// is correct to the last ulp of the digit string.
pub fn significand_exact_pow(p: u64, q: u64, n: u64) -> Result<SignificandDecomposition<f64>> {
    if p == 0 || q == 0 {
        return Err(domain("exact power base must be a positive rational"));
    }
    if n == 0 {
        return Err(domain("exact power exponent must be >= 1"));
    }
    if n > EXACT_POW_MAX_N || p > EXACT_POW_MAX_BASE || q > EXACT_POW_MAX_BASE {
        return Err(BenfordError::Resource(format!(
            "exact power budget exceeded: base {p}/{q}, n {n}"
        )));
    }
    let pn = BigUint::from(p).pow(n as u32);
    let qn = BigUint::from(q).pow(n as u32);
    let (exponent, _) = log10_of_big_rational(&pn, &qn);
    // mantissa = floor(pn/qn / 10^(exponent-16)), a 17-digit integer.
    let shift = 16i64 - exponent;
    let (num, den) = if shift >= 0 {
        (pn * BigUint::from(10u32).pow(shift as u32), qn)
    } else {
        (pn, qn * BigUint::from(10u32).pow((-shift) as u32))
    };
    let mantissa = (num / den).to_f64().ok_or_else(|| domain("mantissa overflow"))?;
    Ok(SignificandDecomposition {
        sign: 1,
        significand: mantissa / 1e16,
        exponent,
    })
}
