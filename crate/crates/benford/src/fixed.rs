//! 128-bit fixed-point fractional parts and a high-precision decimal
//! logarithm for exact rationals.
//!
//! Long multiplicative recurrences need `frac(n * alpha)` without the
//! cumulative drift of repeated float addition. `Frac128` stores a number
//! in [0, 1) as a `u128` scaled by 2^128; modular addition and
//! multiplication by an index are then exact, so the only error left is
//! the error of the representation of `alpha` itself (at most 2^-128 for
//! rationals, one f64 ulp for float inputs).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

/// A fractional part in [0, 1), stored as value * 2^128.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Frac128(pub u128);

const SCALE_F64: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0; // 2^128

impl Frac128 {
    pub const ZERO: Frac128 = Frac128(0);

    /// Fractional part of a finite f64, exact up to the f64's own precision.
    pub fn from_f64(x: f64) -> Frac128 {
        let f = x - x.floor();
        if f >= 1.0 {
            // x was a negative number so close to an integer that the
            // subtraction rounded up.
            return Frac128(0);
        }
        let hi = (f * 18_446_744_073_709_551_616.0).floor(); // f * 2^64
        let lo = (f * 18_446_744_073_709_551_616.0 - hi) * 18_446_744_073_709_551_616.0;
        Frac128(((hi as u128) << 64).wrapping_add(lo as u128))
    }

    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / SCALE_F64;
        if v >= 1.0 {
            // Values within 2^-54 of 1 round up to 1.0; keep the result
            // in [0, 1) at the largest float below 1.
            f64::from_bits(0x3FEF_FFFF_FFFF_FFFF)
        } else {
            v
        }
    }

    /// frac(n * self), exact in the fixed-point representation.
    pub fn mul_index(self, n: u64) -> Frac128 {
        Frac128(self.0.wrapping_mul(n as u128))
    }

    /// frac(self + other), exact.
    pub fn add(self, other: Frac128) -> Frac128 {
        Frac128(self.0.wrapping_add(other.0))
    }

    /// Exact ratio r/q with 0 <= r < q, rounded down to 2^-128.
    pub fn from_ratio(r: u64, q: u64) -> Frac128 {
        debug_assert!(r < q);
        let scaled = (BigUint::from(r) << 128u32) / BigUint::from(q);
        Frac128(big_to_u128(&scaled))
    }
}

fn big_to_u128(x: &BigUint) -> u128 {
    x.to_u128().expect("value exceeds 128 bits")
}

/// Number of decimal digits of a positive big integer.
fn decimal_digits(x: &BigUint) -> i64 {
    // Cheap estimate from the bit length, corrected by comparison.
    let bits = x.bits() as i64;
    let mut d = ((bits - 1) as f64 * std::f64::consts::LN_2 / std::f64::consts::LN_10) as i64;
    if d < 0 {
        d = 0;
    }
    let mut p = BigUint::from(10u32).pow(d as u32);
    while &p <= x {
        p *= 10u32;
        d += 1;
    }
    d // 10^(d-1) <= x < 10^d
}

// Guard bits for the digit-extraction loop: squaring doubles the relative
// error each iteration, so extracting 128 bits needs ~128 extra bits of
// working precision.
const LOG_WORK_BITS: u32 = 320;
const LOG_OUT_BITS: u32 = 128;

/// High-precision log10(p/q) for positive big integers p, q.
///
/// Returns (floor, frac) with log10(p/q) = floor + frac, frac in [0,1)
/// accurate to 2^-128. Uses binary digit extraction by repeated squaring
/// in big-integer fixed point.
pub fn log10_of_big_rational(p: &BigUint, q: &BigUint) -> (i64, Frac128) {
    assert!(!p.is_zero() && !q.is_zero(), "log10 of zero or infinite ratio");
    // Normalize p/q into [1, 10) * 10^k.
    let mut k = decimal_digits(p) - decimal_digits(q);
    let ten = BigUint::from(10u32);
    let (mut num, mut den) = (p.clone(), q.clone());
    if k >= 0 {
        den *= ten.pow(k as u32);
    } else {
        num *= ten.pow((-k) as u32);
    }
    if num < den {
        num *= 10u32;
        k -= 1;
    } else if num >= &den * 10u32 {
        den *= 10u32;
        k += 1;
    }
    debug_assert!(num >= den && num < &den * 10u32);

    // y = (num/den) in fixed point with LOG_WORK_BITS fractional bits.
    let mut y: BigUint = (num << LOG_WORK_BITS) / den;
    let ten_scaled: BigUint = BigUint::from(10u32) << LOG_WORK_BITS;
    let mut frac = BigUint::zero();
    for _ in 0..LOG_OUT_BITS {
        frac <<= 1u32;
        y = (&y * &y) >> LOG_WORK_BITS;
        if y >= ten_scaled {
            y = &y / 10u32;
            frac += 1u32;
        }
    }
    (k, Frac128(big_to_u128(&frac)))
}

/// log10 of a positive ratio of machine integers.
pub fn log10_of_rational(p: u64, q: u64) -> (i64, Frac128) {
    log10_of_big_rational(&BigUint::from(p), &BigUint::from(q))
}

/// frac(log10 2) to 128 bits.
pub static LOG10_2: Lazy<Frac128> = Lazy::new(|| log10_of_rational(2, 1).1);

/// frac(log10 x) of a positive big integer, accurate to ~1e-15 regardless
/// of how many digits x has.
pub fn frac_log10_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v = x.to_u64().unwrap() as f64;
        let l = v.log10();
        return l - l.floor();
    }
    // x ~= m * 2^(bits-64) with m holding the top 64 bits.
    let shift = bits - 64;
    let m = (x >> shift).to_u64().unwrap() as f64;
    // shift * log10(2) taken mod 1 in fixed point, so the error does not
    // grow with the magnitude of x.
    let t = LOG10_2.mul_index(shift).to_f64();
    let l = t + m.log10();
    l - l.floor()
}

/// A signed logarithm with an exact integer part and a 128-bit fractional
/// part: value = int + frac. Used by iterated maps whose log-magnitudes
/// grow far beyond any machine-integer range.
#[derive(Debug, Clone, PartialEq)]
pub struct LogValue {
    pub int: BigInt,
    pub frac: Frac128,
}

impl LogValue {
    pub fn from_f64(x: f64) -> LogValue {
        LogValue {
            int: BigInt::from(x.floor() as i64),
            frac: Frac128::from_f64(x),
        }
    }

    pub fn from_parts(int: BigInt, frac: Frac128) -> LogValue {
        LogValue { int, frac }
    }

    pub fn frac_f64(&self) -> f64 {
        self.frac.to_f64()
    }

    /// Approximate real value; saturates for huge integer parts.
    pub fn approx_f64(&self) -> f64 {
        self.int.to_f64().unwrap_or(f64::INFINITY) + self.frac.to_f64()
    }

    pub fn add(&self, other: &LogValue) -> LogValue {
        let (sum, carry) = self.frac.0.overflowing_add(other.frac.0);
        LogValue {
            int: &self.int + &other.int + if carry { 1 } else { 0 },
            frac: Frac128(sum),
        }
    }

    /// Multiply by a rational p/q (q > 0), rounding the fixed-point tail down.
    pub fn mul_rational(&self, p: i64, q: u64) -> LogValue {
        let combined: BigInt = (&self.int << 128u32) + BigInt::from(self.frac.0);
        let scaled = combined * BigInt::from(p);
        let q = BigInt::from(q);
        let v = scaled.div_floor(&q);
        let int = (&v) >> 128u32;
        let frac_big = &v - (&int << 128u32);
        debug_assert!(!frac_big.is_negative());
        LogValue {
            int,
            frac: Frac128(big_to_u128(&frac_big.to_biguint().unwrap())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn log10_2_matches_float() {
        let (int, frac) = log10_of_rational(2, 1);
        assert_eq!(int, 0);
        assert!((frac.to_f64() - 2f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn log10_of_powers_of_ten_is_exact() {
        for k in 1..8u32 {
            let (int, frac) = log10_of_rational(10u64.pow(k), 1);
            assert_eq!(int, k as i64);
            assert_eq!(frac, Frac128::ZERO);
        }
        let (int, frac) = log10_of_rational(1, 1000);
        assert_eq!(int, -3);
        assert_eq!(frac, Frac128::ZERO);
    }

    #[test]
    fn log10_1024() {
        let (int, frac) = log10_of_rational(1024, 1);
        assert_eq!(int, 3);
        assert!((frac.to_f64() - 1.024f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn log10_reciprocal() {
        let (int, frac) = log10_of_rational(1, 8);
        // 1/8 = 1.25e-1, so log10 = -1 + log10(1.25)
        assert_eq!(int, -1);
        assert!((frac.to_f64() - 1.25f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn mul_index_matches_direct_multiplication() {
        let a = log10_of_rational(2, 1).1;
        for n in [1u64, 2, 17, 1000, 999_983] {
            let direct = (n as f64 * 2f64.log10()).rem_euclid(1.0);
            let fixed = a.mul_index(n).to_f64();
            assert!((direct - fixed).abs() < 1e-9 || (1.0 - (direct - fixed).abs()) < 1e-9);
        }
    }

    #[test]
    fn frac_log10_of_big_factorial() {
        // 25! = 15511210043330985984000000; log10 ~ 25.190645
        let mut f = BigUint::one();
        for i in 2u32..=25 {
            f *= i;
        }
        let expected: f64 = (2..=25u32).map(|i| (i as f64).log10()).sum();
        let got = frac_log10_biguint(&f);
        assert!((got - (expected - expected.floor())).abs() < 1e-12);
    }

    #[test]
    fn logvalue_mul_rational_roundtrip() {
        let l = LogValue::from_f64(3.75);
        let doubled = l.mul_rational(3, 2);
        assert!((doubled.approx_f64() - 5.625).abs() < 1e-12);
        let back = doubled.mul_rational(2, 3);
        assert!((back.approx_f64() - 3.75).abs() < 1e-12);
    }

    #[test]
    fn logvalue_negative_values() {
        let l = LogValue::from_f64(-1.3);
        assert!((l.approx_f64() + 1.3).abs() < 1e-12);
        assert!((l.frac_f64() - 0.7).abs() < 1e-12);
        let tripled = l.mul_rational(3, 1);
        assert!((tripled.approx_f64() + 3.9).abs() < 1e-12);
    }
}
