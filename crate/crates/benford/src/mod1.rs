//! Fractional-part sequences, star discrepancy, and equidistribution
//! testing. A sequence is Benford exactly when the fractional parts of
//! its decimal logarithms equidistribute on [0, 1); star discrepancy is
//! the finite-N surrogate for that limit.

use num_traits::{Float, FromPrimitive, ToPrimitive};

use crate::error::{domain, Result};
use crate::fixed::Frac128;

/// A finite sequence of fractional parts, every value in [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Mod1Sequence {
    values: Vec<f64>,
}

impl Mod1Sequence {
    pub fn new(values: Vec<f64>) -> Result<Mod1Sequence> {
        if values.is_empty() {
            return Err(domain("mod-1 sequence must be non-empty"));
        }
        if values.iter().any(|v| !(0.0..1.0).contains(v)) {
            return Err(domain("mod-1 sequence value outside [0, 1)"));
        }
        Ok(Mod1Sequence { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Significands 10^u of the stored fractional parts.
    pub fn significands(&self) -> Vec<f64> {
        self.values.iter().map(|u| 10f64.powf(*u)).collect()
    }

    /// First digits floor(10^u) of the stored fractional parts.
    ///
    /// A 5e-12 nudge in log space keeps exact digit boundaries (powers of
    /// 2, Fibonacci numbers) from flooring one digit low under float noise.
    pub fn first_digits(&self) -> Vec<u8> {
        self.values
            .iter()
            .map(|u| {
                let s = 10f64.powf(*u + 5e-12);
                if s >= 10.0 {
                    1
                } else {
                    (s.floor() as u8).clamp(1, 9)
                }
            })
            .collect()
    }
}

/// Star discrepancy of a point set together with where the supremum sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyResult {
    pub star_discrepancy: f64,
    pub n: usize,
    pub sup_location: f64,
}

/// x - floor(x), in [0, 1).
pub fn frac<F: Float>(x: F) -> F {
    let f = x - x.floor();
    if f >= F::one() {
        F::zero()
    } else {
        f
    }
}

/// max{k in Z : k <= x}.
pub fn floor_part<F: Float + FromPrimitive + ToPrimitive>(x: F) -> Result<i64> {
    if !x.is_finite() {
        return Err(domain("floor of a non-finite value"));
    }
    let limit = F::from_f64(4.611_686_018_427_387_9e18).unwrap(); // 2^62
    if x.abs() >= limit {
        return Err(domain("floor magnitude exceeds 2^62"));
    }
    Ok(x.floor().to_i64().unwrap())
}

/// Exact star discrepancy via the sorted-order formula:
/// D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N).
pub fn star_discrepancy(s: &Mod1Sequence) -> DiscrepancyResult {
    let mut sorted = s.values().to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let nf = n as f64;
    let mut best = 0.0;
    let mut loc = sorted[0];
    for (i, &u) in sorted.iter().enumerate() {
        let above = (i + 1) as f64 / nf - u;
        let below = u - i as f64 / nf;
        let local = above.max(below);
        if local > best {
            best = local;
            loc = u;
        }
    }
    DiscrepancyResult {
        star_discrepancy: best,
        n,
        sup_location: loc,
    }
}

/// Kolmogorov distance of a point set in [0,1) to the uniform CDF.
/// Identical to the star discrepancy; kept as a named alias for the
/// goodness-of-fit reading of the same quantity.
pub fn kolmogorov_to_uniform(s: &Mod1Sequence) -> f64 {
    star_discrepancy(s).star_discrepancy
}

/// Sup-norm distance between the empirical CDF of `sorted` points and a
/// reference CDF, evaluated at both one-sided limits of every jump.
pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut best = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        best = best.max(((i + 1) as f64 / n - c).abs());
        best = best.max((c - i as f64 / n).abs());
    }
    best
}

/// (frac(alpha), frac(2 alpha), ..., frac(n alpha)) for a float alpha.
///
/// Each term is computed positionally from a 128-bit fixed-point image of
/// frac(alpha), so there is no accumulated drift: the error per term is
/// bounded by n * 2^-128 plus the representation error of alpha itself.
pub fn weyl_sequence(alpha: f64, n: usize) -> Result<Mod1Sequence> {
    if !alpha.is_finite() {
        return Err(domain("weyl rotation by a non-finite alpha"));
    }
    weyl_sequence_fixed(Frac128::from_f64(alpha), n)
}

/// Weyl rotation from a 128-bit fixed-point fractional part, for alphas
/// known to high precision (e.g. log10 of a rational).
pub fn weyl_sequence_fixed(alpha: Frac128, n: usize) -> Result<Mod1Sequence> {
    if n == 0 {
        return Err(domain("weyl sequence length must be >= 1"));
    }
    let values = (1..=n as u64).map(|i| alpha.mul_index(i).to_f64()).collect();
    Mod1Sequence::new(values)
}

/// Element-wise frac(log10 |x|), with zeros mapped to 0.
pub fn log_mod1_of(xs: &[f64]) -> Result<Mod1Sequence> {
    let values = xs
        .iter()
        .map(|&x| crate::significand::log_significand(x))
        .collect::<Result<Vec<f64>>>()?;
    Mod1Sequence::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::log10_of_rational;
    use std::f64::consts::PI;

    #[test]
    fn frac_examples() {
        assert!((frac(10.0 * PI) - 0.415_926_535_897_932_4).abs() < 1e-12);
        assert_eq!(frac(2.0), 0.0);
        assert!((frac(-0.3) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_part(10.0 * PI).unwrap(), 31);
        assert_eq!(floor_part(2.0).unwrap(), 2);
        assert_eq!(floor_part(-0.3).unwrap(), -1);
        assert!(floor_part(1e19).is_err());
    }

    #[test]
    fn frac_plus_floor_recovers_input() {
        for x in [10.0 * PI, 2.0, -0.3, -17.25, 1e6 + 0.5] {
            let r = frac(x) + floor_part(x).unwrap() as f64;
            assert!((r - x).abs() < 1e-12);
        }
    }

    #[test]
    fn discrepancy_of_half_lattice() {
        let s = Mod1Sequence::new(vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        assert!((star_discrepancy(&s).star_discrepancy - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discrepancy_of_optimal_lattice() {
        for n in [4usize, 10, 100] {
            let pts: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
            let s = Mod1Sequence::new(pts).unwrap();
            let d = star_discrepancy(&s).star_discrepancy;
            assert!((d - 1.0 / (2 * n) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn discrepancy_of_single_point_at_zero() {
        let s = Mod1Sequence::new(vec![0.0]).unwrap();
        assert!((star_discrepancy(&s).star_discrepancy - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weyl_rational_is_periodic() {
        let s = weyl_sequence(0.5, 4).unwrap();
        assert_eq!(s.values(), &[0.5, 0.0, 0.5, 0.0]);
        let z = weyl_sequence(0.0, 7).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn weyl_log2_equidistributes() {
        let alpha = log10_of_rational(2, 1).1;
        let s = weyl_sequence_fixed(alpha, 10_000).unwrap();
        assert!(star_discrepancy(&s).star_discrepancy < 0.005);
    }

    #[test]
    fn log_mod1_examples() {
        let s = log_mod1_of(&[1.0, 10.0, 100.0]).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));

        let s = log_mod1_of(&[2.0, 4.0, 8.0]).unwrap();
        let w = weyl_sequence(2f64.log10(), 3).unwrap();
        for (a, b) in s.values().iter().zip(w.values()) {
            assert!((a - b).abs() < 1e-12);
        }

        let s = log_mod1_of(&[-2.0, 2.0]).unwrap();
        assert_eq!(s.values()[0], s.values()[1]);
    }

    #[test]
    fn discrepancy_lower_bound_holds() {
        let s = weyl_sequence(std::f64::consts::SQRT_2, 1000).unwrap();
        let d = star_discrepancy(&s);
        assert!(d.star_discrepancy >= 1.0 / (2.0 * d.n as f64) - 1e-12);
    }
}
