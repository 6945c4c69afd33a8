//! The exact Benford reference distribution: CDF, digit probabilities,
//! and distances from named distribution families to Benford.

use num_traits::{Float, FromPrimitive};
use statrs::function::erf::erfc;

use crate::error::{domain, Result};
use crate::significand::{significand, DigitVector};

/// P(S <= t) = log10 t for t in [1, 10).
pub fn benford_cdf<F: Float + FromPrimitive>(t: F) -> Result<F> {
    let ten = F::from_f64(10.0).unwrap();
    if !(t >= F::one() && t < ten) {
        return Err(domain("benford_cdf argument must lie in [1, 10)"));
    }
    Ok(t.log10())
}

/// P(D1 = d) = log10(1 + 1/d).
pub fn first_digit_pmf<F: Float + FromPrimitive>(d: u8) -> Result<F> {
    if !(1..=9).contains(&d) {
        return Err(domain("first digit must lie in 1..=9"));
    }
    let d = F::from_u8(d).unwrap();
    Ok((F::one() + F::one() / d).log10())
}

/// The nine first-digit probabilities log10(1 + 1/d), d = 1..9.
pub fn first_digit_table() -> [f64; 9] {
    let mut t = [0.0; 9];
    for (i, slot) in t.iter_mut().enumerate() {
        *slot = first_digit_pmf::<f64>(i as u8 + 1).unwrap();
    }
    t
}

/// P(D1 = d1, ..., Dm = dm) = log10(1 + 1/(d1 d2 ... dm read as an integer)).
pub fn digit_tuple_prob(q: &DigitVector) -> Result<f64> {
    if !q.is_valid() || q.first_digit() == 0 {
        return Err(domain("digit tuple must start with a digit in 1..=9"));
    }
    let mut value = 0u64;
    for &d in &q.digits {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(d as u64))
            .ok_or_else(|| domain("digit tuple too long"))?;
    }
    Ok((1.0 + 1.0 / value as f64).log10())
}

/// A uniform distribution on [a, b], a < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformFamily {
    pub a: f64,
    pub b: f64,
}

impl UniformFamily {
    pub fn new(a: f64, b: f64) -> Result<UniformFamily> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(domain("uniform family requires finite a < b"));
        }
        Ok(UniformFamily { a, b })
    }
}

/// Lebesgue measure of [0, b] intersected with the significand event
/// {x > 0 : S(x) <= t} = union over k of [10^k, t 10^k].
///
/// The decades below the top one contribute the full geometric series
/// (t-1) 10^e / 9; the top decade contributes its clipped part.
fn significand_mass_below(b: f64, t: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    let d = significand(b).expect("finite positive input");
    let scale = 10f64.powi(d.exponent as i32);
    scale * ((t - 1.0) / 9.0 + d.significand.min(t) - 1.0)
}

/// Exact P(S(U) <= t) for U uniform on [a, b] and t in [1, 10).
pub fn uniform_significand_cdf(f: &UniformFamily, t: f64) -> Result<f64> {
    if !(1.0..10.0).contains(&t) {
        return Err(domain("significand threshold must lie in [1, 10)"));
    }
    let (a, b) = (f.a, f.b);
    let mass = if a >= 0.0 {
        significand_mass_below(b, t) - significand_mass_below(a, t)
    } else if b <= 0.0 {
        significand_mass_below(-a, t) - significand_mass_below(-b, t)
    } else {
        significand_mass_below(-a, t) + significand_mass_below(b, t)
    };
    Ok(mass / (b - a))
}

/// sup over t in (1, 10) of |P(S(U) <= t) - log10 t|.
///
/// The CDF is piecewise linear in t with kinks only at the significands of
/// |a| and |b|, so the supremum is attained either at a kink, at an
/// endpoint, or at the interior stationary point of one linear piece.
pub fn uniform_benford_distance(f: &UniformFamily) -> f64 {
    let mut breaks = vec![1.0, 10.0];
    for v in [f.a.abs(), f.b.abs()] {
        if v > 0.0 {
            let s = significand(v).unwrap().significand;
            if s > 1.0 && s < 10.0 {
                breaks.push(s);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let g = |t: f64| {
        let t = t.clamp(1.0, 10.0 - 1e-13);
        (uniform_significand_cdf(f, t).unwrap() - t.log10()).abs()
    };
    let mut best = 0.0f64;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        best = best.max(g(lo)).max(g(hi));
        // Slope of the linear piece, then the stationary point of
        // F(t) - log10 t at t* = 1 / (beta ln 10).
        let eps = (hi - lo) * 1e-6;
        let (t1, t2) = (lo + eps, (hi - eps).min(10.0 - 1e-13));
        let beta = (uniform_significand_cdf(f, t2).unwrap()
            - uniform_significand_cdf(f, t1).unwrap())
            / (t2 - t1);
        if beta > 0.0 {
            let t_star = 1.0 / (beta * std::f64::consts::LN_10);
            if t_star > lo && t_star < hi {
                best = best.max(g(t_star));
            }
        }
    }
    best
}

/// P(D1(X) = d) for X ~ Normal(mean, sd), by summing the normal mass of
/// every decade interval +-[d 10^k, (d+1) 10^k) that intersects the
/// 12-sigma window. Tail mass beyond 12 sigma is below 1e-30.
pub fn normal_digit_prob(mean: f64, sd: f64, d: u8) -> Result<f64> {
    if !(1..=9).contains(&d) {
        return Err(domain("first digit must lie in 1..=9"));
    }
    if !(sd > 0.0) || !mean.is_finite() || !sd.is_finite() {
        return Err(domain("normal family requires finite mean and sd > 0"));
    }
    let phi = |x: f64| 0.5 * erfc(-((x - mean) / sd) / std::f64::consts::SQRT_2);
    let hi = mean.abs() + 12.0 * sd;
    let k_max = hi.log10().ceil() as i32 + 1;
    let k_min = (sd.log10().floor() as i32) - 40;
    let d = d as f64;
    let mut p = 0.0;
    for k in k_min..=k_max {
        let scale = 10f64.powi(k);
        let (lo, hi) = (d * scale, (d + 1.0) * scale);
        p += phi(hi) - phi(lo); // positive decade
        p += phi(-lo) - phi(-hi); // mirrored negative decade
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_examples() {
        assert_eq!(benford_cdf(1.0f64).unwrap(), 0.0);
        assert!((benford_cdf(2.0f64).unwrap() - 0.301_029_995_7).abs() < 1e-9);
        assert!((benford_cdf(10f64.sqrt()).unwrap() - 0.5).abs() < 1e-14);
        assert!(benford_cdf(0.5f64).is_err());
        assert!(benford_cdf(10.0f64).is_err());
    }

    #[test]
    fn first_digit_pmf_values() {
        assert!((first_digit_pmf::<f64>(1).unwrap() - 0.301_029_995_7).abs() < 1e-9);
        assert!((first_digit_pmf::<f64>(9).unwrap() - 0.045_757_490_6).abs() < 1e-9);
        let total: f64 = (1..=9).map(|d| first_digit_pmf::<f64>(d).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(first_digit_pmf::<f64>(0).is_err());
        assert!(first_digit_pmf::<f64>(10).is_err());
    }

    #[test]
    fn tuple_prob_examples() {
        let q = DigitVector { digits: vec![3, 1, 4] };
        let p = digit_tuple_prob(&q).unwrap();
        assert!((p - (315f64 / 314.0).log10()).abs() < 1e-15);
        assert!((p - 0.00138).abs() < 5e-6);

        let q1 = DigitVector { digits: vec![1] };
        assert_eq!(
            digit_tuple_prob(&q1).unwrap(),
            first_digit_pmf::<f64>(1).unwrap()
        );

        // (1,0) reads as the integer 10, so the probability is log(11/10).
        let q10 = DigitVector { digits: vec![1, 0] };
        assert!((digit_tuple_prob(&q10).unwrap() - (1.1f64).log10()).abs() < 1e-15);
        let q100 = DigitVector { digits: vec![1, 0, 0] };
        assert!((digit_tuple_prob(&q100).unwrap() - (1.01f64).log10()).abs() < 1e-15);

        let bad = DigitVector { digits: vec![0, 3] };
        assert!(digit_tuple_prob(&bad).is_err());
    }

    #[test]
    fn tuple_marginalization_is_consistent() {
        for digits in [vec![1], vec![3, 1], vec![9, 9]] {
            let parent = digit_tuple_prob(&DigitVector { digits: digits.clone() }).unwrap();
            let mut total = 0.0;
            for d in 0..=9u8 {
                let mut child = digits.clone();
                child.push(d);
                total += digit_tuple_prob(&DigitVector { digits: child }).unwrap();
            }
            assert!((total - parent).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_cdf_examples() {
        let u01 = UniformFamily::new(0.0, 1.0).unwrap();
        assert!((uniform_significand_cdf(&u01, 2.0).unwrap() - 1.0 / 9.0).abs() < 1e-14);

        let u02 = UniformFamily::new(0.0, 2.0).unwrap();
        assert!((uniform_significand_cdf(&u02, 2.0).unwrap() - 5.0 / 9.0).abs() < 1e-14);

        let u110 = UniformFamily::new(1.0, 10.0).unwrap();
        for t in [1.5, 3.0, 9.9] {
            assert!((uniform_significand_cdf(&u110, t).unwrap() - (t - 1.0) / 9.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_distance_closed_form() {
        // For U(0,1) the difference is log10 t - (t-1)/9, maximized at
        // t = 9 / ln 10.
        let u01 = UniformFamily::new(0.0, 1.0).unwrap();
        let t_star = 9.0 / std::f64::consts::LN_10;
        let expected = t_star.log10() - (t_star - 1.0) / 9.0;
        let got = uniform_benford_distance(&u01);
        assert!((got - expected).abs() < 1e-6);
        assert!((got - 0.26886).abs() < 1e-4);
    }

    #[test]
    fn uniform_distance_decade_invariance() {
        let u = uniform_benford_distance(&UniformFamily::new(0.0, 1.0).unwrap());
        let v = uniform_benford_distance(&UniformFamily::new(0.0, 10.0).unwrap());
        assert!((u - v).abs() < 1e-12);
        let a = uniform_benford_distance(&UniformFamily::new(3.0, 7.0).unwrap());
        let b = uniform_benford_distance(&UniformFamily::new(30.0, 70.0).unwrap());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn normal_digit_probs_sum_to_one() {
        for (mean, sd) in [(0.0, 1.0), (7.0, 1.0), (3.0, 0.5)] {
            let total: f64 = (1..=9)
                .map(|d| normal_digit_prob(mean, sd, d).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "sum {total} for N({mean},{sd})");
        }
    }

    #[test]
    fn normal_7_1_digit_probs() {
        // The interval [7,8) starts at the mean: digit 7 carries the
        // largest share, Phi(1) - Phi(0) ~ 0.341.
        let p7 = normal_digit_prob(7.0, 1.0, 7).unwrap();
        assert!(p7 > 0.3 && p7 < 0.9, "p7 = {p7}");
        // Digit 1 only via [1,2) and [10,20): both in the far tails.
        let p1 = normal_digit_prob(7.0, 1.0, 1).unwrap();
        assert!(p1 < 0.01, "p1 = {p1}");
    }

    #[test]
    fn normal_digit_prob_scale_by_100_invariant() {
        for d in 1..=9u8 {
            let p = normal_digit_prob(7.0, 1.0, d).unwrap();
            let q = normal_digit_prob(700.0, 100.0, d).unwrap();
            assert!((p - q).abs() < 1e-12);
        }
    }
}
