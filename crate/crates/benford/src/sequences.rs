//! Deterministic sequence generators and the rule-based Benford
//! classifier: geometric/affine iterates are Benford exactly when the
//! multiplier is not a rational power of 10, polynomial-in-n sequences
//! never are, and super-exponential iterates from a fixed start are an
//! open problem.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use crate::error::{domain, BenfordError, Result};
use crate::fixed::{frac_log10_biguint, log10_of_rational, Frac128, LogValue};
use crate::mod1::Mod1Sequence;

pub type Ratio64 = Rational64;

/// An exactly-represented positive base: either a reduced rational p/q or
/// 10^(m/k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactBase {
    Rational { num: u64, den: u64 },
    TenPower { num: i64, den: u64 },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_power_of_ten(mut x: u64) -> bool {
    while x % 10 == 0 {
        x /= 10;
    }
    x == 1
}

impl ExactBase {
    pub fn rational(num: u64, den: u64) -> Result<ExactBase> {
        if num == 0 || den == 0 {
            return Err(domain("exact base must be a positive rational"));
        }
        let g = gcd(num, den);
        Ok(ExactBase::Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn ten_power(num: i64, den: i64) -> Result<ExactBase> {
        if den == 0 {
            return Err(domain("ten-power exponent denominator must be nonzero"));
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(num.unsigned_abs(), den as u64) as i64;
        num /= g;
        den /= g;
        Ok(ExactBase::TenPower {
            num,
            den: den as u64,
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            ExactBase::Rational { num, den } => *num as f64 / *den as f64,
            ExactBase::TenPower { num, den } => 10f64.powf(*num as f64 / *den as f64),
        }
    }

    /// (floor, frac) of log10 of the base, frac accurate to 2^-128.
    pub fn log10_parts(&self) -> (i64, Frac128) {
        match self {
            ExactBase::Rational { num, den } => log10_of_rational(*num, *den),
            ExactBase::TenPower { num, den } => {
                let den = *den as i64;
                let floor = num.div_euclid(den);
                let rem = num.rem_euclid(den) as u64;
                (floor, Frac128::from_ratio(rem, den as u64))
            }
        }
    }

    pub fn gt_one(&self) -> bool {
        match self {
            ExactBase::Rational { num, den } => num > den,
            ExactBase::TenPower { num, .. } => *num > 0,
        }
    }
}

/// True iff the base equals 10^(m/k) for integers m, k.
///
/// For a reduced rational p/q, (p/q)^k = 10^m forces p^k = 2^m 5^m q^k;
/// since p and q share no factor, q = 1 and p is itself a power of 10
/// (or symmetrically p = 1 and q a power of 10). So the reduced fraction
/// must be a power of 10 or its reciprocal.
pub fn is_rational_power_of_ten(b: &ExactBase) -> bool {
    match b {
        ExactBase::TenPower { .. } => true,
        ExactBase::Rational { num, den } => {
            (*den == 1 && is_power_of_ten(*num)) || (*num == 1 && is_power_of_ten(*den))
        }
    }
}

/// Declarative description of a deterministic sequence generator.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// (base^n)
    Power { base: ExactBase },
    /// Iterates of f(x) = a x + b from x0.
    AffineIterate {
        a: ExactBase,
        b: Ratio64,
        x0: Ratio64,
    },
    /// (a * n^b)
    PolynomialTerm { a: Ratio64, b: Ratio64 },
    /// (n!)
    Factorial,
    /// x_{n+1} = c_1 x_n + c_2 x_{n-1} + ...
    LinearRecurrence {
        coeffs: Vec<Ratio64>,
        init: Vec<Ratio64>,
    },
    /// Iterates of a non-linear polynomial (coefficients low-to-high).
    PolynomialIterate { coeffs: Vec<Ratio64>, x0: Ratio64 },
    /// Alternating application of a1 x + b1 and a2 x + b2.
    AlternatingAffine {
        a1: ExactBase,
        b1: Ratio64,
        a2: ExactBase,
        b2: Ratio64,
        x0: Ratio64,
    },
}

/// Classification verdict with the rule that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Benford,
    NotBenford,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenfordClassification {
    pub verdict: Verdict,
    pub rule: &'static str,
}

pub const MAX_SEQUENCE_LEN: usize = 1_000_000;
const EXACT_TERM_BUDGET: usize = 10_000;

impl SequenceSpec {
    pub fn fibonacci() -> SequenceSpec {
        SequenceSpec::LinearRecurrence {
            coeffs: vec![Ratio64::from_integer(1), Ratio64::from_integer(1)],
            init: vec![Ratio64::from_integer(1), Ratio64::from_integer(1)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Power { .. } | SequenceSpec::Factorial => Ok(()),
            SequenceSpec::AffineIterate { a, b, x0 } => {
                if !a.gt_one() {
                    return Err(domain("affine multiplier must exceed 1"));
                }
                if b.is_negative() || !x0.is_positive() {
                    return Err(domain("affine iterate requires b >= 0 and x0 > 0"));
                }
                Ok(())
            }
            SequenceSpec::AlternatingAffine { a1, b1, a2, b2, x0 } => {
                if !a1.gt_one() || !a2.gt_one() {
                    return Err(domain("alternating multipliers must exceed 1"));
                }
                if b1.is_negative() || b2.is_negative() || !x0.is_positive() {
                    return Err(domain("alternating affine requires b >= 0 and x0 > 0"));
                }
                Ok(())
            }
            SequenceSpec::PolynomialTerm { a, .. } => {
                if a.is_zero() {
                    return Err(domain("polynomial term coefficient must be nonzero"));
                }
                Ok(())
            }
            SequenceSpec::LinearRecurrence { coeffs, init } => {
                if coeffs.is_empty() || init.len() != coeffs.len() {
                    return Err(domain(
                        "recurrence needs order >= 1 and matching initial values",
                    ));
                }
                Ok(())
            }
            SequenceSpec::PolynomialIterate { coeffs, .. } => {
                if coeffs.len() < 3 || coeffs.last().map_or(true, Ratio64::is_zero) {
                    return Err(domain("polynomial iterate must have degree >= 2"));
                }
                Ok(())
            }
        }
    }
}

fn ratio_f64(r: &Ratio64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Orbit of cyclically applied affine maps, emitted as frac(log10 x_n).
///
/// Runs in (significand, exponent) float form until every additive term is
/// below 1e-18 of the current value, then switches to exact fixed-point
/// rotation by the multipliers' 128-bit logs.
fn affine_orbit(maps: &[(ExactBase, f64)], x0: f64, n: usize) -> Vec<f64> {
    let fracs: Vec<Frac128> = maps.iter().map(|(a, _)| a.log10_parts().1).collect();
    let mult: Vec<f64> = maps.iter().map(|(a, _)| a.value()).collect();
    let max_b = maps.iter().map(|(_, b)| *b).fold(0.0f64, f64::max);

    let mut out = Vec::with_capacity(n);
    let mut s = x0;
    let mut e: i64 = 0;
    while s >= 10.0 {
        s /= 10.0;
        e += 1;
    }
    while s < 1.0 {
        s *= 10.0;
        e -= 1;
    }

    let mut i = 0usize;
    while i < n {
        let m = i % maps.len();
        let b = maps[m].1;
        let mut t = mult[m] * s;
        if b > 0.0 && e < 300 {
            t += b / 10f64.powi(e as i32);
        }
        while t >= 10.0 {
            t /= 10.0;
            e += 1;
        }
        while t < 1.0 {
            t *= 10.0;
            e -= 1;
        }
        s = t;
        out.push(crate::mod1::frac(s.log10()));
        i += 1;
        // Hand off once every additive term is below 1e-18 of the
        // magnitude: the orbit is then purely multiplicative to double
        // precision and the exact rotation takes over.
        if max_b == 0.0 || (e > 62 && max_b < 10f64.powi((e - 62).min(300) as i32)) {
            break;
        }
    }
    if i < n {
        let mut f = Frac128::from_f64(s.log10());
        for j in i..n {
            f = f.add(fracs[j % maps.len()]);
            out.push(f.to_f64());
        }
    }
    out
}

/// Emit frac(log10 x_n) for the first n terms of the sequence.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<Mod1Sequence> {
    spec.validate()?;
    if n == 0 {
        return Err(domain("sequence length must be >= 1"));
    }
    if n > MAX_SEQUENCE_LEN {
        return Err(BenfordError::Resource(format!(
            "sequence length {n} exceeds budget {MAX_SEQUENCE_LEN}"
        )));
    }
    let values = match spec {
        SequenceSpec::Power { base } => {
            let (_, f) = base.log10_parts();
            (1..=n as u64).map(|i| f.mul_index(i).to_f64()).collect()
        }
        SequenceSpec::AffineIterate { a, b, x0 } => {
            affine_orbit(&[(*a, ratio_f64(b))], ratio_f64(x0), n)
        }
        SequenceSpec::AlternatingAffine { a1, b1, a2, b2, x0 } => affine_orbit(
            &[(*a1, ratio_f64(b1)), (*a2, ratio_f64(b2))],
            ratio_f64(x0),
            n,
        ),
        SequenceSpec::PolynomialTerm { a, b } => {
            let la = ratio_f64(a).abs().log10();
            let bf = ratio_f64(b);
            (1..=n)
                .map(|i| crate::mod1::frac(la + bf * (i as f64).log10()))
                .collect()
        }
        SequenceSpec::Factorial => generate_factorial(n),
        SequenceSpec::LinearRecurrence { coeffs, init } => generate_recurrence(coeffs, init, n),
        SequenceSpec::PolynomialIterate { coeffs, x0 } => {
            generate_poly_iterate(coeffs, ratio_f64(x0), n)
        }
    };
    Mod1Sequence::new(values)
}

fn generate_factorial(n: usize) -> Vec<f64> {
    if n <= EXACT_TERM_BUDGET {
        let mut f = BigUint::from(1u32);
        (1..=n)
            .map(|i| {
                f *= i as u32;
                frac_log10_biguint(&f)
            })
            .collect()
    } else {
        // Compensated summation of log10(i).
        let mut sum = 0.0f64;
        let mut c = 0.0f64;
        (1..=n)
            .map(|i| {
                let y = (i as f64).log10() - c;
                let t = sum + y;
                c = (t - sum) - y;
                sum = t;
                crate::mod1::frac(sum)
            })
            .collect()
    }
}

fn frac_log10_big_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let l = frac_log10_biguint(num) - frac_log10_biguint(den);
    crate::mod1::frac(l)
}

fn generate_recurrence(coeffs: &[Ratio64], init: &[Ratio64], n: usize) -> Vec<f64> {
    let to_big = |r: &Ratio64| BigRational::new((*r.numer()).into(), (*r.denom()).into());
    let mut out = Vec::with_capacity(n);
    let order = coeffs.len();

    if n <= EXACT_TERM_BUDGET {
        let coeffs: Vec<BigRational> = coeffs.iter().map(to_big).collect();
        let mut state: Vec<BigRational> = init.iter().map(to_big).collect();
        for i in 0..n {
            let term = if i < order {
                state[i].clone()
            } else {
                let next: BigRational = coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * &state[order - 1 - j + (i - order)])
                    .sum();
                state.push(next.clone());
                next
            };
            out.push(frac_log10_big_rational(&term));
        }
        return out;
    }

    // Float state with a tracked decimal exponent so magnitudes never
    // overflow; the exponent is an exact integer and drops out of frac().
    let cf: Vec<f64> = coeffs.iter().map(ratio_f64).collect();
    let mut state: Vec<f64> = init.iter().map(ratio_f64).collect();
    let mut idx = 0usize;
    for i in 0..n {
        let term = if i < order {
            state[i]
        } else {
            let mut next = 0.0;
            for (j, c) in cf.iter().enumerate() {
                next += c * state[(idx + order - 1 - j) % order];
            }
            if next.abs() > 1e100 {
                for v in state.iter_mut() {
                    *v /= 1e100;
                }
                next /= 1e100;
            }
            state[idx % order] = next;
            idx += 1;
            next
        };
        out.push(if term == 0.0 {
            0.0
        } else {
            crate::mod1::frac(term.abs().log10())
        });
    }
    out
}

fn generate_poly_iterate(coeffs: &[Ratio64], x0: f64, n: usize) -> Vec<f64> {
    let cf: Vec<f64> = coeffs.iter().map(ratio_f64).collect();
    let degree = (cf.len() - 1) as i64;
    let lead = *cf.last().unwrap();
    let eval = |x: f64| cf.iter().rev().fold(0.0, |acc, c| acc * x + c);

    let mut out = Vec::with_capacity(n);
    let mut x = x0;
    let mut i = 0usize;
    while i < n {
        x = eval(x);
        out.push(if x == 0.0 {
            0.0
        } else {
            crate::mod1::frac(x.abs().log10())
        });
        i += 1;
        if x.abs() > 1e150 {
            break;
        }
    }
    if i < n {
        // Dominant-monomial log recurrence: log|f(x)| = log|c_d| + d log|x|
        // up to a relative correction below 10^-140.
        let lead_log = LogValue::from_f64(lead.abs().log10());
        let mut l = LogValue::from_f64(x.abs().log10());
        for _ in i..n {
            l = l.mul_rational(degree, 1).add(&lead_log);
            out.push(l.frac_f64());
        }
    }
    out
}

/// Set of first digits observed over the first n terms.
pub fn first_digit_support(spec: &SequenceSpec, n: usize) -> Result<BTreeSet<u8>> {
    if n > 100_000 {
        return Err(BenfordError::Resource(format!(
            "first-digit support length {n} exceeds budget 100000"
        )));
    }
    let s = generate(spec, n)?;
    Ok(s.first_digits().into_iter().collect())
}

/// Rule-based classification of a sequence spec.
pub fn classify(spec: &SequenceSpec) -> Result<BenfordClassification> {
    spec.validate()?;
    let by_multiplier = |benford: bool| {
        if benford {
            BenfordClassification {
                verdict: Verdict::Benford,
                rule: "geometric growth whose multiplier is not a rational power of 10",
            }
        } else {
            BenfordClassification {
                verdict: Verdict::NotBenford,
                rule: "multiplier is a rational power of 10",
            }
        }
    };
    Ok(match spec {
        SequenceSpec::Power { base } => by_multiplier(!is_rational_power_of_ten(base)),
        SequenceSpec::AffineIterate { a, .. } => by_multiplier(!is_rational_power_of_ten(a)),
        SequenceSpec::AlternatingAffine { a1, a2, .. } => {
            // The orbit grows by a1*a2 every two steps.
            let product = match (a1, a2) {
                (
                    ExactBase::Rational { num: p1, den: q1 },
                    ExactBase::Rational { num: p2, den: q2 },
                ) => ExactBase::rational(p1 * p2, q1 * q2)?,
                (
                    ExactBase::TenPower { num: m1, den: k1 },
                    ExactBase::TenPower { num: m2, den: k2 },
                ) => ExactBase::ten_power(
                    m1 * *k2 as i64 + m2 * *k1 as i64,
                    (*k1 * *k2) as i64,
                )?,
                _ => {
                    // r * 10^(m/k) is a rational power of 10 iff the
                    // rational factor r is one itself.
                    let rat = match (a1, a2) {
                        (r @ ExactBase::Rational { .. }, _) => r,
                        (_, r) => r,
                    };
                    return Ok(by_multiplier(!is_rational_power_of_ten(rat)));
                }
            };
            by_multiplier(!is_rational_power_of_ten(&product))
        }
        SequenceSpec::PolynomialTerm { .. } => BenfordClassification {
            verdict: Verdict::NotBenford,
            rule: "polynomial growth in n is never Benford",
        },
        SequenceSpec::Factorial => BenfordClassification {
            verdict: Verdict::Benford,
            rule: "factorial growth is a known Benford sequence",
        },
        SequenceSpec::LinearRecurrence { .. } => {
            if *spec == SequenceSpec::fibonacci() {
                BenfordClassification {
                    verdict: Verdict::Benford,
                    rule: "the Fibonacci sequence is a known Benford sequence",
                }
            } else {
                BenfordClassification {
                    verdict: Verdict::Unknown,
                    rule: "general linear recurrences are not classified here",
                }
            }
        }
        SequenceSpec::PolynomialIterate { .. } => BenfordClassification {
            verdict: Verdict::Unknown,
            rule: "open problem: Benfordness of super-exponential iterates from a fixed start",
        },
    })
}

fn parse_ratio(s: &str) -> Result<Ratio64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| domain(format!("bad rational: {s}")))?;
        let q: i64 = q.trim().parse().map_err(|_| domain(format!("bad rational: {s}")))?;
        if q == 0 {
            return Err(domain("zero denominator"));
        }
        return Ok(Ratio64::new(p, q));
    }
    if let Some((int, fracpart)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let int: i64 = int.trim().parse().map_err(|_| domain(format!("bad number: {s}")))?;
        let scale = 10i64
            .checked_pow(fracpart.len() as u32)
            .ok_or_else(|| domain("too many decimal places"))?;
        let fp: i64 = fracpart.parse().map_err(|_| domain(format!("bad number: {s}")))?;
        return Ok(Ratio64::new(int * scale + sign * fp, scale));
    }
    let v: i64 = s.parse().map_err(|_| domain(format!("bad number: {s}")))?;
    Ok(Ratio64::from_integer(v))
}

fn parse_base(s: &str) -> Result<ExactBase> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("10^") {
        let rest = rest.trim().trim_start_matches('(').trim_end_matches(')');
        let r = parse_ratio(rest)?;
        return ExactBase::ten_power(*r.numer(), *r.denom());
    }
    let r = parse_ratio(s)?;
    if !r.is_positive() {
        return Err(domain("base must be positive"));
    }
    ExactBase::rational(*r.numer() as u64, *r.denom() as u64)
}

/// Split "a=1,b=[2,3],c=4" on top-level commas only.
fn split_args(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_kv(args: &str) -> Result<Vec<(&str, &str)>> {
    split_args(args)
        .into_iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| domain(format!("expected key=value, got: {kv}")))
        })
        .collect()
}

fn parse_ratio_list(s: &str) -> Result<Vec<Ratio64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| domain(format!("expected [list], got: {s}")))?;
    inner.split(',').map(parse_ratio).collect()
}

impl FromStr for SequenceSpec {
    type Err = BenfordError;

    fn from_str(s: &str) -> Result<SequenceSpec> {
        let s = s.trim();
        if s == "factorial" {
            return Ok(SequenceSpec::Factorial);
        }
        if s == "fib" {
            return Ok(SequenceSpec::fibonacci());
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| domain(format!("unrecognized sequence spec: {s}")))?;
        let spec = match kind {
            "power" => SequenceSpec::Power {
                base: parse_base(args)?,
            },
            "affine" | "alt-affine" | "poly-term" | "recurrence" | "poly-iter" => {
                let kvs = parse_kv(args)?;
                let get = |key: &str| -> Result<&str> {
                    kvs.iter()
                        .find(|(k, _)| *k == key)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| domain(format!("missing {key}= in {kind} spec")))
                };
                match kind {
                    "affine" => SequenceSpec::AffineIterate {
                        a: parse_base(get("a")?)?,
                        b: parse_ratio(get("b")?)?,
                        x0: parse_ratio(get("x0")?)?,
                    },
                    "alt-affine" => SequenceSpec::AlternatingAffine {
                        a1: parse_base(get("a1")?)?,
                        b1: parse_ratio(get("b1")?)?,
                        a2: parse_base(get("a2")?)?,
                        b2: parse_ratio(get("b2")?)?,
                        x0: parse_ratio(get("x0")?)?,
                    },
                    "poly-term" => SequenceSpec::PolynomialTerm {
                        a: parse_ratio(get("a")?)?,
                        b: parse_ratio(get("b")?)?,
                    },
                    "recurrence" => SequenceSpec::LinearRecurrence {
                        coeffs: parse_ratio_list(get("c")?)?,
                        init: parse_ratio_list(get("init")?)?,
                    },
                    "poly-iter" => SequenceSpec::PolynomialIterate {
                        coeffs: parse_ratio_list(get("f")?)?,
                        x0: parse_ratio(get("x0")?)?,
                    },
                    _ => unreachable!(),
                }
            }
            _ => return Err(domain(format!("unrecognized sequence kind: {kind}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}
