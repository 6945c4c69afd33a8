//! Seeded Monte Carlo machinery for the probabilistic side of Benford's
//! law: exact Benford sampling, powers and products, scale and base
//! invariance checks, random probability measures, randomized function
//! systems, and the never-Benford random-walk demonstration.
//!
//! RNG contract: every experiment derives its streams from ChaCha8
//! seeded through a splitmix64 mix of (seed, stream index), so parallel
//! or repeated sub-experiments get disjoint, reproducible streams.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Uniform};
use statrs::function::erf::erfc;

use crate::error::{domain, Result};
use crate::fixed::{log10_of_rational, Frac128, LogValue};
use crate::mod1::{ks_distance_sorted, Mod1Sequence};
use crate::significand::first_digit;

/// A sampleable scalar law.
#[derive(Debug, Clone, PartialEq)]
pub enum RandomVariableSpec {
    Uniform { a: f64, b: f64 },
    Exponential { rate: f64 },
    Normal { mean: f64, sd: f64 },
    /// 10^U with U uniform on [0,1): S(X) = X exactly.
    BenfordExact,
    Scaled { inner: Box<RandomVariableSpec>, factor: f64 },
    PowerOf { inner: Box<RandomVariableSpec>, k: i32 },
    DiscreteAtoms { atoms: Vec<(f64, f64)> },
}

impl RandomVariableSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RandomVariableSpec::Uniform { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(domain("uniform law requires finite a < b"));
                }
            }
            RandomVariableSpec::Exponential { rate } => {
                if !(*rate > 0.0) {
                    return Err(domain("exponential rate must be positive"));
                }
            }
            RandomVariableSpec::Normal { mean, sd } => {
                if !(mean.is_finite() && *sd > 0.0) {
                    return Err(domain("normal law requires finite mean and sd > 0"));
                }
            }
            RandomVariableSpec::BenfordExact => {}
            RandomVariableSpec::Scaled { inner, factor } => {
                if !(*factor > 0.0) {
                    return Err(domain("scale factor must be positive"));
                }
                inner.validate()?;
            }
            RandomVariableSpec::PowerOf { inner, k } => {
                if *k == 0 {
                    return Err(domain("power exponent must be nonzero"));
                }
                inner.validate()?;
            }
            RandomVariableSpec::DiscreteAtoms { atoms } => {
                if atoms.is_empty() {
                    return Err(domain("atom law needs at least one atom"));
                }
                let total: f64 = atoms.iter().map(|(_, p)| p).sum();
                if (total - 1.0).abs() > 1e-12 || atoms.iter().any(|(_, p)| *p < 0.0) {
                    return Err(domain("atom probabilities must be >= 0 and sum to 1"));
                }
            }
        }
        Ok(())
    }

    /// Whether the law has a density (no atoms).
    pub fn is_continuous(&self) -> bool {
        match self {
            RandomVariableSpec::DiscreteAtoms { .. } => false,
            RandomVariableSpec::Scaled { inner, .. }
            | RandomVariableSpec::PowerOf { inner, .. } => inner.is_continuous(),
            _ => true,
        }
    }

    /// Whether P(X = 0) > 0.
    pub fn has_atom_at_zero(&self) -> bool {
        match self {
            RandomVariableSpec::DiscreteAtoms { atoms } => {
                atoms.iter().any(|(v, p)| *v == 0.0 && *p > 0.0)
            }
            RandomVariableSpec::Scaled { inner, .. }
            | RandomVariableSpec::PowerOf { inner, .. } => inner.has_atom_at_zero(),
            _ => false,
        }
    }

    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            RandomVariableSpec::Uniform { a, b } => Uniform::new(*a, *b).sample(rng),
            RandomVariableSpec::Exponential { rate } => Exp::new(*rate).unwrap().sample(rng),
            RandomVariableSpec::Normal { mean, sd } => {
                Normal::new(*mean, *sd).unwrap().sample(rng)
            }
            RandomVariableSpec::BenfordExact => 10f64.powf(rng.gen::<f64>()),
            RandomVariableSpec::Scaled { inner, factor } => factor * inner.sample_one(rng),
            RandomVariableSpec::PowerOf { inner, k } => inner.sample_one(rng).powi(*k),
            RandomVariableSpec::DiscreteAtoms { atoms } => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (v, p) in atoms {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                atoms.last().unwrap().0
            }
        }
    }

    /// CDF of the law, where a closed form exists.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(match self {
            RandomVariableSpec::Uniform { a, b } => ((t - a) / (b - a)).clamp(0.0, 1.0),
            RandomVariableSpec::Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * t).exp()
                }
            }
            RandomVariableSpec::Normal { mean, sd } => {
                0.5 * erfc(-((t - mean) / sd) / std::f64::consts::SQRT_2)
            }
            RandomVariableSpec::BenfordExact => {
                if t < 1.0 {
                    0.0
                } else if t >= 10.0 {
                    1.0
                } else {
                    t.log10()
                }
            }
            RandomVariableSpec::Scaled { inner, factor } => inner.cdf(t / factor)?,
            RandomVariableSpec::PowerOf { inner, k } => {
                let k = *k;
                if k > 0 && k % 2 == 1 {
                    inner.cdf(t.signum() * t.abs().powf(1.0 / k as f64))?
                } else if k > 0 {
                    if t <= 0.0 {
                        0.0
                    } else {
                        let r = t.powf(1.0 / k as f64);
                        inner.cdf(r)? - inner.cdf(-r)?
                    }
                } else {
                    return Err(domain("cdf of a negative power is not supported"));
                }
            }
            RandomVariableSpec::DiscreteAtoms { atoms } => {
                atoms.iter().filter(|(v, _)| *v <= t).map(|(_, p)| p).sum()
            }
        })
    }
}

/// A reproducible batch of draws together with its provenance.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub spec_digest: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// ChaCha8 stream `stream` of the experiment seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}

fn digest_of(spec: &impl std::fmt::Debug) -> u64 {
    fnv1a64(format!("{spec:?}").as_bytes())
}

/// n i.i.d. draws from the law.
pub fn sample(spec: &RandomVariableSpec, n: usize, seed: u64) -> Result<SampleBatch> {
    spec.validate()?;
    if n == 0 {
        return Err(domain("sample size must be >= 1"));
    }
    let mut rng = stream_rng(seed, 0);
    let values = (0..n).map(|_| spec.sample_one(&mut rng)).collect();
    Ok(SampleBatch {
        values,
        seed,
        spec_digest: digest_of(spec),
    })
}

/// Sorted significands of the nonzero entries.
pub fn significands_of(values: &[f64]) -> Vec<f64> {
    let mut sigs: Vec<f64> = values
        .iter()
        .filter(|v| **v != 0.0 && v.is_finite())
        .map(|v| {
            let l = v.abs().log10();
            10f64.powf(crate::mod1::frac(l))
        })
        .collect();
    sigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sigs
}

/// KS distance of the empirical significand distribution to Benford.
pub fn ks_to_benford(values: &[f64]) -> f64 {
    let sigs = significands_of(values);
    ks_distance_sorted(&sigs, |t| t.clamp(1.0, 10.0).log10())
}

/// Two-sample Kolmogorov distance between two significand samples.
pub fn two_sample_ks(xs: &[f64], ys: &[f64]) -> f64 {
    let a = significands_of(xs);
    let b = significands_of(ys);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut best = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        // Consume every copy of the smaller value from both sides before
        // comparing, so ties (atoms) do not inflate the distance.
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

/// Per-n KS distances of S(X^n) to Benford for n in `ns`.
pub fn power_sequence(
    spec: &RandomVariableSpec,
    ns: &[u32],
    samples: usize,
    seed: u64,
) -> Result<Vec<(u32, f64)>> {
    spec.validate()?;
    if !spec.is_continuous() {
        return Err(domain("power convergence requires a continuous law"));
    }
    let mut out = Vec::with_capacity(ns.len());
    for (si, &n) in ns.iter().enumerate() {
        let mut rng = stream_rng(seed, 1 + si as u64);
        let mut sigs: Vec<f64> = (0..samples)
            .map(|_| {
                let x = spec.sample_one(&mut rng);
                let l = n as f64 * x.abs().log10();
                10f64.powf(crate::mod1::frac(l))
            })
            .collect();
        sigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.push((n, ks_distance_sorted(&sigs, |t| t.clamp(1.0, 10.0).log10())));
    }
    Ok(out)
}

/// Per-k KS distances of S(X_1 ... X_k) to Benford for k = 1..=k_max.
pub fn product_sequence(
    spec: &RandomVariableSpec,
    k_max: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    spec.validate()?;
    if !spec.is_continuous() {
        return Err(domain("product convergence requires a continuous law"));
    }
    let mut per_k: Vec<Vec<f64>> = vec![Vec::with_capacity(samples); k_max];
    let mut rng = stream_rng(seed, 1);
    for _ in 0..samples {
        let mut log_prod = 0.0f64;
        for stage in per_k.iter_mut() {
            let x = spec.sample_one(&mut rng);
            log_prod += x.abs().log10();
            stage.push(10f64.powf(crate::mod1::frac(log_prod)));
        }
    }
    Ok(per_k
        .into_iter()
        .enumerate()
        .map(|(i, mut sigs)| {
            sigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (i + 1, ks_distance_sorted(&sigs, |t| t.clamp(1.0, 10.0).log10()))
        })
        .collect())
}

/// KS distance of S(X Y) to Benford with X exactly Benford and Y ~ specY.
pub fn product_with_benford(
    spec_y: &RandomVariableSpec,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    spec_y.validate()?;
    if spec_y.has_atom_at_zero() {
        return Err(domain("factor law must satisfy P(Y = 0) = 0"));
    }
    let mut rng = stream_rng(seed, 1);
    let mut sigs: Vec<f64> = (0..samples)
        .map(|_| {
            let u: f64 = rng.gen();
            let y = spec_y.sample_one(&mut rng);
            10f64.powf(crate::mod1::frac(u + y.abs().log10()))
        })
        .collect();
    sigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ks_distance_sorted(&sigs, |t| t.clamp(1.0, 10.0).log10()))
}

/// Two-sample KS distance between S(X) and S(aX) on independent batches.
pub fn scale_invariance_check(
    spec: &RandomVariableSpec,
    factor: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    spec.validate()?;
    if !(factor > 0.0) {
        return Err(domain("scale factor must be positive"));
    }
    let mut rng_x = stream_rng(seed, 1);
    let mut rng_y = stream_rng(seed, 2);
    let xs: Vec<f64> = (0..samples).map(|_| spec.sample_one(&mut rng_x)).collect();
    let ys: Vec<f64> = (0..samples)
        .map(|_| factor * spec.sample_one(&mut rng_y))
        .collect();
    Ok(two_sample_ks(&xs, &ys))
}

/// Mixture (1-q) Benford + q (significand-1 atom): the base-invariant
/// family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureLaw {
    pub q: f64,
}

impl MixtureLaw {
    pub fn new(q: f64) -> Result<MixtureLaw> {
        if !(0.0..=1.0).contains(&q) {
            return Err(domain("mixture weight must lie in [0, 1]"));
        }
        Ok(MixtureLaw { q })
    }

    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        if rng.gen::<f64>() < self.q {
            1.0
        } else {
            10f64.powf(rng.gen::<f64>())
        }
    }
}

/// A law whose significand distribution can be checked for base
/// invariance: either a plain random variable or the Benford/atom mixture.
#[derive(Debug, Clone, PartialEq)]
pub enum SignificandLaw {
    Rv(RandomVariableSpec),
    Mixture(MixtureLaw),
}

impl SignificandLaw {
    fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            SignificandLaw::Rv(spec) => spec.sample_one(rng),
            SignificandLaw::Mixture(m) => m.sample_one(rng),
        }
    }
}

/// Two-sample KS distance between S(Z) and S(Z^n) on independent batches.
pub fn base_invariance_check(
    law: &SignificandLaw,
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if n < 2 {
        return Err(domain("base invariance check needs n >= 2"));
    }
    if let SignificandLaw::Rv(spec) = law {
        spec.validate()?;
    }
    let mut rng_z = stream_rng(seed, 1);
    let mut rng_p = stream_rng(seed, 2);
    let zs: Vec<f64> = (0..samples).map(|_| law.sample_one(&mut rng_z)).collect();
    let ps: Vec<f64> = (0..samples)
        .map(|_| law.sample_one(&mut rng_p).powi(n as i32))
        .collect();
    Ok(two_sample_ks(&zs, &ps))
}

/// Closed-form sup-distance of the q-mixture to Benford: the atom puts
/// mass q at significand 1, so the CDF gap at t -> 1+ is exactly q.
pub fn mixture_distance_to_benford(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("mixture weight must lie in [0, 1]"));
    }
    Ok(q)
}

/// Empirical sup-distance of a sample's significand CDF to Benford,
/// including the jump at t = 1 (needed for laws with an atom there).
pub fn empirical_distance_to_benford(values: &[f64]) -> f64 {
    ks_to_benford(values)
}

/// One step function of a random function system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterFn {
    /// x -> c x, c > 0
    MulBy(f64),
    /// x -> x^(num/den)
    Power { num: i64, den: u64 },
    /// x -> a x + b
    Affine { a: f64, b: f64 },
}

impl IterFn {
    fn validate(&self) -> Result<()> {
        match self {
            IterFn::MulBy(c) if !(*c > 0.0) => Err(domain("multiplier must be positive")),
            IterFn::Power { num, den } if *num == 0 || *den == 0 => {
                Err(domain("power exponent must be a nonzero rational"))
            }
            IterFn::Affine { a, .. } if !(*a > 0.0) => {
                Err(domain("affine multiplier must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// log10 of the multiplier as an exact LogValue where possible.
    fn mul_log(&self) -> Option<LogValue> {
        let c = match self {
            IterFn::MulBy(c) => *c,
            IterFn::Affine { a, .. } => *a,
            IterFn::Power { .. } => return None,
        };
        if c.fract() == 0.0 && c >= 1.0 && c < 9e15 {
            let (int, frac) = log10_of_rational(c as u64, 1);
            Some(LogValue::from_parts(int.into(), frac))
        } else {
            Some(LogValue::from_f64(c.log10()))
        }
    }
}

/// Unseen-digit refill for expanding log-space steps.
///
/// The state holds a 128-bit prefix of the orbit's log-magnitude, but a
/// generic starting point is a real number with infinitely many digits.
/// A step that multiplies the log by k amplifies the unheld tail into the
/// bottom of the held window; for a typical start those revealed digits
/// are uniform, so they are drawn from the path RNG. Without this refill
/// the state's finite entropy is exhausted after ~128/log2(k) steps and
/// the simulated orbit collapses onto a dyadic artifact.
fn expand_tail(state: LogValue, k: u64, rng: &mut ChaCha8Rng) -> LogValue {
    if k <= 1 {
        return state;
    }
    let noise = LogValue::from_parts(0.into(), Frac128(rng.gen_range(0..k) as u128));
    state.add(&noise)
}

/// One path of the random function system: apply f1 with probability p1,
/// else f2, starting at x0 > 0; emit frac(log10 x_n).
///
/// State is the log-magnitude with an exact big-integer part, so power
/// steps (which multiply the log) never overflow.
pub fn randomized_iteration(
    f1: IterFn,
    f2: IterFn,
    p1: f64,
    x0: f64,
    n: usize,
    seed: u64,
) -> Result<Mod1Sequence> {
    f1.validate()?;
    f2.validate()?;
    if !(0.0..=1.0).contains(&p1) {
        return Err(domain("selection probability must lie in [0, 1]"));
    }
    if !(x0 > 0.0) {
        return Err(domain("starting point must be positive"));
    }
    if n == 0 || n > crate::sequences::MAX_SEQUENCE_LEN {
        return Err(domain("path length out of budget"));
    }
    let mut rng = stream_rng(seed, 1);
    let mut state = LogValue::from_f64(x0.log10());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let f = if rng.gen::<f64>() < p1 { &f1 } else { &f2 };
        state = match f {
            IterFn::MulBy(_) => state.add(&f.mul_log().unwrap()),
            IterFn::Power { num, den } => {
                let s = state.mul_rational(*num, *den);
                expand_tail(s, num.unsigned_abs(), &mut rng)
            }
            IterFn::Affine { a, b } => {
                // Once the magnitude dwarfs b the step is a pure
                // multiplication; below that, apply the map in real space.
                let approx = state.approx_f64();
                if *b == 0.0 || approx > 30.0 {
                    state.add(&f.mul_log().unwrap())
                } else {
                    let x = 10f64.powf(approx);
                    LogValue::from_f64((a * x + b).log10())
                }
            }
        };
        out.push(state.frac_f64());
    }
    Mod1Sequence::new(out)
}

/// Per-trial first-n discrepancies of polynomial iterates from random
/// starts.
pub fn poly_random_start_discrepancies(
    coeffs: &[f64],
    start: &RandomVariableSpec,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    start.validate()?;
    if !start.is_continuous() {
        return Err(domain("starting law must be continuous (no atoms)"));
    }
    if coeffs.len() < 3 || *coeffs.last().unwrap() == 0.0 {
        return Err(domain("polynomial must have degree >= 2"));
    }
    let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let mut rng = stream_rng(seed, 1);
    (0..trials)
        .map(|_| {
            let x0 = start.sample_one(&mut rng);
            // f must actually grow from the sampled start.
            if eval(x0) <= x0 {
                return Err(domain(format!(
                    "f(x) <= x at sampled start {x0}: map does not escape"
                )));
            }
            // The sampled start is a generic real: refill revealed digits.
            Ok(poly_orbit_discrepancy(&eval, coeffs, x0, n, Some(rng.gen())))
        })
        .collect()
}

/// Fraction of random-start polynomial-iterate paths whose first-n
/// discrepancy stays below `threshold`.
pub fn polynomial_iterate_random_start(
    coeffs: &[f64],
    start: &RandomVariableSpec,
    n: usize,
    trials: usize,
    threshold: f64,
    seed: u64,
) -> Result<f64> {
    let ds = poly_random_start_discrepancies(coeffs, start, n, trials, seed)?;
    Ok(ds.iter().filter(|d| **d < threshold).count() as f64 / trials as f64)
}

/// Star discrepancy of the orbit of `eval` from x0, run in float space
/// until 1e150 and in log space beyond, where each step multiplies the
/// log by the degree.
///
/// `refill_seed`: Some(s) treats x0 as a generic real and refills the
/// digits revealed by the expanding log steps (see [`expand_tail`]);
/// None keeps the held prefix exact, which is the right model for starts
/// like powers of ten whose orbit genuinely degenerates.
pub fn poly_orbit_discrepancy(
    eval: &impl Fn(f64) -> f64,
    coeffs: &[f64],
    x0: f64,
    n: usize,
    refill_seed: Option<u64>,
) -> f64 {
    let degree = (coeffs.len() - 1) as i64;
    let lead = coeffs.last().unwrap().abs();
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
        let mut rng = refill_seed.map(|s| stream_rng(s, 3));
        let lead_log = LogValue::from_f64(lead.log10());
        let mut l = LogValue::from_f64(x.abs().log10());
        for _ in i..n {
            l = l.mul_rational(degree, 1).add(&lead_log);
            if let Some(rng) = rng.as_mut() {
                l = expand_tail(l, degree as u64, rng);
            }
            out.push(l.frac_f64());
        }
    }
    let s = Mod1Sequence::new(out).expect("orbit fracs in range");
    crate::mod1::star_discrepancy(&s).star_discrepancy
}

/// A finite random probability measure: component laws with weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMeasureSpec {
    pub components: Vec<(f64, RandomVariableSpec)>,
}

impl RandomMeasureSpec {
    pub fn new(components: Vec<(f64, RandomVariableSpec)>) -> Result<RandomMeasureSpec> {
        if components.is_empty() {
            return Err(domain("random measure needs at least one component"));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 || components.iter().any(|(w, _)| *w < 0.0) {
            return Err(domain("component weights must be >= 0 and sum to 1"));
        }
        for (_, law) in &components {
            law.validate()?;
        }
        Ok(RandomMeasureSpec { components })
    }

    /// Every component continuous and free of mass at 0, as the
    /// combined-sample theorem requires.
    pub fn check_no_significand_atoms(&self) -> Result<()> {
        for (_, law) in &self.components {
            if !law.is_continuous() || law.has_atom_at_zero() {
                return Err(domain(
                    "combined sampling requires continuous components without mass at 0",
                ));
            }
        }
        Ok(())
    }
}

/// CDF of the average probability measure: the weight-mixture of the
/// component CDFs.
pub fn average_measure_cdf(m: &RandomMeasureSpec, t: f64) -> Result<f64> {
    m.components
        .iter()
        .map(|(w, law)| Ok(w * law.cdf(t)?))
        .sum()
}

/// Draw k_measures component laws i.i.d. by weight, then per_measure
/// values from each; the concatenated combined sample.
pub fn combined_sample(
    m: &RandomMeasureSpec,
    per_measure: usize,
    k_measures: usize,
    seed: u64,
) -> Result<SampleBatch> {
    if per_measure == 0 || k_measures == 0 {
        return Err(domain("combined sample sizes must be >= 1"));
    }
    let mut rng = stream_rng(seed, 1);
    let mut values = Vec::with_capacity(per_measure * k_measures);
    for _ in 0..k_measures {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = &m.components.last().unwrap().1;
        for (w, law) in &m.components {
            acc += w;
            if u < acc {
                chosen = law;
                break;
            }
        }
        for _ in 0..per_measure {
            values.push(chosen.sample_one(&mut rng));
        }
    }
    Ok(SampleBatch {
        values,
        seed,
        spec_digest: digest_of(m),
    })
}

/// First-digit counts (index d-1 for digit d) plus the zero count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DigitTable {
    pub counts: [u64; 9],
    pub zeros: u64,
}

impl DigitTable {
    pub fn total_nonzero(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequency(&self, d: u8) -> f64 {
        self.counts[(d - 1) as usize] as f64 / self.total_nonzero() as f64
    }
}

/// Cross-path first-digit table of n-step random-walk sums.
pub fn random_walk_paths(
    step: &RandomVariableSpec,
    n_steps: usize,
    paths: usize,
    seed: u64,
) -> Result<DigitTable> {
    step.validate()?;
    if n_steps == 0 || paths == 0 {
        return Err(domain("walk needs n_steps >= 1 and paths >= 1"));
    }
    let mut table = DigitTable::default();
    let mut rng = stream_rng(seed, 1);
    for _ in 0..paths {
        let mut sum = 0.0f64;
        for _ in 0..n_steps {
            sum += step.sample_one(&mut rng);
        }
        match first_digit(sum).unwrap_or(0) {
            0 => table.zeros += 1,
            d => table.counts[(d - 1) as usize] += 1,
        }
    }
    Ok(table)
}
