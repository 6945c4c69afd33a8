//! Empirical Benford analysis of finite datasets: digit tables, KS
//! distance to the Benford CDF, chi-square on first digits, and MAD.
//!
//! Zeros are excluded from the significand sample but counted, and
//! negatives are folded by absolute value; both counts appear in the
//! report. KS is reported as a raw distance (no p-value: its null
//! distribution under discretized data is delicate); for reference,
//! exactly-Benford samples of size n typically land near 1.2/sqrt(n).
//! MAD is a practitioner convention with no inferential claim attached.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, Result};
use crate::law::first_digit_table;
use crate::mod1::ks_distance_sorted;

/// The sorted significands of a dataset, with the excluded-value counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSignificands {
    significands: Vec<f64>,
    n_used: usize,
    n_zero: usize,
    n_negative_used: usize,
}

impl EmpiricalSignificands {
    /// Significands in ascending order, all in [1, 10).
    pub fn significands(&self) -> &[f64] {
        &self.significands
    }

    pub fn n_used(&self) -> usize {
        self.n_used
    }

    pub fn n_zero(&self) -> usize {
        self.n_zero
    }

    pub fn n_negative_used(&self) -> usize {
        self.n_negative_used
    }

    /// Build directly from significands already in [1, 10), for data
    /// whose magnitudes exceed the float range (exact big-integer
    /// sequences ingested as digit strings).
    pub fn from_significands(
        mut significands: Vec<f64>,
        n_zero: usize,
        n_negative_used: usize,
    ) -> Result<EmpiricalSignificands> {
        if significands.is_empty() {
            return Err(domain("empty effective sample: no nonzero values"));
        }
        if significands.iter().any(|s| !(1.0..10.0).contains(s)) {
            return Err(domain("significand outside [1, 10)"));
        }
        significands.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n_used = significands.len();
        Ok(EmpiricalSignificands {
            significands,
            n_used,
            n_zero,
            n_negative_used,
        })
    }

    /// Observed first-digit counts, index d-1 for digit d.
    pub fn first_digit_counts(&self) -> [u64; 9] {
        let mut counts = [0u64; 9];
        for &s in &self.significands {
            counts[(digit_of_significand(s) - 1) as usize] += 1;
        }
        counts
    }

    /// Observed first-two-digit counts: index (d1-1)*10 + d2.
    pub fn digit_pair_counts(&self) -> [u64; 90] {
        let mut counts = [0u64; 90];
        for &s in &self.significands {
            let d1 = digit_of_significand(s);
            // Second digit of the significand, same boundary guard.
            let d2 = ((s * (1.0 + 1e-12) * 10.0).floor() as u64 % 10) as u8;
            counts[(d1 as usize - 1) * 10 + d2 as usize] += 1;
        }
        counts
    }
}

/// First digit of a significand in [1, 10). The relative nudge keeps
/// values sitting one float ulp under a digit boundary (significands of
/// large exact integers) from flooring a digit low.
fn digit_of_significand(s: f64) -> u8 {
    ((s * (1.0 + 1e-12)).floor() as u8).clamp(1, 9)
}

/// Fold a dataset into its significand sample. Negatives contribute by
/// absolute value; zeros are counted and excluded.
pub fn empirical_from(values: &[f64]) -> Result<EmpiricalSignificands> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(domain("dataset contains a non-finite value"));
    }
    let n_zero = values.iter().filter(|v| **v == 0.0).count();
    let n_negative_used = values.iter().filter(|v| **v < 0.0).count();
    let significands: Vec<f64> = values
        .iter()
        .filter(|v| **v != 0.0)
        .map(|&v| crate::significand::significand(v).map(|d| d.significand))
        .collect::<Result<_>>()?;
    EmpiricalSignificands::from_significands(significands, n_zero, n_negative_used)
}

/// sup_t |F_n(t) - log10 t|, evaluated at both one-sided limits of every
/// jump of the empirical CDF.
pub fn ks_to_benford(e: &EmpiricalSignificands) -> f64 {
    ks_distance_sorted(e.significands(), |t| t.log10())
}

/// Pearson statistic and survival-function p-value (8 degrees of
/// freedom) against the first-digit law, from observed counts.
pub fn chi_square_from_counts(obs: &[f64; 9], n: f64) -> (f64, f64) {
    let expected = first_digit_table();
    let stat: f64 = obs
        .iter()
        .zip(expected.iter())
        .map(|(o, p)| {
            let e = n * p;
            (o - e) * (o - e) / e
        })
        .sum();
    let p = ChiSquared::new(8.0).unwrap().sf(stat);
    (stat, p)
}

/// Chi-square first-digit test. Requires n_used >= 45 so every cell's
/// expected count is at least 5; below that an exact multinomial test
/// would be needed, which this toolkit does not provide.
pub fn chi_square_first_digit(e: &EmpiricalSignificands) -> Result<(f64, f64)> {
    if e.n_used() < 45 {
        return Err(domain(
            "chi-square needs n >= 45 (5 expected per cell); use an exact multinomial test",
        ));
    }
    let obs = e.first_digit_counts().map(|c| c as f64);
    Ok(chi_square_from_counts(&obs, e.n_used() as f64))
}

/// Mean absolute deviation of observed first-digit frequencies from the
/// first-digit law.
pub fn mad_from_counts(obs: &[f64; 9], n: f64) -> f64 {
    let expected = first_digit_table();
    obs.iter()
        .zip(expected.iter())
        .map(|(o, p)| (o / n - p).abs())
        .sum::<f64>()
        / 9.0
}

pub fn mad_first_digit(e: &EmpiricalSignificands) -> f64 {
    let obs = e.first_digit_counts().map(|c| c as f64);
    mad_from_counts(&obs, e.n_used() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AnalyzeOptions {
    /// Also tabulate first-two-digit pair counts.
    pub digit_pairs: bool,
}

/// Full conformance report for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformanceReport {
    pub n_used: usize,
    pub n_zero: usize,
    pub n_negative_used: usize,
    pub first_digit_counts: [u64; 9],
    pub expected_counts: [f64; 9],
    pub ks_distance: f64,
    pub chi_square: f64,
    pub chi_square_pvalue: f64,
    pub mad: f64,
    pub digit_pair_table: Option<[u64; 90]>,
    pub verdict_note: String,
}

/// Run every sub-statistic on an already-folded significand sample.
pub fn analyze_empirical(
    e: &EmpiricalSignificands,
    options: &AnalyzeOptions,
) -> Result<ConformanceReport> {
    let n = e.n_used() as f64;
    let first_digit_counts = e.first_digit_counts();
    let expected_counts = first_digit_table().map(|p| n * p);
    let ks_distance = ks_to_benford(e);
    let (chi_square, chi_square_pvalue) = chi_square_first_digit(e)?;
    let mad = mad_first_digit(e);
    let verdict_note = format!(
        "KS distance to the Benford CDF is {ks_distance:.4}; exactly Benford samples of \
         this size typically land near {:.4}. First-digit MAD is {mad:.4} and the \
         chi-square p-value is {chi_square_pvalue:.3}. These distances are the only \
         evidence considered: a wide spread over many orders of magnitude does not by \
         itself make data Benford, so no conclusion is drawn from spread or regularity.",
        1.2 / n.sqrt(),
    );
    Ok(ConformanceReport {
        n_used: e.n_used(),
        n_zero: e.n_zero(),
        n_negative_used: e.n_negative_used(),
        first_digit_counts,
        expected_counts,
        ks_distance,
        chi_square,
        chi_square_pvalue,
        mad,
        digit_pair_table: options.digit_pairs.then(|| e.digit_pair_counts()),
        verdict_note,
    })
}

/// Fold a raw dataset and run every sub-statistic.
pub fn analyze(values: &[f64], options: &AnalyzeOptions) -> Result<ConformanceReport> {
    analyze_empirical(&empirical_from(values)?, options)
}

/// A float as a canonical JSON number with 12 significant digits.
fn json_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{:.11e}", x)
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl ConformanceReport {
    /// Canonical JSON: fixed field order, floats at 12 significant digits.
    pub fn to_canonical_json(&self) -> String {
        let ints = |xs: &[u64]| {
            xs.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let floats = |xs: &[f64]| xs.iter().map(|&x| json_num(x)).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        s.push('{');
        s.push_str(&format!("\"n_used\":{},", self.n_used));
        s.push_str(&format!("\"n_zero\":{},", self.n_zero));
        s.push_str(&format!("\"n_negative_used\":{},", self.n_negative_used));
        s.push_str(&format!(
            "\"first_digit_counts\":[{}],",
            ints(&self.first_digit_counts)
        ));
        s.push_str(&format!(
            "\"expected_counts\":[{}],",
            floats(&self.expected_counts)
        ));
        s.push_str(&format!("\"ks_distance\":{},", json_num(self.ks_distance)));
        s.push_str(&format!("\"chi_square\":{},", json_num(self.chi_square)));
        s.push_str(&format!(
            "\"chi_square_pvalue\":{},",
            json_num(self.chi_square_pvalue)
        ));
        s.push_str(&format!("\"mad\":{},", json_num(self.mad)));
        if let Some(pairs) = &self.digit_pair_table {
            s.push_str(&format!("\"digit_pair_table\":[{}],", ints(pairs)));
        }
        s.push_str(&format!(
            "\"verdict_note\":{}",
            json_string(&self.verdict_note)
        ));
        s.push('}');
        s
    }

    /// Aligned text rendering of the digit table and summary statistics.
    pub fn to_text_table(&self) -> String {
        let n = self.n_used as f64;
        let mut s = String::new();
        s.push_str(&format!(
            "n_used {}   n_zero {}   n_negative_used {}\n\n",
            self.n_used, self.n_zero, self.n_negative_used
        ));
        s.push_str("digit     observed     expected     obs_freq     benford\n");
        let law = first_digit_table();
        for d in 0..9 {
            s.push_str(&format!(
                "{:>5} {:>12} {:>12.2} {:>12.6} {:>11.6}\n",
                d + 1,
                self.first_digit_counts[d],
                self.expected_counts[d],
                self.first_digit_counts[d] as f64 / n,
                law[d],
            ));
        }
        s.push_str(&format!(
            "\nks_distance {:.6}\nchi_square {:.4} (p = {:.4}, dof 8)\nmad {:.6}\n\n{}\n",
            self.ks_distance, self.chi_square, self.chi_square_pvalue, self.mad, self.verdict_note
        ));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::log10_of_rational;
    use crate::mod1::weyl_sequence_fixed;

    #[test]
    fn folding_conventions() {
        let e = empirical_from(&[2019.0, -20.19, 0.02019]).unwrap();
        assert_eq!(e.n_used(), 3);
        assert_eq!(e.n_zero(), 0);
        assert_eq!(e.n_negative_used(), 1);
        assert!(e.significands().iter().all(|s| (s - 2.019).abs() < 1e-12));

        let e = empirical_from(&[0.0, 0.0, 5.0]).unwrap();
        assert_eq!((e.n_used(), e.n_zero()), (1, 2));

        assert!(empirical_from(&[0.0, 0.0]).is_err());
        assert!(empirical_from(&[]).is_err());
        assert!(empirical_from(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn fibonacci_digit_counts() {
        let fib = [1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0];
        let counts = empirical_from(&fib).unwrap().first_digit_counts();
        assert_eq!(counts, [3, 2, 2, 0, 2, 0, 0, 1, 0]);
    }

    #[test]
    fn ks_of_degenerate_atom_is_one() {
        let e = EmpiricalSignificands::from_significands(vec![1.0; 10], 0, 0).unwrap();
        assert_eq!(ks_to_benford(&e), 1.0);
    }

    #[test]
    fn ks_of_benford_quantile_lattice() {
        for n in [10usize, 1000] {
            let sigs: Vec<f64> = (1..=n)
                .map(|i| 10f64.powf((2 * i - 1) as f64 / (2 * n) as f64))
                .collect();
            let e = EmpiricalSignificands::from_significands(sigs, 0, 0).unwrap();
            assert!(ks_to_benford(&e) <= 1.0 / (2 * n) as f64 + 1e-12);
        }
    }

    #[test]
    fn ks_of_powers_of_two() {
        let alpha = log10_of_rational(2, 1).1;
        let sigs = weyl_sequence_fixed(alpha, 100_000).unwrap().significands();
        let e = EmpiricalSignificands::from_significands(sigs, 0, 0).unwrap();
        assert!(ks_to_benford(&e) < 0.01);
    }

    #[test]
    fn chi_square_null_and_extremes() {
        let n = 1000.0;
        let obs = first_digit_table().map(|p| n * p);
        let (stat, p) = chi_square_from_counts(&obs, n);
        assert!(stat.abs() < 1e-20);
        assert!((p - 1.0).abs() < 1e-12);

        // All mass on digit 9.
        let e = EmpiricalSignificands::from_significands(vec![9.5; 1000], 0, 0).unwrap();
        let (stat, p) = chi_square_first_digit(&e).unwrap();
        assert!(stat > 19_000.0, "{stat}");
        assert!(p < 1e-300);
    }

    #[test]
    fn chi_square_small_sample_rejected() {
        let e = EmpiricalSignificands::from_significands(vec![1.5; 44], 0, 0).unwrap();
        assert!(chi_square_first_digit(&e).is_err());
    }

    #[test]
    fn mad_reference_values() {
        let n = 900.0;
        let exact = first_digit_table().map(|p| n * p);
        assert!(mad_from_counts(&exact, n) < 1e-15);

        let uniform = [100.0; 9];
        assert!((mad_from_counts(&uniform, n) - 0.0597).abs() < 5e-4);

        let mut all_on_one = [0.0; 9];
        all_on_one[0] = n;
        assert!((mad_from_counts(&all_on_one, n) - 0.155).abs() < 5e-4);
    }

    #[test]
    fn analyze_powers_of_two() {
        let alpha = log10_of_rational(2, 1).1;
        let sigs = weyl_sequence_fixed(alpha, 10_000).unwrap().significands();
        let e = EmpiricalSignificands::from_significands(sigs, 0, 0).unwrap();
        let r = analyze_empirical(&e, &AnalyzeOptions::default()).unwrap();
        assert!(r.ks_distance < 0.012);
        assert!(r.mad < 0.01);
        assert_eq!(r.first_digit_counts.iter().sum::<u64>(), 10_000);
    }

    #[test]
    fn analyze_integer_range_is_far_from_benford() {
        let values: Vec<f64> = (1..=100_000).map(|i| i as f64).collect();
        let r = analyze(&values, &AnalyzeOptions::default()).unwrap();
        assert!(r.ks_distance > 0.1, "{}", r.ks_distance);
    }

    #[test]
    fn analyze_exact_benford_draws() {
        let batch =
            crate::stochastic::sample(&crate::stochastic::RandomVariableSpec::BenfordExact, 1_000_000, 42)
                .unwrap();
        let r = analyze(&batch.values, &AnalyzeOptions::default()).unwrap();
        assert!(r.ks_distance < 0.0025, "{}", r.ks_distance);
        assert!(r.chi_square_pvalue > 0.001);
    }

    #[test]
    fn report_is_deterministic_and_consistent() {
        let values: Vec<f64> = (1..=500).map(|i| (i as f64).powi(3)).collect();
        let opts = AnalyzeOptions { digit_pairs: true };
        let a = analyze(&values, &opts).unwrap();
        let b = analyze(&values, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert_eq!(a.n_used + a.n_zero, 500);
        let pairs = a.digit_pair_table.unwrap();
        assert_eq!(pairs.iter().sum::<u64>(), a.n_used as u64);
        // Pair counts marginalize to the first-digit counts.
        for d in 0..9 {
            let marginal: u64 = pairs[d * 10..(d + 1) * 10].iter().sum();
            assert_eq!(marginal, a.first_digit_counts[d]);
        }
    }

    #[test]
    fn canonical_json_shape() {
        let r = analyze(&[1.0, 2.0, 3.0, -4.5, 0.0], &AnalyzeOptions::default());
        // Too small for chi-square; build a bigger sample instead.
        assert!(r.is_err());
        let values: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let r = analyze(&values, &AnalyzeOptions::default()).unwrap();
        let json = r.to_canonical_json();
        assert!(json.starts_with("{\"n_used\":100,\"n_zero\":0,"));
        assert!(json.contains("\"ks_distance\":"));
        assert!(json.ends_with("}"));
        // 12 significant digits in float fields.
        assert!(json.contains(&format!("{:.11e}", r.ks_distance)));
        let text = r.to_text_table();
        assert!(text.contains("digit"));
        assert!(!text.to_lowercase().contains("spread over many orders of magnitude makes"));
    }

    #[test]
    fn ks_matches_mod1_kolmogorov_distance() {
        let values: Vec<f64> = (1..=2000).map(|i| (i as f64).sqrt() * 3.7).collect();
        let e = empirical_from(&values).unwrap();
        let s = crate::mod1::log_mod1_of(&values).unwrap();
        let d_mod1 = crate::mod1::kolmogorov_to_uniform(&s);
        assert!((ks_to_benford(&e) - d_mod1).abs() < 1e-9);
    }
}
