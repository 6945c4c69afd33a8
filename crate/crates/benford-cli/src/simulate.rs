//! The `simulate` subcommand: named stochastic experiments emitting a
//! plottable CSV series with columns step, distance, samples, seed.

use clap::{Args, ValueEnum};

use benford::mod1::{star_discrepancy, Mod1Sequence};
use benford::stochastic::{
    self, IterFn, MixtureLaw, SignificandLaw,
};

use crate::rv::{parse_measure, parse_rv};
use crate::{check_budget, lib_err, usage_err, RunResult, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    /// KS distance of S(X^n) to Benford for n = 1..N.
    Powers,
    /// KS distance of S(X1...Xk) to Benford for k = 1..N.
    Products,
    /// KS distance of S(X*Y) with X exactly Benford.
    ProductWithBenford,
    /// Two-sample distance between S(X) and S(factor*X).
    ScaleCheck,
    /// Two-sample distance between S(Z) and S(Z^power).
    BaseCheck,
    /// Closed-form and empirical distance of the q-mixture to Benford.
    Mixture,
    /// Star discrepancy of a two-map random function system.
    RandomizedIteration,
    /// Per-trial discrepancy of polynomial iterates from random starts.
    PolyRandomStart,
    /// KS distance of a combined sample from a random measure.
    Combined,
    /// First-digit frequencies of n-step random walk sums.
    Walk,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Random variable spec (see `benford simulate --help` grammar).
    #[arg(long, default_value = "uniform:0,1")]
    pub rv: String,
    /// Monte Carlo draws per distance estimate.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Series length: max power / product length / path length / walk steps.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Independent trials (poly-random-start) or paths (walk).
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Mixture weight (mixture, base-check on the mixture law).
    #[arg(long)]
    pub q: Option<f64>,
    /// Scale factor (scale-check).
    #[arg(long, default_value_t = 2.0)]
    pub factor: f64,
    /// Power for base-check.
    #[arg(long, default_value_t = 2)]
    pub power: u32,
    /// First map of the random function system, e.g. mul:2, pow:1/2,
    /// affine:2,1.
    #[arg(long, default_value = "mul:2")]
    pub f1: String,
    /// Second map of the random function system.
    #[arg(long, default_value = "mul:3")]
    pub f2: String,
    /// Probability of applying --f1 at each step.
    #[arg(long, default_value_t = 0.5)]
    pub p1: f64,
    /// Starting point of the random function system.
    #[arg(long, default_value_t = 1.0)]
    pub x0: f64,
    /// Polynomial coefficients, low to high, e.g. 1,0,1 for x^2+1.
    #[arg(long, default_value = "1,0,1")]
    pub coeffs: String,
    /// Random measure, e.g. '0.5:uniform:2,3;0.5:exp:1' (combined).
    #[arg(long)]
    pub measure: Option<String>,
    /// Values drawn per sampled measure (combined).
    #[arg(long, default_value_t = 10)]
    pub per_measure: usize,
}

struct Csv {
    samples: usize,
    seed: u64,
}

impl Csv {
    fn header(&self) {
        println!("step,distance,samples,seed");
    }

    fn row(&self, step: usize, distance: f64) {
        println!("{step},{distance:.11e},{},{}", self.samples, self.seed);
    }
}

fn parse_iter_fn(s: &str) -> RunResult<IterFn> {
    let (kind, args) = s
        .trim()
        .split_once(':')
        .ok_or_else(|| usage_err(format!("unrecognized map spec: {s:?}")))?;
    match kind {
        "mul" => Ok(IterFn::MulBy(args.parse().map_err(|_| usage_err("mul needs a number"))?)),
        "pow" => {
            let (num, den) = match args.split_once('/') {
                Some((n, d)) => (
                    n.parse().map_err(|_| usage_err("bad power numerator"))?,
                    d.parse().map_err(|_| usage_err("bad power denominator"))?,
                ),
                None => (args.parse().map_err(|_| usage_err("bad power"))?, 1),
            };
            Ok(IterFn::Power { num, den })
        }
        "affine" => {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| usage_err("affine needs A,B"))?;
            Ok(IterFn::Affine {
                a: a.parse().map_err(|_| usage_err("bad affine slope"))?,
                b: b.parse().map_err(|_| usage_err("bad affine offset"))?,
            })
        }
        _ => Err(usage_err(format!("unrecognized map kind: {kind:?}"))),
    }
}

/// Star discrepancy of geometrically spaced prefixes, for convergence
/// plots.
fn prefix_discrepancies(seq: &Mod1Sequence) -> Vec<(usize, f64)> {
    let n = seq.len();
    let mut marks: Vec<usize> = (0..)
        .map(|k| 10usize.saturating_mul(1 << k))
        .take_while(|&m| m < n)
        .collect();
    marks.push(n);
    marks
        .into_iter()
        .map(|m| {
            let prefix = Mod1Sequence::new(seq.values()[..m].to_vec()).expect("nonempty prefix");
            (m, star_discrepancy(&prefix).star_discrepancy)
        })
        .collect()
}

pub fn run(args: SimulateArgs) -> RunResult<()> {
    check_budget("samples", args.samples)?;
    check_budget("n", args.n)?;
    check_budget("trials", args.trials)?;
    let csv = Csv { samples: args.samples, seed: args.seed };
    match args.experiment {
        Experiment::Powers => {
            let rv = parse_rv(&args.rv)?;
            let ns: Vec<u32> = (1..=args.n as u32).collect();
            let series =
                stochastic::power_sequence(&rv, &ns, args.samples, args.seed).map_err(lib_err)?;
            csv.header();
            for (n, d) in series {
                csv.row(n as usize, d);
            }
        }
        Experiment::Products => {
            let rv = parse_rv(&args.rv)?;
            let series = stochastic::product_sequence(&rv, args.n, args.samples, args.seed)
                .map_err(lib_err)?;
            csv.header();
            for (k, d) in series {
                csv.row(k, d);
            }
        }
        Experiment::ProductWithBenford => {
            let rv = parse_rv(&args.rv)?;
            let d = stochastic::product_with_benford(&rv, args.samples, args.seed)
                .map_err(lib_err)?;
            csv.header();
            csv.row(1, d);
        }
        Experiment::ScaleCheck => {
            let rv = parse_rv(&args.rv)?;
            let d = stochastic::scale_invariance_check(&rv, args.factor, args.samples, args.seed)
                .map_err(lib_err)?;
            csv.header();
            csv.row(1, d);
        }
        Experiment::BaseCheck => {
            let law = match args.q {
                Some(q) => SignificandLaw::Mixture(
                    MixtureLaw::new(q).map_err(|e| usage_err(e.to_string()))?,
                ),
                None => SignificandLaw::Rv(parse_rv(&args.rv)?),
            };
            let d = stochastic::base_invariance_check(&law, args.power, args.samples, args.seed)
                .map_err(lib_err)?;
            csv.header();
            csv.row(1, d);
        }
        Experiment::Mixture => {
            let q = args.q.ok_or_else(|| usage_err("mixture needs --q"))?;
            let exact = stochastic::mixture_distance_to_benford(q)
                .map_err(|e| usage_err(e.to_string()))?;
            let mix = MixtureLaw::new(q).map_err(|e| usage_err(e.to_string()))?;
            let mut rng = stochastic::stream_rng(args.seed, 1);
            let values: Vec<f64> = (0..args.samples).map(|_| mix.sample_one(&mut rng)).collect();
            let empirical = stochastic::empirical_distance_to_benford(&values);
            csv.header();
            csv.row(0, exact); // closed form
            csv.row(1, empirical);
        }
        Experiment::RandomizedIteration => {
            let f1 = parse_iter_fn(&args.f1)?;
            let f2 = parse_iter_fn(&args.f2)?;
            let seq =
                stochastic::randomized_iteration(f1, f2, args.p1, args.x0, args.n, args.seed)
                    .map_err(lib_err)?;
            csv.header();
            for (m, d) in prefix_discrepancies(&seq) {
                csv.row(m, d);
            }
        }
        Experiment::PolyRandomStart => {
            let coeffs: Vec<f64> = args
                .coeffs
                .split(',')
                .map(|c| c.trim().parse().map_err(|_| usage_err("bad coefficient")))
                .collect::<RunResult<_>>()?;
            let start = parse_rv(&args.rv)?;
            let ds = stochastic::poly_random_start_discrepancies(
                &coeffs, &start, args.n, args.trials, args.seed,
            )
            .map_err(lib_err)?;
            csv.header();
            for (t, d) in ds.iter().enumerate() {
                csv.row(t + 1, *d);
            }
        }
        Experiment::Combined => {
            let m = parse_measure(
                args.measure
                    .as_deref()
                    .ok_or_else(|| usage_err("combined needs --measure"))?,
            )?;
            m.check_no_significand_atoms().map_err(lib_err)?;
            let k_measures = args.samples / args.per_measure.max(1);
            let batch = stochastic::combined_sample(&m, args.per_measure, k_measures, args.seed)
                .map_err(lib_err)?;
            let d = stochastic::ks_to_benford(&batch.values);
            csv.header();
            csv.row(1, d);
        }
        Experiment::Walk => {
            let step = parse_rv(&args.rv)?;
            let table = stochastic::random_walk_paths(&step, args.n, args.trials, args.seed)
                .map_err(lib_err)?;
            // step column = first digit; distance column = its frequency.
            csv.header();
            for d in 1..=9u8 {
                csv.row(d as usize, table.frequency(d));
            }
        }
    }
    Ok(())
}
