//! Textual specs for random variables and random measures.
//!
//! Grammar:
//!   uniform:A,B | exp:RATE | normal:MEAN,SD | benford |
//!   atoms:V=P,V=P,... | scaled:FACTOR:INNER | pow:K:INNER
//! A measure is weighted components joined by ';':  W:RV;W:RV;...

use benford::stochastic::{RandomMeasureSpec, RandomVariableSpec};

use crate::{usage_err, CliError, RunResult};

fn num(s: &str) -> RunResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage_err(format!("expected a number, got {s:?}")))
}

pub fn parse_rv(s: &str) -> RunResult<RandomVariableSpec> {
    let s = s.trim();
    if s == "benford" {
        return Ok(RandomVariableSpec::BenfordExact);
    }
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| usage_err(format!("unrecognized random variable spec: {s:?}")))?;
    let spec = match kind {
        "uniform" => {
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| usage_err("uniform needs A,B"))?;
            RandomVariableSpec::Uniform { a: num(a)?, b: num(b)? }
        }
        "exp" => RandomVariableSpec::Exponential { rate: num(args)? },
        "normal" => {
            let (m, sd) = args
                .split_once(',')
                .ok_or_else(|| usage_err("normal needs MEAN,SD"))?;
            RandomVariableSpec::Normal { mean: num(m)?, sd: num(sd)? }
        }
        "atoms" => {
            let atoms = args
                .split(',')
                .map(|kv| {
                    let (v, p) = kv
                        .split_once('=')
                        .ok_or_else(|| usage_err("atoms need V=P pairs"))?;
                    Ok((num(v)?, num(p)?))
                })
                .collect::<RunResult<Vec<_>>>()?;
            RandomVariableSpec::DiscreteAtoms { atoms }
        }
        "scaled" => {
            let (f, inner) = args
                .split_once(':')
                .ok_or_else(|| usage_err("scaled needs FACTOR:INNER"))?;
            RandomVariableSpec::Scaled { inner: Box::new(parse_rv(inner)?), factor: num(f)? }
        }
        "pow" => {
            let (k, inner) = args
                .split_once(':')
                .ok_or_else(|| usage_err("pow needs K:INNER"))?;
            let k = k
                .trim()
                .parse::<i32>()
                .map_err(|_| usage_err("pow exponent must be an integer"))?;
            RandomVariableSpec::PowerOf { inner: Box::new(parse_rv(inner)?), k }
        }
        _ => return Err(usage_err(format!("unrecognized random variable kind: {kind:?}"))),
    };
    spec.validate()
        .map_err(|e| usage_err(e.to_string()))?;
    Ok(spec)
}

pub fn parse_measure(s: &str) -> RunResult<RandomMeasureSpec> {
    let components = s
        .split(';')
        .map(|part| {
            let (w, rv) = part
                .split_once(':')
                .ok_or_else(|| usage_err("measure components are WEIGHT:RV"))?;
            Ok((num(w)?, parse_rv(rv)?))
        })
        .collect::<RunResult<Vec<_>>>()?;
    RandomMeasureSpec::new(components).map_err(|e: benford::BenfordError| -> CliError {
        usage_err(e.to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rv_grammar() {
        assert_eq!(
            parse_rv("uniform:0,1").unwrap(),
            RandomVariableSpec::Uniform { a: 0.0, b: 1.0 }
        );
        assert_eq!(parse_rv("benford").unwrap(), RandomVariableSpec::BenfordExact);
        assert_eq!(
            parse_rv("scaled:2.5:pow:2:normal:7,1").unwrap(),
            RandomVariableSpec::Scaled {
                factor: 2.5,
                inner: Box::new(RandomVariableSpec::PowerOf {
                    k: 2,
                    inner: Box::new(RandomVariableSpec::Normal { mean: 7.0, sd: 1.0 }),
                }),
            }
        );
        assert!(parse_rv("uniform:1,0").is_err());
        assert!(parse_rv("gauss:0,1").is_err());
    }

    #[test]
    fn measure_grammar() {
        let m = parse_measure("0.5:uniform:2,3;0.5:exp:1").unwrap();
        assert_eq!(m.components.len(), 2);
        assert!(parse_measure("0.9:benford").is_err()); // weights must sum to 1
    }
}
