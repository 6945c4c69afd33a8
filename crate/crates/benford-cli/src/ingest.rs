//! Dataset ingestion: CSV columns and JSON-lines fields to significands.
//!
//! Values are reduced to significands during parsing, so magnitudes far
//! outside the float range (exact big-integer sequences stored as digit
//! strings) are ingested without overflow: the significand depends only
//! on the mantissa digits.

use std::fs::File;
use std::io::{BufRead, BufReader};

use crate::{budget_err, data_err, usage_err, RunResult, MAX_BUDGET};

/// Parsed dataset, reduced to the significand sample plus fold counts.
pub struct Ingested {
    pub significands: Vec<f64>,
    pub n_zero: usize,
    pub n_negative: usize,
    pub n_bad: usize,
}

impl Ingested {
    pub fn rows_total(&self) -> usize {
        self.significands.len() + self.n_zero + self.n_bad
    }

    fn push(&mut self, cell: &str) {
        match parse_cell(cell) {
            Some(Cell::Zero) => self.n_zero += 1,
            Some(Cell::Nonzero { significand, negative }) => {
                if negative {
                    self.n_negative += 1;
                }
                self.significands.push(significand);
            }
            None => self.n_bad += 1,
        }
    }
}

enum Cell {
    Zero,
    Nonzero { significand: f64, negative: bool },
}

/// Strict numeric parsing: integers, decimals, and scientific notation.
/// Locale separators (commas, underscores, spaces) are rejected, not
/// guessed.
fn parse_cell(raw: &str) -> Option<Cell> {
    let s = raw.trim();
    if s.is_empty() {
        return None;
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    // mantissa [eE exponent]; exponent only shifts the decade, so it is
    // validated and otherwise ignored.
    let (mantissa, exponent) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (body, None),
    };
    if let Some(e) = exponent {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        if e.is_empty() || !e.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
    }
    let mut dot_seen = false;
    let mut digit_seen = false;
    for b in mantissa.bytes() {
        match b {
            b'.' if !dot_seen => dot_seen = true,
            b'0'..=b'9' => digit_seen = true,
            _ => return None,
        }
    }
    if !digit_seen {
        return None;
    }
    // Significant digits of the mantissa, leading zeros stripped.
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .skip_while(|&d| d == 0)
        .collect();
    if digits.is_empty() {
        return Some(Cell::Zero);
    }
    // First 15 significant digits pin the significand. A 15-digit
    // integer is exact in f64, so the quotient stays strictly below 10
    // (17 digits accumulated as a float sum can round up to exactly 10).
    let mut int = 0u64;
    let mut count = 0i32;
    for &d in digits.iter().take(15) {
        int = int * 10 + d as u64;
        count += 1;
    }
    let significand = int as f64 / 10f64.powi(count - 1);
    debug_assert!((1.0..10.0).contains(&significand));
    Some(Cell::Nonzero { significand, negative })
}

pub fn read_csv(path: &str, column: Option<&str>) -> RunResult<Ingested> {
    let file = File::open(path).map_err(|e| data_err(format!("cannot open {path}: {e}")))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| data_err(format!("bad CSV header: {e}")))?
        .clone();
    let col = match column {
        None => {
            if headers.len() != 1 {
                return Err(usage_err(
                    "CSV has multiple columns; pass --column NAME or --column INDEX",
                ));
            }
            0
        }
        Some(sel) => match headers.iter().position(|h| h == sel) {
            Some(i) => i,
            None => sel.parse::<usize>().ok().filter(|i| *i < headers.len()).ok_or_else(
                || usage_err(format!("column {sel:?} is neither a header name nor an index")),
            )?,
        },
    };
    let mut out = Ingested { significands: Vec::new(), n_zero: 0, n_negative: 0, n_bad: 0 };
    for (i, record) in reader.records().enumerate() {
        if i >= MAX_BUDGET {
            return Err(budget_err(format!("input exceeds {MAX_BUDGET} rows")));
        }
        let record = record.map_err(|e| data_err(format!("CSV parse error: {e}")))?;
        out.push(record.get(col).unwrap_or(""));
    }
    Ok(out)
}

pub fn read_jsonl(path: &str, field: &str) -> RunResult<Ingested> {
    let file = File::open(path).map_err(|e| data_err(format!("cannot open {path}: {e}")))?;
    let mut out = Ingested { significands: Vec::new(), n_zero: 0, n_negative: 0, n_bad: 0 };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        if i >= MAX_BUDGET {
            return Err(budget_err(format!("input exceeds {MAX_BUDGET} rows")));
        }
        let line = line.map_err(|e| data_err(format!("read error: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(_) => {
                out.n_bad += 1;
                continue;
            }
        };
        match value.get(field) {
            // Route numbers through the same strict string parser so
            // arbitrarily long integer literals keep exact significands.
            Some(serde_json::Value::Number(n)) => out.push(&n.to_string()),
            Some(serde_json::Value::String(s)) => out.push(s),
            _ => out.n_bad += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> f64 {
        match parse_cell(s) {
            Some(Cell::Nonzero { significand, .. }) => significand,
            other => panic!("{s:?} did not parse as nonzero: {}", other.is_some()),
        }
    }

    #[test]
    fn strict_number_forms() {
        assert!((sig("2019") - 2.019).abs() < 1e-15);
        assert!((sig("-20.19") - 2.019).abs() < 1e-15);
        assert!((sig("0.02019") - 2.019).abs() < 1e-15);
        assert!((sig("2.019e300") - 2.019).abs() < 1e-15);
        assert!((sig("2.019E-3000") - 2.019).abs() < 1e-15);
        assert!(matches!(parse_cell("0"), Some(Cell::Zero)));
        assert!(matches!(parse_cell("0.000"), Some(Cell::Zero)));
        assert!(matches!(parse_cell("0e5"), Some(Cell::Zero)));
    }

    #[test]
    fn long_integer_is_exact() {
        // 100 digits, far beyond f64 range when combined with e300.
        let long: String = "9".repeat(100);
        assert!((sig(&long) - 9.999999999999999).abs() < 1e-12);
    }

    #[test]
    fn rejects_locale_and_garbage() {
        for bad in ["1,234", "1_000", "12 34", "abc", "", ".", "-", "1.2.3", "1e", "1e+", "NaN"] {
            assert!(parse_cell(bad).is_none(), "{bad:?} should be rejected");
        }
    }
}
