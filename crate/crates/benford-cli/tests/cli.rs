use std::io::Write;

use assert_cmd::Command;
use predicates::prelude::*;

fn benford() -> Command {
    Command::cargo_bin("benford").unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

// A small but decade-spanning dataset: squares of 1..120.
fn squares_csv() -> String {
    let mut s = String::from("value\n");
    for i in 1..=120u64 {
        s.push_str(&format!("{}\n", i * i));
    }
    s
}

#[test]
fn law_table_prints_all_nine_digits() {
    benford()
        .arg("law")
        .assert()
        .success()
        .stdout(predicate::str::contains("0.301030"))
        .stdout(predicate::str::contains("0.045757"));
}

#[test]
fn law_single_digit_and_tuple() {
    benford()
        .args(["law", "--digit", "1"])
        .assert()
        .success()
        .stdout(predicate::str::contains("0.301030"));
    benford()
        .args(["law", "--tuple", "3,1,4"])
        .assert()
        .success()
        .stdout(predicate::str::contains("0.001381"));
}

#[test]
fn law_rejects_out_of_range_digit() {
    benford()
        .args(["law", "--digit", "0"])
        .assert()
        .failure()
        .code(1);
}

#[test]
fn unknown_flag_exits_with_usage_code() {
    benford()
        .args(["law", "--no-such-flag"])
        .assert()
        .failure()
        .code(1);
}

#[test]
fn help_and_version_exit_zero() {
    benford().arg("--help").assert().success();
    benford().arg("--version").assert().success();
}

#[test]
fn analyze_text_report_on_csv() {
    let f = write_temp(&squares_csv());
    benford()
        .args(["analyze", f.path().to_str().unwrap(), "--column", "value"])
        .assert()
        .success()
        .stdout(predicate::str::contains("n_used"))
        .stdout(predicate::str::contains("120"));
}

#[test]
fn analyze_json_is_byte_identical_across_runs() {
    let f = write_temp(&squares_csv());
    let run = || {
        benford()
            .args([
                "analyze",
                f.path().to_str().unwrap(),
                "--output",
                "json",
                "--digit-pairs",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let parsed: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(parsed["n_used"], 120);
    assert_eq!(parsed["digit_pair_table"].as_array().unwrap().len(), 90);
}

#[test]
fn analyze_accepts_large_integers_and_negatives() {
    // 120 digits, far beyond f64 range; significand is 1.00... so it
    // lands in the digit-1 bin. Negatives fold by absolute value.
    let big = format!("1{}", "0".repeat(119));
    let mut data = format!("x\n{big}\n-200\n-3.5e-40\n");
    for i in 1..=60u64 {
        data.push_str(&format!("{}\n", i * i));
    }
    let f = write_temp(&data);
    benford()
        .args([
            "analyze",
            f.path().to_str().unwrap(),
            "--output",
            "json",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"n_used\":63"))
        .stdout(predicate::str::contains("\"n_negative_used\":2"));
}

#[test]
fn analyze_rejects_dirty_data_without_lenient() {
    let mut data = squares_csv();
    for _ in 0..20 {
        data.push_str("not-a-number\n");
    }
    let f = write_temp(&data);
    benford()
        .args(["analyze", f.path().to_str().unwrap()])
        .assert()
        .failure()
        .code(2);
    benford()
        .args(["analyze", f.path().to_str().unwrap(), "--lenient"])
        .assert()
        .success();
}

#[test]
fn analyze_missing_file_is_a_data_error() {
    benford()
        .args(["analyze", "/nonexistent/input.csv"])
        .assert()
        .failure()
        .code(2);
}

#[test]
fn analyze_jsonl_field() {
    let mut data = String::new();
    for i in 1..=60u64 {
        data.push_str(&format!("{{\"amount\": {}}}\n", i * i * i));
    }
    let f = write_temp(&data);
    benford()
        .args([
            "analyze",
            f.path().to_str().unwrap(),
            "--format",
            "jsonl",
            "--field",
            "amount",
            "--output",
            "json",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains("\"n_used\":60"));
}

#[test]
fn classify_reports_verdict_and_rule() {
    benford()
        .args(["classify", "--spec", "power:2"])
        .assert()
        .success()
        .stdout(predicate::str::contains("Benford"));
    benford()
        .args(["classify", "--spec", "power:10^(1/2)"])
        .assert()
        .success()
        .stdout(predicate::str::contains("NotBenford"));
}

#[test]
fn classify_bad_spec_is_a_usage_error() {
    benford()
        .args(["classify", "--spec", "power:"])
        .assert()
        .failure()
        .code(1);
}

#[test]
fn generate_is_deterministic_and_respects_budget() {
    let run = || {
        benford()
            .args(["generate", "--spec", "fib", "--n", "500", "--output", "csv"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 501); // header + 500 rows
    assert!(text.starts_with("index,value"));

    benford()
        .args(["generate", "--spec", "fib", "--n", "10000001"])
        .assert()
        .failure()
        .code(3);
}

#[test]
fn generate_fracs_stay_in_unit_interval() {
    let out = benford()
        .args([
            "generate", "--spec", "power:3", "--n", "200", "--emit", "fracs", "--output", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.0..1.0).contains(&v), "{line}");
    }
}

#[test]
fn simulate_emits_csv_series_deterministically() {
    let args = [
        "simulate", "powers", "--rv", "uniform:0,1", "--samples", "20000", "--n", "6", "--seed",
        "9",
    ];
    let run = || benford().args(args).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "step,distance,samples,seed");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    // Raising a continuous variable to growing powers drives it toward
    // Benford: the last distance must undercut the first.
    let dist = |r: &str| r.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!(dist(rows[5]) < dist(rows[0]));
}

#[test]
fn simulate_budget_and_rv_errors() {
    benford()
        .args(["simulate", "powers", "--samples", "20000000"])
        .assert()
        .failure()
        .code(3);
    benford()
        .args(["simulate", "powers", "--rv", "uniform:5,1"])
        .assert()
        .failure()
        .code(1);
}

#[test]
fn invalid_thread_env_is_a_usage_error() {
    benford()
        .args(["law", "--digit", "1"])
        .env("BENFORD_THREADS", "zero")
        .assert()
        .failure()
        .code(1);
    benford()
        .args(["law", "--digit", "1"])
        .env("BENFORD_THREADS", "4")
        .assert()
        .success();
}

#[test]
fn demo_runs_clean() {
    benford()
        .arg("demo")
        .assert()
        .success()
        .stdout(predicate::str::contains("misconception"));
}
