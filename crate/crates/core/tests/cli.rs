use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curnys")).args(args).output().expect("spawn curnys")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Vec<Value> {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&["--help"]), 0);
    for sub in ["cur", "nystrom", "lowerbound", "kernel"] {
        assert_eq!(code(&[sub, "--help"]), 0);
    }
}

#[test]
fn argument_errors_exit_one() {
    assert_eq!(code(&["cur", "--synthetic", "30x20", "--k", "3"]), 1);
    assert_eq!(code(&["cur", "--synthetic", "30x20", "--k", "3", "--a", "2", "--epsilon", "0.5"]), 1);
    assert_eq!(code(&["cur", "--synthetic", "30x20", "--k", "3", "--a", "2", "--method", "foo"]), 1);
    assert_eq!(code(&["cur", "--synthetic", "30x20", "--a", "2"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.mtx");
    assert_eq!(code(&["cur", "--input", missing.to_str().unwrap(), "--k", "1", "--a", "2"]), 2);

    let bad = dir.path().join("bad.mtx");
    let mut f = std::fs::File::create(&bad).unwrap();
    writeln!(f, "%%MatrixMarket matrix array real general\n2 2\n1\nx\n3\n4").unwrap();
    let out = run(&["cur", "--input", bad.to_str().unwrap(), "--k", "1", "--a", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn csv_output_is_deterministic() {
    let args = ["cur", "--synthetic", "40x30", "--k", "3", "--a", "2", "--repeats", "3", "--seed", "7", "--no-timing"];
    let first = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, run(&args).stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,variant,k,c,r,error_ratio,seconds,seed"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..5], &["adaptive", "cur", "3", "6", "12"]);
    assert!(row[5].parse::<f64>().unwrap() >= 1.0 - 1e-9);
    assert_eq!(row[7], "7");
}

#[test]
fn error_ratio_is_the_best_repeat() {
    let records = json(&[
        "nystrom", "--random-points", "40", "--sigma", "1", "--k", "3", "--a", "4", "--repeats", "4", "--out-format", "json",
        "--no-timing",
    ]);
    assert!(!records.is_empty());
    for rec in records {
        assert!(!rec["note"].as_str().unwrap_or("").starts_with("skipped"), "{rec}");
        let per: Vec<f64> = rec["per_repeat"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert_eq!(per.len(), 4);
        let min = per.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(rec["error_ratio"].as_f64().unwrap(), min);
    }
}

#[test]
fn lowerbound_measured_is_at_least_bound() {
    for extra in [&[][..], &["--blocks", "3"][..]] {
        let mut args = vec!["lowerbound", "--m", "60", "--alpha", "0.8", "--k", "3", "--a", "2", "--out-format", "json"];
        args.extend_from_slice(extra);
        for rec in json(&args) {
            let bound = rec["bound"].as_f64().unwrap();
            let measured = rec["measured"].as_f64().unwrap();
            assert!(measured >= bound - 1e-8, "{measured} < {bound}");
        }
    }
}

#[test]
fn kernel_has_unit_diagonal_and_out_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.csv");
    let out = run(&["kernel", "--random-points", "5", "--sigma", "0.7", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), 5);
        assert_eq!(row[i], 1.0);
        for (j, v) in row.iter().enumerate() {
            assert_eq!(*v, rows[j][i]);
            assert!(*v > 0.0 && *v <= 1.0);
        }
    }
}
