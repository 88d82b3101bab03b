use std::process::Command;

use weakbound::cli::round_sig;
use weakbound::functionals::gill_bound;
use weakbound::optimize::{maximize_w, DEFAULT_GRID, DEFAULT_REFINE_TOL};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weakbound"))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn table1_csv_round_trips() {
    let path = tmp("table1.csv");
    let status = bin().args(["table1", "--precision", "6", "--out"]).arg(&path).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["m", "b", "d", "t0", "w", "gill"]);
    let rows: Vec<Vec<f64>> =
        reader.records().map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let m = row[0] as u32;
        let opt = maximize_w(m, DEFAULT_GRID, DEFAULT_REFINE_TOL).unwrap();
        assert_eq!(row[1], round_sig(opt.b, 6));
        assert_eq!(row[4], round_sig(opt.value, 6));
        assert_eq!(row[5], round_sig(gill_bound(m as f64), 6));
    }
}

#[test]
fn curves_rows_are_sandwiched() {
    let out = bin().args(["curves", "--m", "2", "--samples", "100"]).output().unwrap();
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let mut n = 0;
    for rec in reader.records() {
        let v: Vec<f64> = rec.unwrap().iter().map(|x| x.parse().unwrap()).collect();
        assert!(v[1] <= v[2] && v[2] <= v[3], "{v:?}");
        n += 1;
    }
    assert_eq!(n, 100);
}

#[test]
fn asymptotic_json_fields() {
    let out = bin().args(["asymptotic", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let x = v["x_infinity"].as_f64().unwrap();
    assert!((x - 0.54807758).abs() < 1e-7);
    assert!(v["sample_value"].as_f64().unwrap() >= 1.37);
    assert!((v["bound"].as_f64().unwrap() - 1.0 / (x.exp() - 1.0)).abs() < 1e-7);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(bin().args(["verify", "--suites", "nonsense"]).output().unwrap().status.code(), Some(2));
    assert_eq!(
        bin().args(["verify", "--suites", "bound134", "--m-range", "1..200"]).output().unwrap().status.code(),
        Some(0)
    );
    assert_eq!(bin().args(["verify", "--m-range", "7"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["table1", "--format", "xml"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn verify_json_is_reproducible() {
    let run =
        || bin().args(["verify", "--suites", "oracle,scaling", "--seed", "11", "--format", "json"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let reports: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    for r in reports.as_array().unwrap() {
        assert_eq!(r["seed"], 11);
        assert_eq!(r["status"], "pass");
        assert!(r["details"].as_array().is_some_and(|d| !d.is_empty()));
    }
}
