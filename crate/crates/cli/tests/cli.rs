use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn essum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_essum")).args(args).output().expect("binary runs")
}

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "scn"))
        .collect();
    files.sort();
    files
}

fn scenario(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".scn").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn minimal_scenario_reports_json() {
    let f = scenario("operator A = diag seq mod 1 { strand 0: 1*j^-1 }\ncheck single-range A\n");
    let out = essum(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    let r = &v["results"][0];
    assert_eq!(r["verdict"], "NotClosed");
    assert_eq!(r["certificate"]["type"], "witness_strand");
    assert_eq!(r["certificate"]["strand"], 0);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["check", "inputs", "verdict", "status", "certificate", "tolerances", "seed", "timing"]);
}

#[test]
fn report_json_round_trips() {
    let f = scenario("operator A = diag seq mod 2 { strand 0: 1; strand 1: -1/2*j^-1 }\ncheck closedness A\ncheck converge A sizes=20,40\n");
    let out = essum(&["analyze", f.path().to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn empty_scenario_echoes_settings() {
    let f = scenario("# nothing to do\nset seed 3\n");
    let out = essum(&["analyze", f.path().to_str().unwrap(), "--trunc-size", "64"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"], Value::Array(vec![]));
    assert_eq!(v["settings"]["seed"], 3);
    assert_eq!(v["settings"]["trunc"], 64);
}

#[test]
fn parse_errors_exit_one_with_position() {
    let f = scenario("operator A = diag 1\ncheck main A B\n");
    let out = essum(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 14"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn refusals_are_recorded_and_exit_two() {
    let f = scenario("operator A = diag 1\noperator B = diag 1 - j^-1\ncheck theorem-a A B\ncheck single-range B\n");
    let out = essum(&["analyze", f.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "check,label-args,verdict,key-certificate-scalar");
    assert_eq!(lines[1], "theorem-a,A B,Refused,hypothesis_violation");
    assert_eq!(lines[2], "single-range,B,Closed,1/2");
}

#[test]
fn seed_flag_overrides_set_line() {
    let f = scenario("set seed 5\nmatrix M = [[1, 0], [0, 2]]\ncheck coercivity M samples=10\n");
    let path = f.path().to_str().unwrap();
    let a: Value = serde_json::from_slice(&essum(&["analyze", path]).stdout).unwrap();
    let b: Value = serde_json::from_slice(&essum(&["analyze", path, "--seed", "6"]).stdout).unwrap();
    assert_eq!(a["settings"]["seed"], 5);
    assert_eq!(b["settings"]["seed"], 6);
    assert_ne!(a["results"][0]["seed"], b["results"][0]["seed"]);
}

#[test]
fn out_flag_writes_file() {
    let f = scenario("operator A = diag 1\ncheck closedness A\n");
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.csv");
    let out = essum(&["analyze", f.path().to_str().unwrap(), "--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(target).unwrap().starts_with("check,"));
}

#[test]
fn corpus_is_canonical_fixed_point() {
    let files = corpus();
    assert_eq!(files.len(), 20);
    for f in files {
        let once = essum(&["analyze", f.to_str().unwrap(), "--canonical"]);
        assert_eq!(once.status.code(), Some(0), "{}", f.display());
        let tmp = scenario(std::str::from_utf8(&once.stdout).unwrap());
        let twice = essum(&["analyze", tmp.path().to_str().unwrap(), "--canonical"]);
        assert_eq!(once.stdout, twice.stdout, "{}", f.display());
    }
}

#[test]
fn serial_and_parallel_reports_are_identical() {
    for f in corpus() {
        let path = f.to_str().unwrap();
        let serial = essum(&["analyze", path, "--jobs", "1"]);
        let parallel = essum(&["analyze", path, "--jobs", "8"]);
        assert_eq!(serial.stdout, parallel.stdout, "{path}");
        assert_eq!(serial.status.code(), parallel.status.code());
    }
}

#[test]
fn selftest_passes() {
    let out = essum(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8(out.stdout).unwrap().lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn report_emits_lab_rows() {
    let f = scenario("operator T = diag seq mod 2 { strand 0: 1 + 1*j^-1; strand 1: -1 }\ncheck main T\ncheck converge T sizes=50,100\n");
    let out = essum(&["report", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,size,cluster_center,cluster_count,hausdorff"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 5 && r[0] == "T"));
    let total_at_100: usize = rows.iter().filter(|r| r[1] == "100").map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert_eq!(total_at_100, 100);
}
