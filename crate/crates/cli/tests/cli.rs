use std::process::{Command, Output};

use serde_json::Value;

fn rhaudit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhaudit")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(bytes: &[u8]) -> Vec<Value> {
    serde_json::from_slice(bytes).expect("json report")
}

#[test]
fn verify_race_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = rhaudit(&["verify", "--suite", "race", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let records = json(&std::fs::read(&out).unwrap());
    assert_eq!(records.len(), 25);
    for r in &records {
        for key in ["schemaVersion", "claimId", "paperEq", "inputs", "lhs", "rhs", "absResidual", "relResidual", "errorEstimate", "status", "wallTimeMs"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["claimId"], "rhfe.race");
        assert_eq!(r["status"], "CONFIRMED");
    }
}

#[test]
fn unattainable_tolerance_is_a_hard_failure() {
    assert_eq!(code(&rhaudit(&["verify", "--suite", "race", "--tol", "1e-30"])), 2);
}

#[test]
fn rhfe_prints_one_report() {
    let o = rhaudit(&["rhfe", "--re", "0.75", "--im", "-2", "--digits", "60"]);
    assert_eq!(code(&o), 0);
    let records = json(&o.stdout);
    assert_eq!(records.len(), 1);
    assert_eq!(records[0]["claimId"], "rhfe.functional_equation");
    assert_eq!(records[0]["paperEq"], "Eq (4.73)");
}

#[test]
fn strict_claims_exit_on_violation() {
    assert_eq!(code(&rhaudit(&["gram"])), 0);
    assert_eq!(code(&rhaudit(&["gram", "--strict-claims"])), 3);
}

#[test]
fn config_errors() {
    assert_eq!(code(&rhaudit(&["verify", "--tol", "3"])), 64);
    assert_eq!(code(&rhaudit(&["verify", "--bogus"])), 64);
    assert_eq!(code(&rhaudit(&["traces", "--digits", "16"])), 64);
    assert_eq!(code(&rhaudit(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "seed=1\nmystery=2\n").unwrap();
    assert_eq!(code(&rhaudit(&["cm", "--config", cfg.to_str().unwrap()])), 64);
}

#[test]
fn io_error_exit() {
    assert_eq!(code(&rhaudit(&["verify", "--suite", "theta", "--out", "/nonexistent-dir/x.json"])), 4);
}

#[test]
fn csv_has_header_and_rows() {
    let o = rhaudit(&["verify", "--suite", "theta", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[..3], ["schemaVersion", "claimId", "paperEq"]);
    assert_eq!(rdr.records().count(), 20);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# point\nre = 0.6\nim = -3\ndigits = 40\nformat = csv\n").unwrap();
    let o = rhaudit(&["rhfe", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r = &json(&o.stdout)[0];
    assert_eq!(r["inputs"]["s"]["re"], 0.6);
    assert_eq!(r["inputs"]["digits"], 40);
}

#[test]
fn ledger_is_byte_identical_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(code(&rhaudit(&["ledger", "--seed", "5", "--no-timing", "--out", p.to_str().unwrap()])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let records = json(&std::fs::read(&a).unwrap());
    assert!(records.iter().all(|r| r["paperEq"] != "unlisted"));
}
