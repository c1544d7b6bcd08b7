use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn loqc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loqc"))
        .args(args)
        .current_dir(dir)
        .env_remove("LOQC_CONFIG")
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn run_cz16_reports_noisy_success() {
    let dir = tempfile::tempdir().unwrap();
    let out = loqc(dir.path(), &["run", "cz16", "--input", "11", "--l", "0.1", "--g", "0.1", "--out", "cz.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path(), "cz.json");
    assert!((f(&r, "p_s") - 0.035).abs() < 0.002);
    assert!((f(&r, "ideal_probability") - 0.0625).abs() < 1e-12);
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, r);
    let table = r["outcome_table_path"].as_str().unwrap();
    let csv = std::fs::read_to_string(dir.path().join(table)).unwrap();
    assert!(csv.starts_with("pattern,probability,collapsed_state\n"));
}

#[test]
fn run_ns_and_teleport_ideal() {
    let dir = tempfile::tempdir().unwrap();
    assert!(loqc(dir.path(), &["run", "ns", "--input", "2", "--l", "0", "--g", "0", "--out", "ns.json"]).status.success());
    let r = report(dir.path(), "ns.json");
    assert!((f(&r, "p_s") - 0.25).abs() < 1e-12);
    assert_eq!(f(&r, "p_f"), 0.0);
    assert!(loqc(dir.path(), &["run", "--protocol", "teleportn", "--n", "1", "--out", "t.json"]).status.success());
    assert!((f(&report(dir.path(), "t.json"), "p_s") - 0.5).abs() < 1e-12);
}

#[test]
fn run_cz4_reports_stages() {
    let dir = tempfile::tempdir().unwrap();
    let out = loqc(dir.path(), &["run", "cz4", "--l", "0.1", "--g", "0.1", "--out", "c.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path(), "c.json");
    assert!((f(&r, "p_s") - 0.0048).abs() < 0.0002);
    assert!((f(&r, "p_f") - 0.58).abs() < 0.02);
    assert!((f(&r["stages"]["preparation"], "p_f") - 0.42).abs() < 0.02);
    assert!(dir.path().join("c.preparation.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(loqc(dir.path(), &["run", "bogus"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["run", "ns", "--l", "1.5"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["run", "cz16", "--input", "1"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["run", "ns", "--protocol", "cz16"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["run", "ns", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["sweep", "nonsense"]).status.code(), Some(2));
    assert_eq!(loqc(dir.path(), &["run", "ns", "--out", "missing/dir/r.json"]).status.code(), Some(3));
    assert_eq!(loqc(dir.path(), &["sweep", "ns", "--l", "0", "--g", "0", "--out", "missing/s.csv"]).status.code(), Some(3));
    assert_eq!(loqc(dir.path(), &["threshold", "0.9999", "--n-max", "100"]).status.code(), Some(4));
    assert_eq!(loqc(dir.path(), &["threshold", "1.5"]).status.code(), Some(2));
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "cz16", "--l", "0:0.2:5", "--g", "0,0.1", "--out", "a.csv", "--threads", "3"];
    assert!(loqc(dir.path(), &args).status.success());
    let mut again = args;
    again[7] = "b.csv";
    again[9] = "1";
    assert!(loqc(dir.path(), &again).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());

    let mut rdr = csv::Reader::from_reader(a.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["l", "g", "p_s", "p_d", "p_f"]);
    let rows: Vec<Vec<f64>> = rdr.records().map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 10);
    assert_eq!((rows[0][0], rows[0][1]), (0.0, 0.0));
    assert_eq!((rows[1][0], rows[1][1]), (0.0, 0.1));
    assert_eq!((rows[2][0], rows[2][1]), (0.05, 0.0));
    assert!((rows[0][2] - 0.0625).abs() < 1e-12);
}

#[test]
fn closed_form_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    assert!(loqc(dir.path(), &["sweep", "teleport-nc", "--l", "1e-5:0.2:10", "--log", "--out", "nc.csv"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("nc.csv")).unwrap();
    assert!(text.starts_with("l,n_c,p_s_max,p_f_at_nc,converged\n"));
    assert_eq!(text.lines().count(), 11);

    assert!(loqc(dir.path(), &["sweep", "pf-vs-n", "--l", "0.01", "--out", "pf.csv"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("pf.csv")).unwrap();
    assert!(text.starts_with("l,n,p_s,p_d,p_f\n"));
    assert!(text.lines().count() > 5);

    assert!(loqc(dir.path(), &["sweep", "pf-vs-n", "--mode", "cz", "--l", "0.1", "--out", "cz.csv"]).status.success());
    let text = std::fs::read_to_string(dir.path().join("cz.csv")).unwrap();
    assert_eq!(text.lines().count(), 5, "n_c = 4 at l = 0.1 in cz mode");
}

#[test]
fn threshold_queries() {
    let dir = tempfile::tempdir().unwrap();
    let out = loqc(dir.path(), &["threshold", "--target", "0.9", "--mode", "teleport", "--out", "t.json"]);
    assert!(out.status.success());
    let r = report(dir.path(), "t.json");
    assert!((f(&r, "l_required") - 0.0055).abs() < 0.2 * 0.0055);
    assert!((r["n_required"].as_u64().unwrap() as i64 - 19).abs() <= 2);
    let out = loqc(dir.path(), &["threshold", "0.99", "--mode", "cz"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((f(&r, "l_required") - 0.000013).abs() < 0.2 * 0.000013);
    assert!((r["n_required"].as_u64().unwrap() as i64 - 392).abs() <= 2);
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"protocol": "ns", "input": "1", "l": 0.1, "g": 0.0, "out": "from-config.json"}"#).unwrap();
    assert!(loqc(dir.path(), &["run", "--config", "cfg.json"]).status.success());
    let r = report(dir.path(), "from-config.json");
    assert_eq!(r["input"], "1");
    assert_eq!(f(&r, "l"), 0.1);
    assert!(loqc(dir.path(), &["run", "--config", "cfg.json", "--l", "0.2", "--out", "flag.json"]).status.success());
    assert_eq!(f(&report(dir.path(), "flag.json"), "l"), 0.2);

    let env = Command::new(env!("CARGO_BIN_EXE_loqc"))
        .args(["run", "--out", "env.json"])
        .current_dir(dir.path())
        .env("LOQC_CONFIG", dir.path().join("cfg.json"))
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(report(dir.path(), "env.json")["protocol"], "ns");

    std::fs::write(dir.path().join("bad.json"), r#"{"loss": 0.1}"#).unwrap();
    assert_eq!(loqc(dir.path(), &["run", "ns", "--config", "bad.json"]).status.code(), Some(2));
}

#[test]
fn verbose_prints_mode_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = loqc(dir.path(), &["run", "czn", "--n", "1", "--verbose", "--out", "r.json"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mode  label"));
    assert!(err.contains("q1"));
    assert!(err.lines().any(|l| l.starts_with("4 ") && l.contains("ancilla, detected")));
}
