//! End-to-end checks of the command-line interface: exit codes, file
//! outputs, and determinism of the CSV contract.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boson-gcs"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn validate_passes_with_exit_zero() {
    let out = run(&["validate", "--seed", "3"]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("permanent-threeway"));
    assert!(text.contains("purity-closed-form"));
    assert!(!text.contains("FAILED"));
}

#[test]
fn validate_fault_injection_exits_two() {
    let out = run(&["validate", "--seed", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAILED"));
}

#[test]
fn bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    write(&cfg, r#"{"particles": 3, "nonsense-key": true}"#);
    let out = run(&["page-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("nonsense-key"), "{err}");
    assert!(err.contains("line"), "no position info: {err}");
}

#[test]
fn missing_config_file_exits_one() {
    let out = run(&["buildup", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn page_curve_writes_deterministic_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(
        &cfg,
        r#"{"experiment":"page-curve","particles":2,"modes":8,"realizations":3,"seed":5}"#,
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (path, threads) in [(&out_a, "1"), (&out_b, "3")] {
        let out = run(&[
            "page-curve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
            "--threads",
            threads,
            "--json",
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "CSV differs across thread counts");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("experiment,S,M,M_L,alpha,t,"));
    assert_eq!(text.lines().count(), 1 + 9);

    let mirror = std::fs::read_to_string(dir.path().join("a.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&mirror).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 9);
}

#[test]
fn config_experiment_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, r#"{"experiment":"buildup","particles":2,"modes":6}"#);
    let out = run(&["page-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn permanent_subcommand_reports_three_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    // Hong-Ou-Mandel beam splitter: permanent 0
    let s = std::f64::consts::FRAC_1_SQRT_2;
    write(
        &path,
        &format!(
            r#"{{"dim":2,"entries":[[{s},0],[{s},0],[{s},0],[{x},0]]}}"#,
            x = -s
        ),
    );
    let out = run(&["permanent", "--matrix", path.to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["naive", "ryser", "glynn"] {
        assert!(text.contains(name), "missing {name}: {text}");
    }
    for line in text.lines().skip(1) {
        let mantissa: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!(mantissa.abs() <= 1e-12, "nonzero permanent: {line}");
    }
}

#[test]
fn permanent_rejects_malformed_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    write(&path, r#"{"dim":2,"entries":[[1,0]]}"#);
    let out = run(&["permanent", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_dump_writes_ensemble_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ens.json");
    let out = run(&["validate", "--seed", "3", "--dump", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["particles"], 3);
    assert_eq!(parsed["modes"], 5);
    assert_eq!(parsed["amplitudes"].as_array().unwrap().len(), 4);
}
