use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fkin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fkin"))
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn run(args: &[&str]) -> Output {
    fkin().args(args).output().expect("failed to start fkin")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn documented_examples_reproduce_their_checksums() {
    let mut seen = 0;
    for entry in fs::read_dir(examples()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let out = run(&["run", path.to_str().unwrap()]);
            assert!(
                out.status.success(),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn single_classical_term_is_exponential_decay() {
    let cfg = examples().join("kinetic_exponential.json");
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,value\n"));
    let t = column(&text, "t");
    let v = column(&text, "value");
    assert_eq!(t.len(), 20);
    for (t, v) in t.iter().zip(&v) {
        assert!((v - (-t).exp()).abs() < 1e-12, "t={t}: {v}");
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let cfg = examples().join("kinetic_three_term.json");
    let a = fkin()
        .args(["run", cfg.to_str().unwrap()])
        .env("FKIN_THREADS", "1")
        .output()
        .unwrap();
    let b = fkin()
        .args(["run", cfg.to_str().unwrap()])
        .env("FKIN_THREADS", "4")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("levy.csv");
    let cfg = examples().join("levy_half.json");
    let out = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(target).unwrap();
    let t = column(&text, "t");
    let v = column(&text, "value");
    for (t, v) in t.iter().zip(&v) {
        let exact = t.powf(-1.5) * (-0.25 / t).exp() / (2.0 * std::f64::consts::PI.sqrt());
        assert!((v / exact - 1.0).abs() < 1e-8);
    }
}

#[test]
fn malformed_json_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "bad.json", "{\"schema_version\": 1, \"mode\": ");
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    let record: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(record["error"], "ConfigError");
    assert!(out.stdout.is_empty());
}

#[test]
fn inconsistent_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        // wrong schema
        r#"{"schema_version": 7, "mode": "levy", "problem": {"rho": 0.5},
            "time_grid": {"start": 1, "stop": 2, "count": 2}}"#,
        // problem kind does not match the mode
        r#"{"schema_version": 1, "mode": "levy", "problem": {"alpha": 0.5, "dim": 1},
            "time_grid": {"start": 1, "stop": 2, "count": 2}}"#,
        // decreasing grid
        r#"{"schema_version": 1, "mode": "levy", "problem": {"rho": 0.5},
            "time_grid": {"start": 2, "stop": 1, "count": 3}}"#,
        // solver that does not fit the problem
        r#"{"schema_version": 1, "mode": "kinetic",
            "problem": {"terms": [{"a": 1, "nu": 0.4}, {"a": 1, "nu": 0.9}]},
            "time_grid": {"start": 1, "stop": 2, "count": 2}, "solver_selector": "theorem3"}"#,
    ];
    for (i, body) in cases.iter().enumerate() {
        let cfg = write_config(&dir, &format!("c{i}.json"), body);
        let out = run(&["run", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("ConfigError"));
    }
}

#[test]
fn series_cutoff_surfaces_as_solver_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "cut.json",
        r#"{"schema_version": 1, "mode": "kinetic",
            "problem": {"terms": [{"a": 1, "nu": 0.5}, {"a": 0.5, "nu": 0.75}, {"a": 0.3, "nu": 1}]},
            "time_grid": {"start": 1, "stop": 2, "count": 2},
            "truncation": {"l_max": 0}}"#,
    );
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let record: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(record["error"], "SolverError");
    assert!(record["message"].as_str().unwrap().contains("t = 1"));
}

#[test]
fn checksum_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "sum.json",
        r#"{"schema_version": 1, "mode": "levy", "problem": {"rho": 0.5},
            "time_grid": {"start": 1, "stop": 2, "count": 2},
            "expected_sha256": "0000"}"#,
    );
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
}

#[test]
fn verify_mode_reports_relative_errors() {
    let cfg = examples().join("verify_corollary22.json");
    let out = run(&["run", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let worst = column(&text, "rel_err_talbot")
        .into_iter()
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-6, "{worst}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("corollary2.2"));
}

#[test]
fn eval_ml_prints_a_round_trip_value() {
    let out = run(&[
        "eval-ml", "--beta", "1", "--gamma", "1", "--delta", "1", "--z", "-1",
    ]);
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((v - (-1f64).exp()).abs() < 1e-15);
    let out = run(&["eval-ml", "--beta", "-1", "--gamma", "1", "--z", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_subcommand_filters_and_detects_mutations() {
    let out = run(&["verify", "--filter", "gaussian"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("PASS"));

    let out = run(&["verify", "--filter", "triangle", "--flip-denominator"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let out = run(&["verify", "--filter", "nothing-matches"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_setting_is_a_config_error() {
    let out = fkin()
        .args(["eval-ml", "--beta", "1", "--gamma", "1", "--z", "0"])
        .env("FKIN_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
