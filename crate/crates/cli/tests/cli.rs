use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn clarklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clarklab")).args(args).output().expect("binary runs")
}

fn result_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).expect("JSON on stdout");
    assert_eq!(doc["meta"]["config_sha256"].as_str().map(str::len), Some(64));
    doc["result"].clone()
}

fn error_record(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().rev().find(|l| l.starts_with('{')).expect("JSON error record");
    serde_json::from_str(line).unwrap()
}

#[test]
fn clark_report_of_identity() {
    let r = result_of(&clarklab(&["clark-report", "--symbol", "identity", "--alpha", "1"]));
    assert!((r["total_mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let atoms = r["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0]["mass"].as_f64().unwrap() - 1.0).abs() < 1e-2);
    let angle = atoms[0]["location"].as_f64().unwrap();
    assert!(angle.min(std::f64::consts::TAU - angle) < 1e-6);
}

#[test]
fn profile_at_zero() {
    let r = result_of(&clarklab(&["profile", "--t", "0", "--n", "16", "--alpha-grid", "16"]));
    let row = &r["rows"][0];
    assert_eq!(row["t"].as_f64(), Some(0.0));
    assert!(row["estimate"].as_f64().unwrap().abs() < 1e-3);
    assert_eq!(row["reference"].as_f64(), Some(0.0));
}

#[test]
fn kernel_limit_closed_form() {
    let r = result_of(&clarklab(&["kernel-limit", "--a", "1", "--b", "1", "--delta", "1", "--lambda", "2"]));
    assert!((r["value"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    let numeric = clarklab(&[
        "kernel-limit",
        "--a",
        "1",
        "--b",
        "1",
        "--delta",
        "1",
        "--lambda",
        "2",
        "--kappa",
        "3",
        "--symbol",
        "identity",
        "--r",
        "1e-3",
    ]);
    let r = result_of(&numeric);
    assert!((r["numeric"].as_f64().unwrap() - 0.25).abs() < 0.02 * 0.25);
}

#[test]
fn maccluer_bound_for_identity_and_square() {
    let r = result_of(&clarklab(&["maccluer", "--phi", "identity", "--psi", "z^2", "--n", "32"]));
    assert!((r["bound"]["bound"].as_f64().unwrap() - 1.0).abs() < 1e-2);
    assert!(r["difference_norm"].as_f64().unwrap() >= 2f64.sqrt() - 1e-9);
}

#[test]
fn csv_outputs_are_deterministic_and_stamped() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = clarklab(&[
            "spectrum",
            "--symbol",
            "blaschke:0.5,0.2",
            "--n",
            "24",
            "--matrix",
            "--format",
            "both",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out_dir
    };
    let (a, b) = (run("a"), run("b"));
    for name in ["spectrum.csv", "matrix.csv", "spectrum.json"] {
        let (x, y) = (fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
        assert_eq!(x, y, "{name} differs between runs");
    }
    let csv = fs::read_to_string(a.join("spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# clarklab-cli ") && header.contains("config_sha256="), "{header}");
    assert_eq!(lines.next(), Some("k,sigma"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn config_hash_tracks_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let hash = |path: &Path| {
        let out = clarklab(&[
            "kernel-limit",
            "--a",
            "1",
            "--b",
            "1",
            "--delta",
            "1",
            "--lambda",
            "2",
            "--config",
            path.to_str().unwrap(),
        ]);
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        doc["meta"]["config_sha256"].as_str().unwrap().to_string()
    };
    fs::write(&cfg, r#"{"t_grid": [0, 1]}"#).unwrap();
    let first = hash(&cfg);
    assert_eq!(first, hash(&cfg));
    fs::write(&cfg, r#"{"t_grid": [0, 1], "n": 64}"#).unwrap();
    assert_ne!(first, hash(&cfg));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = clarklab(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"]["kind"], "usage");

    let out = clarklab(&["profile", "--t", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"]["kind"], "domain");

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    fs::write(&empty, "").unwrap();
    let out = clarklab(&["profile", "--config", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let record = error_record(&out);
    assert_eq!(record["error"]["kind"], "config");
    assert!(record["error"]["message"].as_str().unwrap().contains("line 1"));

    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, "{\"t_grid\": [0, 1],\n \"typo\": 3}").unwrap();
    let out = clarklab(&["profile", "--config", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(error_record(&out)["error"]["message"].as_str().unwrap().contains("line 2"));

    let out = clarklab(&["spectrum", "--symbol", "wobble"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"]["kind"], "invalid_parameter");
}

#[test]
fn numerical_failures_exit_with_three() {
    let out = clarklab(&["kernel-limit", "--a", "-1", "--b", "1", "--delta", "1", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let record = error_record(&out);
    assert_eq!(record["error"]["kind"], "invalid_parameter");
    assert_eq!(record["error"]["exit_code"], 3);
}

#[test]
fn csv_on_stdout() {
    let out = clarklab(&["spectrum", "--symbol", "z^2", "--n", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1], "k,sigma");
    assert_eq!(lines.len(), 6);
    let both = clarklab(&["spectrum", "--symbol", "z^2", "--n", "4", "--format", "both"]);
    assert_eq!(both.status.code(), Some(2));
}
