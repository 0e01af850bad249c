use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_couette-mhd"))
}

fn exec(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn small_ideal() -> Value {
    json!({
        "version": 1,
        "experiment": "nonlinear_ideal",
        "grid": {"nx": 16, "ny": 16, "ly": 1.0},
        "evolution": {"alpha": 1.0, "nu": 0.0, "kappa": 0.0, "nonlinear": true,
                      "symbol": "quartic_plus", "dt": 0.02, "t_end": 1.0, "sample_dt": 0.25}
    })
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn audit_with_small_density_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.json", &json!({
        "version": 1, "experiment": "weights_audit",
        "audit": {"eta_max": 1000.0, "density": 50, "seed": 3}
    }));
    let out = dir.path().join("audit");
    let o = exec(&["audit", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("hard_checks_pass=true"));
    assert!(out.join("weights_audit.csv").exists());
}

#[test]
fn validate_reports_good_and_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.json", &small_ideal());
    let o = exec(&["validate", "--config", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok:"));

    let mut bad = small_ideal();
    bad["evolution"]["nu"] = json!(0.1);
    let bad = write_config(dir.path(), "bad.json", &bad);
    assert_eq!(exec(&["validate", "--config", &bad]).status.code(), Some(1));
    let missing = dir.path().join("nope.json");
    assert_eq!(exec(&["validate", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn runs_are_reproducible_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &small_ideal());
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["run", "--config", &cfg, "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = exec(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a", &[]);
    let b = run("b", &[]);
    let c = run("c", &["--seed", "2"]);
    for f in ["diagnostics.csv", "summary.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    assert_ne!(std::fs::read(a.join("diagnostics.csv")).unwrap(), std::fs::read(c.join("diagnostics.csv")).unwrap());

    let csv = std::fs::read_to_string(a.join("diagnostics.csv")).unwrap();
    assert!(csv.starts_with("# config_sha256: "));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 5);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "nonlinear_ideal");
    assert_eq!(summary["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn snapshots_roundtrip_and_nan_data_aborts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &small_ideal());
    let out = dir.path().join("run");
    let o = exec(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--snapshots", "2"]);
    assert!(o.status.success());
    let mut snaps: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with("snapshot_"))
        .collect();
    snaps.sort();
    assert_eq!(snaps.len(), 2);

    let mut restart = small_ideal();
    restart["initial"] = json!({"kind": "file", "path": snaps[0].to_str().unwrap()});
    let rcfg = write_config(dir.path(), "restart.json", &restart);
    let o = exec(&["run", "--config", &rcfg, "--out", dir.path().join("restart").to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    // poison the first coefficient line
    let text = std::fs::read_to_string(&snaps[0]).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first = lines.iter().position(|l| !l.starts_with('#') && !l.starts_with("field")).unwrap();
    let mut cols: Vec<&str> = lines[first].split(',').collect();
    cols[3] = "NaN";
    lines[first] = cols.join(",");
    let poisoned = dir.path().join("nan.txt");
    std::fs::write(&poisoned, lines.join("\n")).unwrap();
    restart["initial"] = json!({"kind": "file", "path": poisoned.to_str().unwrap()});
    let ncfg = write_config(dir.path(), "nan.json", &restart);
    let o = exec(&["run", "--config", &ncfg, "--out", dir.path().join("nan").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn resonance_chain_run_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "r.json", &json!({
        "version": 1, "experiment": "resonance_chain", "chain": {"c0": 0.5, "etas": [100.0, 400.0]}
    }));
    let out = dir.path().join("chain");
    let o = exec(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("resonance_chain.csv")).unwrap();
    assert!(csv.contains("eta,c0,k,step_amplification,cumulative_log_growth"));
    // k_start = floor(sqrt(c0 eta)) rows per eta
    assert_eq!(data_rows(&csv).len(), 7 + 14);
}
