use couette_mhd::config::{Experiment, ExperimentConfig, InitialData};
use couette_mhd::runner::{run, RunOptions};

fn small(e: Experiment) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(e);
    c.grid.nx = 16;
    c.grid.ny = 16;
    c.evolution.t_end = 1.0;
    c.evolution.sample_dt = 0.25;
    c
}

fn run_in(cfg: &ExperimentConfig) -> (tempfile::TempDir, serde_json::Value) {
    let dir = tempfile::tempdir().unwrap();
    let o = run(cfg, &RunOptions { out_dir: Some(dir.path().to_path_buf()), seed: None, snapshots: 1 }).unwrap();
    for f in &o.files {
        assert!(f.exists());
    }
    (dir, o.summary)
}

#[test]
fn linear_modes_track_the_mode_oracle() {
    let mut c = small(Experiment::LinearModes);
    c.evolution.nonlinear = false;
    let (dir, summary) = run_in(&c);
    assert!(dir.path().join("linear_modes.csv").exists());
    assert_eq!(summary["experiment"], "linear_modes");
}

#[test]
fn dissipative_run_decays() {
    let mut c = small(Experiment::Dissipative);
    c.evolution.nu = 0.5;
    c.evolution.kappa = 0.5;
    let (_dir, summary) = run_in(&c);
    let l2 = summary["results"]["l2_min_over_initial"].as_f64().unwrap();
    assert!(l2 < 1.0, "{summary}");
}

#[test]
fn inflation_and_partition_runs_complete() {
    let (dir, _) = run_in(&small(Experiment::NormInflation));
    assert!(dir.path().join("norm_inflation.csv").exists());
    let mut p = small(Experiment::NlPartition);
    p.initial = InitialData::GevreyRandom { seed: 3, eps: 0.1, lambda1: 1.0, s: 0.6, n: 5.0 };
    let (dir, _) = run_in(&p);
    assert!(dir.path().join("nl_partition.csv").exists());
}
