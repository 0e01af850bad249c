//! Runs one configured experiment and writes its artifacts.
//!
//! Artifacts are deterministic: no timestamps, and every file carries the
//! config hash (CSV comment header, JSON field).

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{Experiment, ExperimentConfig, InitialData};
use crate::diagnostics::{
    gevrey_norm_state, growth_fit, nl_partition_check, BootstrapMonitor, DiagnosticsRecord,
};
use crate::dynamics::{linear_mode_propagate, norm_inflation_experiment, DynamicsConfig, ModeParams, Solver};
use crate::error::{Error, Result};
use crate::initial::{from_snapshot, gevrey_random, single_mode};
use crate::ode::Tolerance;
use crate::resonance::{chain_rows, chain_total_growth, ChainConfig, ChainRow};
use crate::spectral::{read_snapshot, write_snapshot_annotated, Grid};
use crate::unknowns::{to_p, to_ptilde, MhdState};
use crate::weights::{audit, WeightsAt};

/// Overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub snapshots: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Value,
}

/// Apply the seed override; the result is what gets hashed and recorded.
/// The output location is not part of it, so runs are comparable across directories.
pub fn effective_config(cfg: &ExperimentConfig, opts: &RunOptions) -> ExperimentConfig {
    let mut c = cfg.clone();
    if let (Some(s), InitialData::GevreyRandom { seed, .. }) = (opts.seed, &mut c.initial) {
        *seed = s;
    }
    c
}

pub fn initial_state(cfg: &ExperimentConfig, grid: Grid) -> Result<MhdState> {
    let mut st = match &cfg.initial {
        InitialData::GevreyRandom { seed, eps, lambda1, s, n } => gevrey_random(grid, *seed, *eps, *lambda1, *s, *n)?,
        InitialData::SingleMode { k, j, amplitude, component } => single_mode(grid, *k, *j, *amplitude, *component)?,
        InitialData::File { path } => {
            let f = fs::File::open(path)?;
            let st = from_snapshot(&read_snapshot(BufReader::new(f))?)?;
            if st.grid() != grid {
                return Err(Error::Config(format!("snapshot {path} does not match the configured grid")));
            }
            st
        }
    };
    st.t = 0.0;
    Ok(st)
}

struct Collector {
    dir: PathBuf,
    header: Vec<String>,
    files: Vec<PathBuf>,
}

impl Collector {
    fn new(dir: &Path, cfg: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let compact = serde_json::to_string(cfg)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            header: vec![format!("config_sha256: {}", cfg.hash()), format!("config: {compact}")],
            files: Vec::new(),
        })
    }

    fn csv(&mut self, name: &str, columns: &str, rows: &[String]) -> Result<()> {
        let path = self.dir.join(name);
        let mut w = fs::File::create(&path)?;
        for h in &self.header {
            writeln!(w, "# {h}")?;
        }
        writeln!(w, "{columns}")?;
        for r in rows {
            writeln!(w, "{r}")?;
        }
        self.files.push(path);
        Ok(())
    }

    fn snapshot(&mut self, index: usize, st: &MhdState) -> Result<()> {
        let path = self.dir.join(format!("snapshot_{index:03}.txt"));
        let mut w = fs::File::create(&path)?;
        let fields = [("v1", &st.v[0]), ("v2", &st.v[1]), ("b1", &st.b[0]), ("b2", &st.b[1])];
        write_snapshot_annotated(&mut w, st.t, &fields, &self.header)?;
        self.files.push(path);
        Ok(())
    }

    fn summary(&mut self, cfg: &ExperimentConfig, results: Value) -> Result<Value> {
        let v = json!({
            "config": cfg,
            "config_sha256": cfg.hash(),
            "experiment": cfg.experiment,
            "results": results,
        });
        let path = self.dir.join("summary.json");
        fs::write(&path, serde_json::to_string_pretty(&v)? + "\n")?;
        self.files.push(path);
        Ok(v)
    }
}

/// Sample times `sample_dt, 2 sample_dt, …, t_end`.
fn sample_times(cfg: &ExperimentConfig) -> Vec<f64> {
    let ev = &cfg.evolution;
    let n = (ev.t_end / ev.sample_dt).round().max(1.0) as usize;
    (1..=n).map(|i| ev.t_end * i as f64 / n as f64).collect()
}

fn snapshot_indices(n_samples: usize, k: usize) -> Vec<usize> {
    if k == 0 || n_samples == 0 {
        return Vec::new();
    }
    (1..=k.min(n_samples)).map(|i| i * n_samples / k.min(n_samples) - 1).collect()
}

/// Execute the experiment described by `cfg` and write its artifacts.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let cfg = effective_config(cfg, opts);
    cfg.validate()?;
    let out_dir = match (&opts.out_dir, &cfg.output_dir) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => PathBuf::from("out"),
    };
    let mut col = Collector::new(&out_dir, &cfg)?;
    let results = match cfg.experiment {
        Experiment::WeightsAudit => run_audit(&cfg, &mut col)?,
        Experiment::ResonanceChain => run_chain(&cfg, &mut col)?,
        Experiment::NormInflation => run_inflation(&cfg, &mut col, opts.snapshots)?,
        Experiment::LinearModes => run_linear(&cfg, &mut col, opts.snapshots)?,
        Experiment::NlPartition => run_partition(&cfg, &mut col, opts.snapshots)?,
        Experiment::NonlinearIdeal | Experiment::Dissipative => run_stability(&cfg, &mut col, opts.snapshots)?,
    };
    let summary = col.summary(&cfg, results)?;
    Ok(RunOutcome { out_dir, files: col.files, summary })
}

fn run_audit(cfg: &ExperimentConfig, col: &mut Collector) -> Result<Value> {
    let rep = audit(&cfg.params, &cfg.audit)?;
    let csv = rep.to_csv();
    let mut lines = csv.lines();
    let columns = lines.next().unwrap_or_default().to_string();
    col.csv("weights_audit.csv", &columns, &lines.map(str::to_string).collect::<Vec<_>>())?;
    Ok(json!({
        "hard_checks_pass": rep.hard_checks_pass(),
        "constants_finite": rep.constants_finite(),
        "rows": rep.rows,
    }))
}

fn run_chain(cfg: &ExperimentConfig, col: &mut Collector) -> Result<Value> {
    let c = &cfg.chain;
    let mut rows = Vec::new();
    for &eta in &c.etas {
        rows.extend(chain_rows(&ChainConfig::new(c.c0, eta)?).iter().map(ChainRow::csv_row));
    }
    col.csv("resonance_chain.csv", ChainRow::HEADER, &rows)?;
    let sweep = chain_total_growth(c.c0, &c.etas)?;
    Ok(json!({
        "fitted_constant": sweep.constant(),
        "fit": sweep.fit,
        "log_growth": sweep.log_growth,
        "etas": sweep.etas,
    }))
}

fn abort_at(t: f64, e: Error) -> Error {
    match e {
        Error::NumericalAbort { reason, .. } => Error::NumericalAbort { t, reason: format!("{reason}; last good time {t}") },
        other => other,
    }
}

/// Length of the linear decay comparison in dissipative runs.
pub const DECAY_HORIZON: f64 = 10.0;

fn run_stability(cfg: &ExperimentConfig, col: &mut Collector, snapshots: usize) -> Result<Value> {
    let grid = cfg.grid.build()?;
    let solver = Solver::new(grid, cfg.evolution.dynamics())?;
    let st0 = initial_state(cfg, grid)?;
    let (p, ch) = (cfg.params, cfg.checks);
    let s = p.s;
    let hm1_in = st0.hm1_norm();
    let l2_in = st0.l2_norm();
    let eps_in = match cfg.initial {
        InitialData::GevreyRandom { eps, .. } => eps,
        _ => p.eps,
    };
    let mut boot = BootstrapMonitor::new(p, ch.cstar);
    let mut records = Vec::new();
    let push = |st: &MhdState, boot: &mut BootstrapMonitor| -> Result<DiagnosticsRecord> {
        let row = boot.push(&to_ptilde(st, cfg.evolution.alpha)?)?;
        Ok(DiagnosticsRecord {
            t: st.t,
            l2: st.l2_norm(),
            hm1: st.hm1_norm(),
            vorticity_current: st.vorticity_current_norm(),
            gevrey: gevrey_norm_state(st, ch.lambda2, s, p.n),
            energy: row.energy,
            energy_lo: row.energy_lo,
            lambda_integral: row.lambda_integral,
            q_integral: row.q_integral,
        })
    };
    records.push(push(&st0, &mut boot)?);
    let times = sample_times(cfg);
    let snaps = snapshot_indices(times.len(), snapshots);
    let mut cur = st0.clone();
    for (i, &t) in times.iter().enumerate() {
        let last = cur.t;
        cur = solver.advance_vb(&cur, t).map_err(|e| abort_at(last, e))?;
        records.push(push(&cur, &mut boot)?);
        if snaps.contains(&i) {
            col.snapshot(i, &cur)?;
        }
    }
    let rows: Vec<String> = records.iter().step_by(cfg.stride).map(DiagnosticsRecord::csv_row).collect();
    col.csv("diagnostics.csv", DiagnosticsRecord::HEADER, &rows)?;
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let wj: Vec<f64> = records.iter().map(|r| r.vorticity_current).collect();
    let gmax = records.iter().map(|r| r.gevrey).fold(0.0, f64::max);
    let lmin = records.iter().map(|r| r.l2).fold(f64::INFINITY, f64::min);
    let high = boot.rows.iter().map(|r| r.high_ratio).fold(0.0, f64::max);
    let low = boot.rows.iter().map(|r| r.low_ratio).fold(0.0, f64::max);
    let mut results = json!({
        "growth_fit": growth_fit(&ts, &wj, hm1_in),
        "hm1_gate": { "k": ch.gate_k, "hm1_in": hm1_in, "passed": hm1_in >= ch.gate_k * p.c0 * eps_in },
        "gevrey_max_over_eps": gmax / eps_in,
        "l2_min_over_initial": lmin / l2_in,
        "bootstrap_high_ratio_max": high,
        "bootstrap_low_ratio_max": low,
    });
    if cfg.experiment == Experiment::Dissipative {
        let horizon = cfg.evolution.t_end.min(DECAY_HORIZON);
        results["decay_horizon"] = json!(horizon);
        results["decay_rate_max_relative_error"] = json!(decay_check(grid, cfg.evolution.dynamics(), &st0, horizon)?);
    }
    Ok(results)
}

/// Largest relative mismatch between the per-mode dissipative decay of the
/// linear problem and `2ν ∫₀ᵀ Λ²` (needs `ν = κ`).
///
/// Steps are capped so that `ν Λ²max dt ≤ 0.2`, which keeps the RK4 damping
/// factor within about 1e-6 of the exact exponential per step.
pub fn decay_check(grid: Grid, cfg: DynamicsConfig, st0: &MhdState, t_end: f64) -> Result<f64> {
    let nu = cfg.nu;
    if nu != cfg.kappa || nu <= 0.0 {
        return Err(Error::Config("decay check needs nu = kappa > 0".into()));
    }
    let lmax = grid.max_retained_wavenumber(st0.t).max(grid.max_retained_wavenumber(t_end));
    let mut dcfg = cfg;
    dcfg.nonlinear = false;
    dcfg.dt = cfg.dt.min(0.2 / (nu * lmax * lmax));
    let icfg = DynamicsConfig { nu: 0.0, kappa: 0.0, ..dcfg };
    let diss = Solver::new(grid, dcfg)?.advance_vb(st0, t_end)?;
    let ideal = Solver::new(grid, icfg)?.advance_vb(st0, t_end)?;
    let (pd, pi) = (to_p(&diss), to_p(&ideal));
    let pmax = pi.p1.max_abs().max(pi.p2.max_abs());
    let t0 = st0.t;
    let mut worst = 0.0f64;
    for m in grid.modes().filter(|m| m.k != 0 && grid.is_retained(m)) {
        let i = m.idx;
        let a = pi.p1.data[i].norm_sqr() + pi.p2.data[i].norm_sqr();
        if a.sqrt() < 1e-6 * pmax {
            continue;
        }
        let d = pd.p1.data[i].norm_sqr() + pd.p2.data[i].norm_sqr();
        let (k, eta) = (m.k as f64, m.eta);
        // ∫ k² + (η − kt)² dt
        let integral = k * k * (t_end - t0) + ((eta - k * t0).powi(3) - (eta - k * t_end).powi(3)) / (3.0 * k);
        let want = 2.0 * nu * integral;
        let got = -(d / a).ln();
        worst = worst.max((got - want).abs() / want);
    }
    Ok(worst)
}

fn run_inflation(cfg: &ExperimentConfig, col: &mut Collector, snapshots: usize) -> Result<Value> {
    let grid = cfg.grid.build()?;
    let solver = Solver::new(grid, cfg.evolution.dynamics())?;
    let st0 = initial_state(cfg, grid)?;
    let samples = sample_times(cfg).len();
    let rep = norm_inflation_experiment(&solver, &to_ptilde(&st0, cfg.evolution.alpha)?, cfg.evolution.t_end, samples)?;
    let rows: Vec<String> = rep
        .rows
        .iter()
        .step_by(cfg.stride)
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.t, r.ptilde_l2, r.ptilde_hm1, r.linear_l2, r.linear_hm1, r.deviation, r.vorticity_current_over_t
            )
        })
        .collect();
    col.csv(
        "norm_inflation.csv",
        "t,ptilde_l2,ptilde_hm1,linear_l2,linear_hm1,deviation,vorticity_current_over_t",
        &rows,
    )?;
    if snapshots > 0 {
        let end = solver.advance_vb(&st0, cfg.evolution.t_end)?;
        col.snapshot(0, &end)?;
    }
    let (lo, hi) = rep.ratio_range();
    Ok(json!({
        "c1": rep.c1,
        "ratio_min": lo,
        "ratio_max": hi,
        "max_deviation": rep.max_deviation(),
    }))
}

fn run_linear(cfg: &ExperimentConfig, col: &mut Collector, snapshots: usize) -> Result<Value> {
    let grid = cfg.grid.build()?;
    let ev = cfg.evolution;
    let solver = Solver::new(grid, ev.dynamics())?;
    let st0 = initial_state(cfg, grid)?;
    let p0 = to_p(&st0);
    let times = sample_times(cfg);
    let snaps = snapshot_indices(times.len(), snapshots);
    let mut cur = st0.clone();
    let mut rows = Vec::new();
    let mut worst_all = 0.0f64;
    for (i, &t) in times.iter().enumerate() {
        let last = cur.t;
        cur = solver.advance_vb(&cur, t).map_err(|e| abort_at(last, e))?;
        let p = to_p(&cur);
        let pmax = p.p1.max_abs().max(p.p2.max_abs());
        let mut worst = 0.0f64;
        for m in grid.modes().filter(|m| m.k != 0 && grid.is_retained(m)) {
            let j = m.idx;
            let mp = ModeParams { k: m.k as f64, eta: m.eta, alpha: ev.alpha, nu: ev.nu, kappa: ev.kappa };
            let want = linear_mode_propagate(&mp, [p0.p1.data[j], p0.p2.data[j]], 0.0, t, Tolerance::default())?;
            let norm = |a: Complex64, b: Complex64| (a.norm_sqr() + b.norm_sqr()).sqrt();
            let w = norm(want[0], want[1]);
            if w <= 1e-6 * pmax {
                continue;
            }
            worst = worst.max(norm(p.p1.data[j] - want[0], p.p2.data[j] - want[1]) / w);
        }
        worst_all = worst_all.max(worst);
        rows.push(format!("{},{},{}", t, cur.l2_norm(), worst));
        if snaps.contains(&i) {
            col.snapshot(i, &cur)?;
        }
    }
    let rows: Vec<String> = rows.into_iter().step_by(cfg.stride).collect();
    col.csv("linear_modes.csv", "t,l2,max_mode_relative_error", &rows)?;
    Ok(json!({ "max_mode_relative_error": worst_all }))
}

fn run_partition(cfg: &ExperimentConfig, col: &mut Collector, snapshots: usize) -> Result<Value> {
    let grid = cfg.grid.build()?;
    let solver = Solver::new(grid, cfg.evolution.dynamics())?;
    let st0 = initial_state(cfg, grid)?;
    let times = sample_times(cfg);
    let snaps = snapshot_indices(times.len(), snapshots);
    let mut cur = st0;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (i, &t) in times.iter().enumerate() {
        let last = cur.t;
        cur = solver.advance_vb(&cur, t).map_err(|e| abort_at(last, e))?;
        let w = WeightsAt::new(cfg.params, t)?;
        let r = nl_partition_check(&cur, &w);
        worst = worst.max(r.relative_error);
        rows.push(format!(
            "{},{},{},{},{},{},{}",
            t, r.total, r.reaction, r.transport, r.remainder, r.average, r.relative_error
        ));
        if snaps.contains(&i) {
            col.snapshot(i, &cur)?;
        }
    }
    let rows: Vec<String> = rows.into_iter().step_by(cfg.stride).collect();
    col.csv("nl_partition.csv", "t,total,reaction,transport,remainder,average,relative_error", &rows)?;
    Ok(json!({ "max_relative_error": worst }))
}
