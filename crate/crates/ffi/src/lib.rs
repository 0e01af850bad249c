//! C interface to the couette-mhd solver.
//!
//! Every function returns a [`CmStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. After a failure, [`cm_last_error_message`] describes it.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use couette_mhd::config::ExperimentConfig;
use couette_mhd::dynamics::{DynamicsConfig, Solver, SymbolVariant};
use couette_mhd::initial::{gevrey_random, single_mode, Component};
use couette_mhd::resonance::{chain_log_growth, chain_step_amplification, ChainConfig};
use couette_mhd::runner::{run, RunOptions};
use couette_mhd::spectral::Grid;
use couette_mhd::unknowns::MhdState;
use couette_mhd::weights::{WeightParams, WeightsAt};
use couette_mhd::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalAbort = 3,
    Config = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CmStatus, msg: impl Into<String>) -> CmStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> CmStatus {
    let status = match e {
        Error::NumericalAbort { .. } | Error::ToleranceNotMet { .. } => CmStatus::NumericalAbort,
        Error::Config(_) | Error::Json(_) | Error::Parse(_) => CmStatus::Config,
        Error::Io(_) => CmStatus::Io,
        _ => CmStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Run `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), CmStatus>) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CmStatus::Internal, "panic in couette-mhd"),
    }
}

fn lift<T>(r: couette_mhd::Result<T>) -> Result<T, CmStatus> {
    r.map_err(from_error)
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, CmStatus> {
    p.as_ref().ok_or_else(|| fail(CmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn deref_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, CmStatus> {
    p.as_mut().ok_or_else(|| fail(CmStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write_out<T>(p: *mut T, v: T, name: &str) -> Result<(), CmStatus> {
    *deref_mut(p, name)? = v;
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, CmStatus> {
    if p.is_null() {
        return Err(fail(CmStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CmStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

/// Message for the most recent failure on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Simulation handle

/// Grid and evolution settings for a simulation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CmSimParams {
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
    pub alpha: f64,
    pub nu: f64,
    pub kappa: f64,
    pub nonlinear: bool,
    /// Largest RK4 step.
    pub dt: f64,
}

/// Norms of the current state.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CmNorms {
    pub t: f64,
    pub l2: f64,
    pub hm1: f64,
    pub vorticity_current: f64,
    pub max_divergence: f64,
}

/// Opaque solver plus state.
pub struct CmSimulation {
    grid: Grid,
    solver: Solver,
    state: MhdState,
}

/// Fill `out` with the default settings (64×64, α = 1, ideal, nonlinear).
///
/// # Safety
/// `out` must be null or point to writable memory for one `CmSimParams`.
#[no_mangle]
pub unsafe extern "C" fn cm_sim_params_default(out: *mut CmSimParams) -> CmStatus {
    guard(|| {
        let d = DynamicsConfig::default();
        let p = CmSimParams {
            nx: 64,
            ny: 64,
            ly: 1.0,
            alpha: d.alpha,
            nu: d.nu,
            kappa: d.kappa,
            nonlinear: d.nonlinear,
            dt: d.dt,
        };
        write_out(out, p, "out")
    })
}

/// Create a simulation with zero initial data at t = 0.
///
/// # Safety
/// `params` must be null or valid; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_new(params: *const CmSimParams, out: *mut *mut CmSimulation) -> CmStatus {
    guard(|| {
        let p = *deref(params, "params")?;
        let out = deref_mut(out, "out")?;
        let grid = lift(Grid::new(p.nx, p.ny, p.ly))?;
        let cfg = DynamicsConfig {
            alpha: p.alpha,
            nu: p.nu,
            kappa: p.kappa,
            nonlinear: p.nonlinear,
            symbol: SymbolVariant::QuarticPlus,
            dt: p.dt,
        };
        let solver = lift(Solver::new(grid, cfg))?;
        let sim = CmSimulation { grid, solver, state: MhdState::zeros(grid, 0.0) };
        *out = Box::into_raw(Box::new(sim));
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle from `cm_simulation_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_free(sim: *mut CmSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Replace the state by random Gevrey-class data with `‖(v,b)‖_{G^{lambda1}} = eps`
/// (`s = 0.6`, `N = 5`) and reset the time to 0.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_set_random(sim: *mut CmSimulation, seed: u64, eps: f64, lambda1: f64) -> CmStatus {
    guard(|| {
        let sim = deref_mut(sim, "sim")?;
        sim.state = lift(gevrey_random(sim.grid, seed, eps, lambda1, 0.6, 5.0))?;
        Ok(())
    })
}

/// Replace the state by a single real mode `±(k, j)` of the velocity
/// (`magnetic = false`) or magnetic field, and reset the time to 0.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_set_single_mode(
    sim: *mut CmSimulation,
    k: i64,
    j: i64,
    amplitude: f64,
    magnetic: bool,
) -> CmStatus {
    guard(|| {
        let sim = deref_mut(sim, "sim")?;
        let c = if magnetic { Component::Magnetic } else { Component::Velocity };
        sim.state = lift(single_mode(sim.grid, k, j, amplitude, c))?;
        Ok(())
    })
}

/// Advance the state to `t_end`. On a numerical abort the state is left unchanged.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_advance(sim: *mut CmSimulation, t_end: f64) -> CmStatus {
    guard(|| {
        let sim = deref_mut(sim, "sim")?;
        if !(t_end >= sim.state.t) || !t_end.is_finite() {
            return Err(fail(CmStatus::InvalidArgument, format!("t_end {t_end} is before t = {}", sim.state.t)));
        }
        sim.state = lift(sim.solver.advance_vb(&sim.state, t_end))?;
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_simulation_norms(sim: *const CmSimulation, out: *mut CmNorms) -> CmStatus {
    guard(|| {
        let s = &deref(sim, "sim")?.state;
        let n = CmNorms {
            t: s.t,
            l2: s.l2_norm(),
            hm1: s.hm1_norm(),
            vorticity_current: s.vorticity_current_norm(),
            max_divergence: s.max_divergence(),
        };
        write_out(out, n, "out")
    })
}

// ---------------------------------------------------------------------------
// Weights handle

/// Parameters of the time-dependent Fourier multiplier.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CmWeightParams {
    pub rho: f64,
    pub lambda0: f64,
    pub s: f64,
    /// Sobolev index.
    pub n: f64,
    pub alpha: f64,
    pub c0: f64,
    pub eps: f64,
}

impl From<WeightParams> for CmWeightParams {
    fn from(p: WeightParams) -> Self {
        Self { rho: p.rho, lambda0: p.lambda0, s: p.s, n: p.n, alpha: p.alpha, c0: p.c0, eps: p.eps }
    }
}

impl From<CmWeightParams> for WeightParams {
    fn from(p: CmWeightParams) -> Self {
        Self { rho: p.rho, lambda0: p.lambda0, s: p.s, n: p.n, alpha: p.alpha, c0: p.c0, eps: p.eps }
    }
}

/// Opaque validated weight parameters.
pub struct CmWeights {
    params: WeightParams,
}

/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_weight_params_default(out: *mut CmWeightParams) -> CmStatus {
    guard(|| write_out(out, WeightParams::default().into(), "out"))
}

/// # Safety
/// `params` must be null or valid; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_weights_new(params: *const CmWeightParams, out: *mut *mut CmWeights) -> CmStatus {
    guard(|| {
        let params: WeightParams = (*deref(params, "params")?).into();
        let out = deref_mut(out, "out")?;
        lift(params.validate())?;
        *out = Box::into_raw(Box::new(CmWeights { params }));
        Ok(())
    })
}

/// # Safety
/// `w` must be null or a handle from `cm_weights_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_weights_free(w: *mut CmWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// `ln A(t, k, η)`, the logarithm of the multiplier.
///
/// # Safety
/// `w` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_weights_log_a(w: *const CmWeights, t: f64, k: f64, eta: f64, out: *mut f64) -> CmStatus {
    guard(|| {
        let w = deref(w, "weights")?;
        let at = lift(WeightsAt::new(w.params, t))?;
        write_out(out, at.log_a(k, eta), "out")
    })
}

/// Radius `λ(t)` of the Gevrey part of the multiplier.
///
/// # Safety
/// `w` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_weights_lambda(w: *const CmWeights, t: f64, out: *mut f64) -> CmStatus {
    guard(|| {
        let w = deref(w, "weights")?;
        write_out(out, lift(couette_mhd::weights::lambda(t, &w.params))?, "out")
    })
}

// ---------------------------------------------------------------------------
// Resonance chain and config runs

/// Amplification `sinh(c0 asinh(η/k²))` across one resonant interval.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_chain_step_amplification(c0: f64, eta: f64, k: u64, out: *mut f64) -> CmStatus {
    guard(|| {
        if !(c0 > 0.0 && eta > 0.0 && k >= 1) {
            return Err(fail(CmStatus::InvalidArgument, "need c0 > 0, eta > 0, k >= 1"));
        }
        write_out(out, chain_step_amplification(c0, eta, k), "out")
    })
}

/// Log of the total amplification of the chain started at `k = ⌊√(c0 η)⌋`.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn cm_chain_log_growth(c0: f64, eta: f64, out: *mut f64) -> CmStatus {
    guard(|| {
        let cfg = lift(ChainConfig::new(c0, eta))?;
        write_out(out, chain_log_growth(&cfg), "out")
    })
}

/// Run a JSON experiment config, writing its outputs under `out_dir`
/// (null to use the config's `output_dir`, or `out`).
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out_dir` null or one.
#[no_mangle]
pub unsafe extern "C" fn cm_run_config(config_json: *const c_char, out_dir: *const c_char) -> CmStatus {
    guard(|| {
        let cfg = lift(ExperimentConfig::from_json(c_str(config_json, "config_json")?))?;
        let out_dir = if out_dir.is_null() { None } else { Some(PathBuf::from(c_str(out_dir, "out_dir")?)) };
        lift(run(&cfg, &RunOptions { out_dir, seed: None, snapshots: 0 }))?;
        Ok(())
    })
}
