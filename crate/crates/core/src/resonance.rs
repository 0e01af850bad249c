//! Toy model of the resonance chain: near `t = η/k` the mode `k` feeds
//! `k − 1` with strength `c0 (1 + (η/k − t)²)^{-1/2}`, and repeating the
//! transfer `k → k−1 → … → 1` gives `exp(C√η)` growth.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{linear_fit, GrowthFit};
use crate::error::{Error, Result};
use crate::ode::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub c0: f64,
    pub eta: f64,
    pub k_start: u64,
}

impl ChainConfig {
    /// `k_start = ⌊√(c0 η)⌋`, at least 1.
    pub fn new(c0: f64, eta: f64) -> Result<Self> {
        let k_start = ((c0 * eta).sqrt().floor() as u64).max(1);
        let c = Self { c0, eta, k_start };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0 && self.c0 < 1.0) {
            return Err(Error::InvalidParameter(format!("c0 must lie in (0,1), got {}", self.c0)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {}", self.eta)));
        }
        if self.k_start == 0 {
            return Err(Error::InvalidParameter("k_start must be at least 1".into()));
        }
        Ok(())
    }
}

/// `I_k = η/k + ½[−η/(k(k+1)), η/(k(k−1))]`; for `k = 1` the right end is `2η`.
pub fn resonant_interval(eta: f64, k: u64) -> (f64, f64) {
    let kf = k as f64;
    let lo = eta / kf - 0.5 * eta / (kf * (kf + 1.0));
    let hi = if k == 1 { 2.0 * eta } else { eta / kf + 0.5 * eta / (kf * (kf - 1.0)) };
    (lo, hi)
}

fn coupling(c0: f64, eta: f64, k: u64, t: f64) -> f64 {
    let d = eta / k as f64 - t;
    c0 / (1.0 + d * d).sqrt()
}

/// `c0 ∫_{t0}^{t1} (1 + (η/k − τ)²)^{-1/2} dτ`.
pub fn coupling_integral(c0: f64, eta: f64, k: u64, t0: f64, t1: f64) -> f64 {
    let r = eta / k as f64;
    c0 * ((r - t0).asinh() - (r - t1).asinh())
}

/// Factors `exp(±G)` by which `p(k) ± p(k−1)` grow between `t0` and `t1`.
pub fn qpm_closed_form(c0: f64, eta: f64, k: u64, t0: f64, t1: f64) -> (f64, f64) {
    let g = coupling_integral(c0, eta, k, t0, t1);
    (g.exp(), (-g).exp())
}

/// Exact solution of the two-mode system for `p = (p(k), p(k−1))`.
pub fn two_mode_closed_form(c0: f64, eta: f64, k: u64, p: [f64; 2], t0: f64, t1: f64) -> [f64; 2] {
    let g = coupling_integral(c0, eta, k, t0, t1);
    let (ch, sh) = (g.cosh(), g.sinh());
    [p[0] * ch + p[1] * sh, p[0] * sh + p[1] * ch]
}

/// Integrate the two-mode system numerically over `[t0, t1] ⊆ I_k`.
pub fn integrate_two_mode(c0: f64, eta: f64, k: u64, p: [f64; 2], interval: (f64, f64), tol: Tolerance) -> Result<[f64; 2]> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (a, b) = resonant_interval(eta, k);
    let slack = 1e-12 * b.abs().max(1.0);
    if interval.0 < a - slack || interval.1 > b + slack || interval.0 > interval.1 {
        return Err(Error::InvalidParameter(format!(
            "interval [{}, {}] is not inside I_{k} = [{a}, {b}]",
            interval.0, interval.1
        )));
    }
    let y = ode::integrate(
        |t, y, dy| {
            let c = coupling(c0, eta, k, t);
            dy[0] = c * y[1];
            dy[1] = c * y[0];
        },
        interval.0,
        interval.1,
        &p,
        tol,
    )?;
    Ok([y[0], y[1]])
}

/// `sinh(c0 asinh(η/k²))`: growth of mode `k−1` across `I_k` when it starts at zero.
pub fn chain_step_amplification(c0: f64, eta: f64, k: u64) -> f64 {
    let x = eta / (k as f64 * k as f64);
    (c0 * x.asinh()).sinh()
}

/// The elementary lower bound `(c0/2) x^{c0}` for `sinh(c0 asinh x)`, `x ≥ 1`.
pub fn step_lower_bound(c0: f64, x: f64) -> f64 {
    0.5 * c0 * x.powf(c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainRow {
    pub eta: f64,
    pub c0: f64,
    pub k: u64,
    pub step_amplification: f64,
    pub cumulative_log_growth: f64,
}

impl ChainRow {
    pub const HEADER: &'static str = "eta,c0,k,step_amplification,cumulative_log_growth";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.eta, self.c0, self.k, self.step_amplification, self.cumulative_log_growth)
    }
}

/// Per-step factors `k = k_start, …, 1` and their running log-product.
pub fn chain_rows(cfg: &ChainConfig) -> Vec<ChainRow> {
    let mut acc = 0.0;
    (1..=cfg.k_start)
        .rev()
        .map(|k| {
            let a = chain_step_amplification(cfg.c0, cfg.eta, k);
            acc += a.ln();
            ChainRow { eta: cfg.eta, c0: cfg.c0, k, step_amplification: a, cumulative_log_growth: acc }
        })
        .collect()
}

/// `ln Π_{1≤k≤k_start} sinh(c0 asinh(η/k²))`.
pub fn chain_log_growth(cfg: &ChainConfig) -> f64 {
    chain_rows(cfg).last().map_or(0.0, |r| r.cumulative_log_growth)
}

/// Run the chain through the ODE: on each `I_k` the receiving mode starts
/// at zero and the grown mode is handed to the next interval.
pub fn simulate_chain(cfg: &ChainConfig, tol: Tolerance) -> Result<Vec<f64>> {
    cfg.validate()?;
    let mut amp = 1.0;
    let mut out = Vec::with_capacity(cfg.k_start as usize);
    for k in (1..=cfg.k_start).rev() {
        let p = integrate_two_mode(cfg.c0, cfg.eta, k, [amp, 0.0], resonant_interval(cfg.eta, k), tol)?;
        amp = p[1];
        out.push(amp);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSweep {
    pub c0: f64,
    pub etas: Vec<f64>,
    pub log_growth: Vec<f64>,
    /// Fit of `ln(product) + (c0/2) ln η` against `√(c0 η)`; the slope is `C·c0`.
    pub fit: GrowthFit,
}

impl ChainSweep {
    /// The fitted constant `C`.
    pub fn constant(&self) -> f64 {
        self.fit.slope / self.c0
    }
}

pub fn chain_total_growth(c0: f64, etas: &[f64]) -> Result<ChainSweep> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lg = Vec::new();
    for &eta in etas {
        let cfg = ChainConfig::new(c0, eta)?;
        let l = chain_log_growth(&cfg);
        lg.push(l);
        xs.push((c0 * eta).sqrt());
        ys.push(l + 0.5 * c0 * eta.ln());
    }
    Ok(ChainSweep { c0, etas: etas.to_vec(), log_growth: lg, fit: linear_fit(&xs, &ys) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_example() {
        let a = chain_step_amplification(0.5, 8.0, 1);
        assert!((a - 1.879).abs() < 1e-3, "{a}");
        assert!(a >= step_lower_bound(0.5, 8.0));
        assert!((step_lower_bound(0.5, 8.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);
    }

    #[test]
    fn c0_one_is_identity_map() {
        assert!((chain_step_amplification(1.0, 37.0, 1) - 37.0).abs() < 1e-11);
    }

    #[test]
    fn intervals_are_ordered() {
        let eta = 400.0;
        for k in 2..=20 {
            let (lo, hi) = resonant_interval(eta, k);
            let (lo1, hi1) = resonant_interval(eta, k - 1);
            assert!(lo < hi && hi <= lo1 + 1e-12 && lo1 < hi1);
        }
        assert_eq!(resonant_interval(eta, 1).1, 800.0);
    }

    #[test]
    fn closed_form_factors() {
        let (p, m) = qpm_closed_form(0.3, 100.0, 5, 19.0, 21.5);
        assert!((p * m - 1.0).abs() < 1e-14);
        assert_eq!(qpm_closed_form(0.3, 100.0, 5, 20.0, 20.0), (1.0, 1.0));
    }

    #[test]
    fn ode_matches_closed_form() {
        let (c0, eta, k) = (0.5, 400.0, 10);
        let iv = resonant_interval(eta, k);
        let got = integrate_two_mode(c0, eta, k, [1.0, 0.0], iv, Tolerance::default()).unwrap();
        let want = two_mode_closed_form(c0, eta, k, [1.0, 0.0], iv.0, iv.1);
        for i in 0..2 {
            assert!((got[i] - want[i]).abs() <= 1e-8 * want[i].abs().max(1.0));
        }
        assert!(integrate_two_mode(c0, eta, k, [1.0, 0.0], (0.0, 1.0), Tolerance::default()).is_err());
    }

    #[test]
    fn zero_coupling_is_identity() {
        let iv = resonant_interval(50.0, 3);
        let p = integrate_two_mode(0.0, 50.0, 3, [0.7, -0.2], iv, Tolerance::default()).unwrap();
        assert_eq!(p, [0.7, -0.2]);
    }

    #[test]
    fn simulated_chain_tracks_closed_form_steps() {
        let cfg = ChainConfig::new(0.5, 200.0).unwrap();
        let amps = simulate_chain(&cfg, Tolerance::default()).unwrap();
        let mut want = 1.0;
        for (i, k) in (1..=cfg.k_start).rev().enumerate() {
            let (a, b) = resonant_interval(cfg.eta, k);
            want = two_mode_closed_form(cfg.c0, cfg.eta, k, [want, 0.0], a, b)[1];
            assert!((amps[i] - want).abs() <= 1e-8 * want);
        }
    }
}
