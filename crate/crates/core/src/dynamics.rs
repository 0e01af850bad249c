//! Time evolution in the sheared frame.
//!
//! Two equivalent formulations are provided: the velocity/magnetic form
//! (`rhs_vb`) and the adapted scalar form (`rhs_ptilde`). Both use the same
//! dealiased quadratic terms and are advanced with classical RK4.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{self, Tolerance};
use crate::spectral::{Dealiaser, Grid, Mode, SpectralField};
use crate::unknowns::{dy_inv_lap_symbol, from_ptilde, MhdState, TailoredState};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Linear coupling of `p̃₂` into `∂t p̃₁` beyond the Alfvén term `iαk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolVariant {
    /// `+(α∂x)⁻¹ ∂x⁴ Δ⁻²`, symbol `−ik³/(αΛ⁴)`. Consistent with the
    /// velocity/magnetic equations.
    #[default]
    QuarticPlus,
    /// `−(α∂x)⁻¹ ∂x⁴ Δ⁻²`, symbol `ik³/(αΛ⁴)`.
    QuarticMinus,
    /// `−(α∂x)⁻¹ ∂x²(∂x² − 2∂y²) Δ⁻²`, symbol `ik(k² − 2(η−kt)²)/(αΛ⁴)`.
    MixedShear,
}

impl SymbolVariant {
    pub fn symbol(&self, m: &Mode, t: f64, alpha: f64) -> Complex64 {
        let l2 = m.lambda_sq(t);
        if m.k == 0 || l2 == 0.0 {
            return ZERO;
        }
        let k = m.k as f64;
        let z = m.shifted_eta(t);
        let l4 = l2 * l2;
        match self {
            SymbolVariant::QuarticPlus => -I * k * k * k / (alpha * l4),
            SymbolVariant::QuarticMinus => I * k * k * k / (alpha * l4),
            SymbolVariant::MixedShear => I * k * (k * k - 2.0 * z * z) / (alpha * l4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub alpha: f64,
    pub nu: f64,
    pub kappa: f64,
    pub nonlinear: bool,
    #[serde(default)]
    pub symbol: SymbolVariant,
    /// Largest step; smaller steps are taken when the stability bound requires it.
    pub dt: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self { alpha: 1.0, nu: 0.0, kappa: 0.0, nonlinear: true, symbol: SymbolVariant::default(), dt: 0.02 }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha == 0.0 || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be nonzero".into()));
        }
        if !(self.nu >= 0.0 && self.kappa >= 0.0) {
            return Err(Error::InvalidParameter("nu and kappa must be nonnegative".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter("dt must be positive".into()));
        }
        Ok(())
    }
}

/// Quadratic terms `N_v = b·∇b − v·∇v` and `N_b = b·∇v − v·∇b`, computed
/// in divergence form from four pointwise products of real fields.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    dealias: Dealiaser,
}

impl Nonlinearity {
    pub fn new(grid: Grid) -> Self {
        Self { dealias: Dealiaser::new(grid) }
    }

    pub fn dealiaser(&self) -> &Dealiaser {
        &self.dealias
    }

    /// Returns `(N_v, N_b)`. Inputs must be coefficients of real fields.
    pub fn terms(&self, v: &[SpectralField; 2], b: &[SpectralField; 2], t: f64) -> ([SpectralField; 2], [SpectralField; 2]) {
        let d = &self.dealias;
        let (v1, v2) = d.to_physical_pair(&v[0], &v[1]);
        let (b1, b2) = d.to_physical_pair(&b[0], &b[1]);
        let n = v1.len();
        let (mut m11, mut m12, mut m22, mut e) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            m11[i] = b1[i] * b1[i] - v1[i] * v1[i];
            m12[i] = b1[i] * b2[i] - v1[i] * v2[i];
            m22[i] = b2[i] * b2[i] - v2[i] * v2[i];
            e[i] = b2[i] * v1[i] - v2[i] * b1[i];
        }
        let (m11, m12) = d.from_physical_pair(&m11, &m12);
        let (m22, e) = d.from_physical_pair(&m22, &e);
        let grid = v[0].grid;
        let mut nv = [SpectralField::zeros(grid), SpectralField::zeros(grid)];
        let mut nb = [SpectralField::zeros(grid), SpectralField::zeros(grid)];
        for m in grid.modes() {
            let (ik, iz) = (I * m.k as f64, I * m.shifted_eta(t));
            let i = m.idx;
            nv[0].data[i] = ik * m11.data[i] + iz * m12.data[i];
            nv[1].data[i] = ik * m12.data[i] + iz * m22.data[i];
            nb[0].data[i] = iz * e.data[i];
            nb[1].data[i] = -ik * e.data[i];
        }
        (nv, nb)
    }
}

/// Tendency of `(v, b)`.
///
/// The velocity tendency `F` is corrected by a gradient so that
/// `∇·∂t v = ∂x v₂`, which keeps `∇_t·v = 0` as the frame shears.
pub fn rhs_vb(s: &MhdState, cfg: &DynamicsConfig, nl: &Nonlinearity) -> MhdState {
    let grid = s.grid();
    let t = s.t;
    let alpha = cfg.alpha;
    let terms = cfg.nonlinear.then(|| nl.terms(&s.v, &s.b, t));
    let mut out = MhdState::zeros(grid, t);
    for m in grid.modes() {
        let i = m.idx;
        let l2 = m.lambda_sq(t);
        if l2 == 0.0 || !grid.is_retained(&m) {
            continue;
        }
        let (kf, z) = (m.k as f64, m.shifted_eta(t));
        let (ik, iz) = (I * kf, I * z);
        let (v1, v2, b1, b2) = (s.v[0].data[i], s.v[1].data[i], s.b[0].data[i], s.b[1].data[i]);
        let (nv, nb) = match &terms {
            Some((nv, nb)) => ([nv[0].data[i], nv[1].data[i]], [nb[0].data[i], nb[1].data[i]]),
            None => ([ZERO; 2], [ZERO; 2]),
        };
        let f1 = -v2 + alpha * ik * b1 + nv[0];
        let f2 = alpha * ik * b2 + nv[1];
        let phi = (ik * f1 + iz * f2 - ik * v2) / (-l2);
        out.v[0].data[i] = f1 - ik * phi - cfg.nu * l2 * v1;
        out.v[1].data[i] = f2 - iz * phi - cfg.nu * l2 * v2;
        out.b[0].data[i] = b2 + alpha * ik * v1 + nb[0] - cfg.kappa * l2 * b1;
        out.b[1].data[i] = alpha * ik * v2 + nb[1] - cfg.kappa * l2 * b2;
    }
    out
}

/// Tendency of `(p̃₁, p̃₂, v₌, b₌)`.
pub fn rhs_ptilde(s: &TailoredState, cfg: &DynamicsConfig, nl: &Nonlinearity) -> TailoredState {
    let grid = s.grid();
    let t = s.t;
    let alpha = s.alpha;
    let terms = if cfg.nonlinear {
        let f = from_ptilde(s);
        Some(nl.terms(&f.v, &f.b, t))
    } else {
        None
    };
    let mut out = TailoredState {
        t,
        alpha,
        pt1: SpectralField::zeros(grid),
        pt2: SpectralField::zeros(grid),
        v_avg: vec![ZERO; grid.ny],
        b_avg: vec![ZERO; grid.ny],
    };
    for m in grid.modes() {
        let i = m.idx;
        let l2 = m.lambda_sq(t);
        if l2 == 0.0 || !grid.is_retained(&m) {
            continue;
        }
        if m.k == 0 {
            let (nv, nb) = terms.as_ref().map_or((ZERO, ZERO), |(nv, nb)| (nv[0].data[i], nb[0].data[i]));
            out.v_avg[i] = nv - cfg.nu * l2 * s.v_avg[i];
            out.b_avg[i] = nb - cfg.kappa * l2 * s.b_avg[i];
            continue;
        }
        let (kf, z) = (m.k as f64, m.shifted_eta(t));
        let (ik, iz) = (I * kf, I * z);
        let l = l2.sqrt();
        let (n1, n2) = match &terms {
            Some((nv, nb)) => (
                (ik * nv[1].data[i] - iz * nv[0].data[i]) / l,
                (ik * nb[1].data[i] - iz * nb[0].data[i]) / l,
            ),
            None => (ZERO, ZERO),
        };
        let (q1, q2) = (s.pt1.data[i], s.pt2.data[i]);
        let sym = cfg.symbol.symbol(&m, t, alpha);
        out.pt1.data[i] = alpha * ik * q2 + sym * q2 + n1 - dy_inv_lap_symbol(&m, t) * n2 / alpha
            - cfg.nu * l2 * q1
            - (cfg.kappa - cfg.nu) / alpha * iz * q2;
        out.pt2.data[i] = alpha * ik * q1 + n2 - cfg.kappa * l2 * q2;
    }
    out
}

/// States that RK4 can combine linearly.
pub trait Evolvable: Clone {
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    /// `self += a · x`.
    fn axpy(&mut self, a: f64, x: &Self);
    fn all_finite(&self) -> bool;
}

impl Evolvable for MhdState {
    fn time(&self) -> f64 {
        self.t
    }
    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        for i in 0..2 {
            self.v[i].axpy(a, &x.v[i]);
            self.b[i].axpy(a, &x.b[i]);
        }
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl Evolvable for TailoredState {
    fn time(&self) -> f64 {
        self.t
    }
    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        self.pt1.axpy(a, &x.pt1);
        self.pt2.axpy(a, &x.pt2);
        for (y, v) in self.v_avg.iter_mut().zip(&x.v_avg) {
            *y += a * v;
        }
        for (y, v) in self.b_avg.iter_mut().zip(&x.b_avg) {
            *y += a * v;
        }
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// One classical RK4 step of `y' = f(y)` where `f` reads the time from `y`.
pub fn rk4_step<S: Evolvable>(y: &S, dt: f64, f: impl Fn(&S) -> S) -> S {
    let t = y.time();
    let k1 = f(y);
    let mut y2 = y.clone();
    y2.axpy(0.5 * dt, &k1);
    y2.set_time(t + 0.5 * dt);
    let k2 = f(&y2);
    let mut y3 = y.clone();
    y3.axpy(0.5 * dt, &k2);
    y3.set_time(t + 0.5 * dt);
    let k3 = f(&y3);
    let mut y4 = y.clone();
    y4.axpy(dt, &k3);
    y4.set_time(t + dt);
    let k4 = f(&y4);
    let mut out = y.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    out.set_time(t + dt);
    out
}

/// Sum of coefficient moduli, an upper bound for the sup norm.
fn sup_bound(fields: &[&SpectralField]) -> f64 {
    fields.iter().map(|f| f.data.iter().map(|c| c.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Largest admissible step at time `t` for a state of sup-size `umax`:
/// `0.5/(|α| kmax + umax·max|k, η−kt|)`, and `2.5/(max(ν,κ) Λ²max)` when dissipative.
pub fn stable_dt(grid: Grid, t: f64, alpha: f64, umax: f64, nu: f64, kappa: f64) -> f64 {
    let wmax = grid.max_retained_wavenumber(t);
    let mut dt = 0.5 / (alpha.abs() * grid.kmax() as f64 + umax * wmax);
    let diff = nu.max(kappa);
    if diff > 0.0 {
        dt = dt.min(2.5 / (diff * wmax * wmax));
    }
    dt
}

/// RK4 driver for either formulation.
#[derive(Debug, Clone)]
pub struct Solver {
    pub cfg: DynamicsConfig,
    nl: Nonlinearity,
    grid: Grid,
}

impl Solver {
    pub fn new(grid: Grid, cfg: DynamicsConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, nl: Nonlinearity::new(grid), grid })
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    fn dt_at(&self, t: f64, umax: f64) -> f64 {
        self.cfg.dt.min(stable_dt(self.grid, t, self.cfg.alpha, umax, self.cfg.nu, self.cfg.kappa))
    }

    /// One RK4 step of the velocity/magnetic form followed by re-projection.
    pub fn step_vb(&self, s: &MhdState, dt: f64) -> MhdState {
        let mut out = rk4_step(s, dt, |y| rhs_vb(y, &self.cfg, &self.nl));
        out.project();
        out
    }

    pub fn step_ptilde(&self, s: &TailoredState, dt: f64) -> TailoredState {
        rk4_step(s, dt, |y| rhs_ptilde(y, &self.cfg, &self.nl))
    }

    /// Advance to `t_end` with equal substeps no larger than the admissible step.
    pub fn advance_vb(&self, s: &MhdState, t_end: f64) -> Result<MhdState> {
        let mut cur = s.clone();
        while cur.t < t_end - 1e-12 * t_end.abs().max(1.0) {
            let umax = sup_bound(&[&cur.v[0], &cur.v[1], &cur.b[0], &cur.b[1]]);
            let h = self.dt_at(cur.t, umax);
            let n = ((t_end - cur.t) / h).ceil().max(1.0);
            let dt = (t_end - cur.t) / n;
            cur = self.step_vb(&cur, dt);
            if !cur.is_finite() {
                return Err(Error::NumericalAbort { t: cur.t, reason: "non-finite state".into() });
            }
        }
        cur.t = t_end;
        Ok(cur)
    }

    pub fn advance_ptilde(&self, s: &TailoredState, t_end: f64) -> Result<TailoredState> {
        let mut cur = s.clone();
        while cur.t < t_end - 1e-12 * t_end.abs().max(1.0) {
            let umax = sup_bound(&[&cur.pt1, &cur.pt2]);
            let h = self.dt_at(cur.t, umax);
            let n = ((t_end - cur.t) / h).ceil().max(1.0);
            let dt = (t_end - cur.t) / n;
            cur = self.step_ptilde(&cur, dt);
            if !cur.is_finite() {
                return Err(Error::NumericalAbort { t: cur.t, reason: "non-finite state".into() });
            }
        }
        cur.t = t_end;
        Ok(cur)
    }
}

/// Coefficients of the linear 2×2 system for `(p₁, p₂)` at one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    pub k: f64,
    pub eta: f64,
    pub alpha: f64,
    pub nu: f64,
    pub kappa: f64,
}

/// `∂t (p₁, p₂)` of the linearized equations at one mode.
pub fn linear_mode_rhs(mp: &ModeParams, t: f64, p: [Complex64; 2]) -> [Complex64; 2] {
    let z = mp.eta - mp.k * t;
    let l2 = mp.k * mp.k + z * z;
    let d = if l2 > 0.0 { mp.k * z / l2 } else { 0.0 };
    let c = I * mp.alpha * mp.k;
    [
        (d - mp.nu * l2) * p[0] + c * p[1],
        (-d - mp.kappa * l2) * p[1] + c * p[0],
    ]
}

/// Propagate `(p₁, p₂)` of one mode from `t0` to `t1` with adaptive steps.
/// The data is normalized first so that the absolute tolerance does not
/// swamp small amplitudes.
pub fn linear_mode_propagate(mp: &ModeParams, p0: [Complex64; 2], t0: f64, t1: f64, tol: Tolerance) -> Result<[Complex64; 2]> {
    let scale = p0[0].norm().max(p0[1].norm());
    if scale == 0.0 {
        return Ok(p0);
    }
    let y0 = [p0[0].re / scale, p0[0].im / scale, p0[1].re / scale, p0[1].im / scale];
    let y = ode::integrate(
        |t, y, dy| {
            let r = linear_mode_rhs(mp, t, [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])]);
            dy.copy_from_slice(&[r[0].re, r[0].im, r[1].re, r[1].im]);
        },
        t0,
        t1,
        &y0,
        tol,
    )?;
    Ok([Complex64::new(y[0], y[1]) * scale, Complex64::new(y[2], y[3]) * scale])
}

/// Same propagation expressed in `(p̃₁, p̃₂)`.
pub fn linear_mode_propagate_ptilde(mp: &ModeParams, pt0: [Complex64; 2], t0: f64, t1: f64, tol: Tolerance) -> Result<[Complex64; 2]> {
    let corr = |t: f64| {
        let z = mp.eta - mp.k * t;
        let l2 = mp.k * mp.k + z * z;
        if l2 > 0.0 { -I * z / l2 } else { ZERO }
    };
    let p0 = [pt0[0] + corr(t0) * pt0[1] / mp.alpha, pt0[1]];
    let p1 = linear_mode_propagate(mp, p0, t0, t1, tol)?;
    Ok([p1[0] - corr(t1) * p1[1] / mp.alpha, p1[1]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationRow {
    pub t: f64,
    pub ptilde_l2: f64,
    pub ptilde_hm1: f64,
    pub linear_l2: f64,
    pub linear_hm1: f64,
    /// `‖p̃ − p̃_lin‖_{L²} / ‖p̃_lin‖_{L²}`.
    pub deviation: f64,
    /// `‖(w, j)‖ / ⟨t⟩`.
    pub vorticity_current_over_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflationReport {
    pub c1: f64,
    pub initial_l2: f64,
    pub initial_hm1: f64,
    pub rows: Vec<InflationRow>,
}

impl InflationReport {
    /// Extremes of `‖p̃(t)‖/‖p̃_in‖` over the run.
    pub fn ratio_range(&self) -> (f64, f64) {
        self.rows.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            let x = r.ptilde_l2 / self.initial_l2;
            (lo.min(x), hi.max(x))
        })
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }
}

/// Evolve `p̃` with and without the quadratic terms and compare.
pub fn norm_inflation_experiment(solver: &Solver, initial: &TailoredState, t_end: f64, samples: usize) -> Result<InflationReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let mut lin_cfg = solver.cfg;
    lin_cfg.nonlinear = false;
    let lin_solver = Solver { cfg: lin_cfg, nl: solver.nl.clone(), grid: solver.grid };
    let (mut full, mut lin) = (initial.clone(), initial.clone());
    let mut rows = Vec::with_capacity(samples + 1);
    let t0 = initial.t;
    for i in 0..=samples {
        let t = t0 + (t_end - t0) * i as f64 / samples as f64;
        full = solver.advance_ptilde(&full, t)?;
        lin = lin_solver.advance_ptilde(&lin, t)?;
        let mut diff = full.clone();
        diff.axpy(-1.0, &lin);
        let ll2 = lin.ptilde_norm();
        rows.push(InflationRow {
            t,
            ptilde_l2: full.ptilde_norm(),
            ptilde_hm1: full.ptilde_hm1_norm(),
            linear_l2: ll2,
            linear_hm1: lin.ptilde_hm1_norm(),
            deviation: if ll2 > 0.0 { diff.ptilde_norm() / ll2 } else { 0.0 },
            vorticity_current_over_t: from_ptilde(&full).vorticity_current_norm() / (1.0 + t * t).sqrt(),
        });
    }
    Ok(InflationReport {
        c1: (std::f64::consts::PI / (2.0 * initial.alpha.abs())).exp(),
        initial_l2: initial.ptilde_norm(),
        initial_hm1: initial.ptilde_hm1_norm(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unknowns::{from_p, to_ptilde, PState};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_independent_magnetic_field_is_stationary_without_velocity() {
        // b = (b₁(y), 0), v = 0: ∂t b = b₂e₁ + α∂x v = 0
        let g = Grid::new(8, 8, 1.0).unwrap();
        let mut s = MhdState::zeros(g, 0.0);
        s.b[0].set(0, 1, c(0.5, 0.0)).unwrap();
        s.b[0].set(0, -1, c(0.5, 0.0)).unwrap();
        let r = rhs_vb(&s, &DynamicsConfig::default(), &Nonlinearity::new(g));
        for f in r.components() {
            assert!(f.max_abs() < 1e-15);
        }
    }

    #[test]
    fn vb_tendency_keeps_constraint() {
        let g = Grid::new(12, 12, 1.0).unwrap();
        let mut p1 = SpectralField::from_fn(g, |m| c(1.0 / (1.0 + m.magnitude()), 0.3 * m.k as f64));
        p1.apply_mask();
        p1.enforce_hermitian();
        let p2 = p1.map_symbol(|m| c(0.5, 0.1 * m.eta));
        let mut p2 = p2;
        p2.enforce_hermitian();
        let t = 0.7;
        let s = from_p(&PState { t, p1, p2, v_avg: vec![ZERO; 12], b_avg: vec![ZERO; 12] });
        let cfg = DynamicsConfig { nu: 0.01, kappa: 0.02, ..Default::default() };
        let r = rhs_vb(&s, &cfg, &Nonlinearity::new(g));
        // d/dt (∇_t·v) = ∇_t·∂t v − ∂x v₂ = 0
        for u in [(&r.v, &s.v), (&r.b, &s.b)] {
            let mut d = crate::spectral::divergence(u.0, t);
            d.axpy(-1.0, &u.1[1].dx());
            assert!(d.max_abs() < 1e-12);
        }
    }

    #[test]
    fn linear_ptilde_form_matches_mode_propagator() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let mut p1 = SpectralField::zeros(g);
        p1.set(1, 2, c(1.0, 0.0)).unwrap();
        p1.set(-1, -2, c(1.0, 0.0)).unwrap();
        let mut p2 = SpectralField::zeros(g);
        p2.set(1, 2, c(0.0, 0.5)).unwrap();
        p2.set(-1, -2, c(0.0, -0.5)).unwrap();
        let s = from_p(&PState { t: 0.0, p1, p2, v_avg: vec![ZERO; 8], b_avg: vec![ZERO; 8] });
        let cfg = DynamicsConfig { nonlinear: false, dt: 1e-3, ..Default::default() };
        let solver = Solver::new(g, cfg).unwrap();
        let pt = to_ptilde(&s, 1.0).unwrap();
        let out = solver.advance_ptilde(&pt, 2.0).unwrap();
        let mp = ModeParams { k: 1.0, eta: 2.0, alpha: 1.0, nu: 0.0, kappa: 0.0 };
        let i = g.index_of(1, 2).unwrap();
        let want = linear_mode_propagate_ptilde(&mp, [pt.pt1.data[i], pt.pt2.data[i]], 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((out.pt1.data[i] - want[0]).norm() < 1e-9);
        assert!((out.pt2.data[i] - want[1]).norm() < 1e-9);
    }

    #[test]
    fn stable_dt_shrinks_with_dissipation() {
        let g = Grid::new(16, 16, 1.0).unwrap();
        let a = stable_dt(g, 10.0, 1.0, 0.0, 0.0, 0.0);
        let b = stable_dt(g, 10.0, 1.0, 0.0, 1e-2, 0.0);
        assert!(b < a);
        assert!((a - 0.5 / 5.0).abs() < 1e-15);
    }
}
