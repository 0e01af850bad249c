//! Time-dependent Fourier multipliers used to measure solutions.
//!
//! All multipliers are evaluated in log space; `exp` is only taken when a
//! caller asks for a plain value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// `⟨x⟩ = √(1 + x²)`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// `⟨k, η⟩ = √(1 + k² + η²)`.
pub fn japanese2(k: f64, eta: f64) -> f64 {
    (1.0 + k * k + eta * eta).sqrt()
}

/// `|k, η|`.
pub fn mag(k: f64, eta: f64) -> f64 {
    (k * k + eta * eta).sqrt()
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub rho: f64,
    pub lambda0: f64,
    pub s: f64,
    /// Sobolev index `N`.
    pub n: f64,
    pub alpha: f64,
    pub c0: f64,
    pub eps: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        let (rho, s) = (0.05, 0.6);
        Self { rho, lambda0: Self::min_lambda0(rho, s), s, n: 5.0, alpha: 1.0, c0: 0.05, eps: 1e-3 }
    }
}

impl WeightParams {
    /// Smallest admissible `λ0` for the given `ρ`, `s`.
    pub fn min_lambda0(rho: f64, s: f64) -> f64 {
        rho * (250.0 + 2.0 / (s - 0.5))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad(format!("rho must be positive, got {}", self.rho));
        }
        if !(self.s > 0.5 && self.s <= 1.0) {
            return bad(format!("s must lie in (1/2, 1], got {}", self.s));
        }
        if !(self.n >= 5.0) {
            return bad(format!("N must be at least 5, got {}", self.n));
        }
        if !(self.alpha != 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be nonzero".into());
        }
        if !(self.c0 > 0.0 && self.c0 < 1.0) {
            return bad(format!("c0 must lie in (0, 1), got {}", self.c0));
        }
        if !(self.eps > 0.0 && self.eps < self.c0) {
            return bad(format!("eps must lie in (0, c0), got {}", self.eps));
        }
        let lo = Self::min_lambda0(self.rho, self.s);
        if !(self.lambda0 >= lo * (1.0 - 1e-12)) {
            return bad(format!("lambda0 must be at least {lo}, got {}", self.lambda0));
        }
        Ok(())
    }

    /// `C₁ = e^{π/(2|α|)}`, the bound on the adapted multiplier.
    pub fn c1(&self) -> f64 {
        (std::f64::consts::PI / (2.0 * self.alpha.abs())).exp()
    }

    /// `|k|` above which the resonance multiplier is switched off in `√|η|`.
    pub fn m_cutoff(&self) -> f64 {
        10.0 * self.c0 / self.eps
    }
}

// ---------------------------------------------------------------------------
// Resonance-interval weight q(t, η)

/// Number of resonant intervals, `⌊√|η|⌋` (zero when `|η| ≤ 1`).
pub fn resonant_count(eta: f64) -> u64 {
    let e = eta.abs();
    if e <= 1.0 {
        0
    } else {
        e.sqrt().floor() as u64
    }
}

/// Interval endpoint `t_{k,η}`; `t_{0,η} = 2|η|`.
pub fn interval_end(k: u64, eta: f64) -> f64 {
    let e = eta.abs();
    if k == 0 {
        2.0 * e
    } else {
        let k = k as f64;
        0.5 * (e / k + e / (k + 1.0))
    }
}

fn slope_left(k: u64, e: f64) -> f64 {
    let kf = k as f64;
    2.0 * (kf + 1.0) / kf * (1.0 - kf * kf / e)
}

fn slope_right(k: u64, e: f64) -> f64 {
    if k == 1 {
        // continuity with the plateau at t = 2|η|
        1.0 - 1.0 / e
    } else {
        let kf = k as f64;
        2.0 * (kf - 1.0) / kf * (1.0 - kf * kf / e)
    }
}

/// Index `k ≥ 1` with `t ∈ [t_{k,η}, t_{k−1,η})`, or `None` off the resonant range.
pub fn resonant_interval(t: f64, eta: f64) -> Option<u64> {
    let kmax = resonant_count(eta);
    if kmax == 0 || t < interval_end(kmax, eta) || t >= interval_end(0, eta) {
        return None;
    }
    let e = eta.abs();
    let mut k = ((e / t).round() as u64).clamp(1, kmax);
    while k > 1 && t >= interval_end(k - 1, eta) {
        k -= 1;
    }
    while k < kmax && t < interval_end(k, eta) {
        k += 1;
    }
    Some(k)
}

/// `ln q(t, η)`.
pub fn log_q(t: f64, eta: f64, rho: f64) -> f64 {
    let Some(k) = resonant_interval(t, eta) else { return 0.0 };
    let e = eta.abs();
    let kf = k as f64;
    let centre = e / kf;
    let dip = (kf * kf / e).ln();
    if t < centre {
        rho * (dip + (slope_left(k, e) * (centre - t)).ln_1p())
    } else {
        rho * (dip + (slope_right(k, e) * (t - centre)).ln_1p())
    }
}

pub fn q(t: f64, eta: f64, rho: f64) -> f64 {
    log_q(t, eta, rho).exp()
}

/// Signed `∂t q / q`, analytic on each branch, right-derivative at corners.
pub fn q_log_derivative(t: f64, eta: f64, rho: f64) -> f64 {
    let Some(k) = resonant_interval(t, eta) else { return 0.0 };
    let e = eta.abs();
    let centre = e / k as f64;
    if t < centre {
        let a = slope_left(k, e);
        -rho * a / (1.0 + a * (centre - t))
    } else {
        let b = slope_right(k, e);
        rho * b / (1.0 + b * (t - centre))
    }
}

/// `|∂t q| / q`.
pub fn q_growth_ratio(t: f64, eta: f64, rho: f64) -> f64 {
    q_log_derivative(t, eta, rho).abs()
}

/// Times where `q(·, η)` has a corner.
pub fn q_breakpoints(eta: f64) -> Vec<f64> {
    let kmax = resonant_count(eta);
    let mut out = Vec::new();
    for k in 0..=kmax {
        out.push(interval_end(k, eta));
        if k >= 1 {
            out.push(eta.abs() / k as f64);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

// ---------------------------------------------------------------------------
// J and J̃

/// `ln J̃ = 8ρ√|η| − ln q`.
pub fn log_j_tilde(t: f64, eta: f64, rho: f64) -> f64 {
    8.0 * rho * eta.abs().sqrt() - log_q(t, eta, rho)
}

/// `ln J = ln(e^{8ρ√|η|}/q + e^{8ρ√|k|})`.
pub fn log_j(t: f64, k: f64, eta: f64, rho: f64) -> f64 {
    log_add_exp(log_j_tilde(t, eta, rho), 8.0 * rho * k.abs().sqrt())
}

pub fn j(t: f64, k: f64, eta: f64, rho: f64) -> f64 {
    log_j(t, k, eta, rho).exp()
}

pub fn j_tilde(t: f64, eta: f64, rho: f64) -> f64 {
    log_j_tilde(t, eta, rho).exp()
}

/// `J̃/J` computed without overflow.
pub fn j_tilde_over_j(t: f64, k: f64, eta: f64, rho: f64) -> f64 {
    (log_j_tilde(t, eta, rho) - log_j(t, k, eta, rho)).exp()
}

// ---------------------------------------------------------------------------
// m and m̃

/// `ln m(t, k, η)`.
pub fn log_m(t: f64, k: f64, eta: f64, p: &WeightParams) -> f64 {
    if k == 0.0 || eta.abs().sqrt() > p.m_cutoff() {
        return 0.0;
    }
    let r = eta / k;
    -((r.atan() - (r - t).atan()) / (p.alpha.abs() * k.abs()))
}

pub fn m(t: f64, k: f64, eta: f64, p: &WeightParams) -> f64 {
    log_m(t, k, eta, p).exp()
}

/// `∂t m / m`.
pub fn m_log_derivative(t: f64, k: f64, eta: f64, p: &WeightParams) -> f64 {
    if k == 0.0 || eta.abs().sqrt() > p.m_cutoff() {
        return 0.0;
    }
    let u = eta / k - t;
    -1.0 / (p.alpha.abs() * k.abs() * (1.0 + u * u))
}

fn m_tilde_antiderivative(u: f64) -> f64 {
    0.5 * (u / (1.0 + u * u) + u.atan())
}

/// `ln m̃(t, k, η)`; defined for `k ≠ 0` only.
pub fn log_m_tilde(t: f64, k: f64, eta: f64, alpha: f64) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::InvalidParameter("m-tilde is undefined at k = 0".into()));
    }
    let c = eta / k;
    let integral = m_tilde_antiderivative(t - c) - m_tilde_antiderivative(-c);
    Ok(integral / (alpha.abs() * k.abs()))
}

pub fn m_tilde(t: f64, k: f64, eta: f64, alpha: f64) -> Result<f64> {
    Ok(log_m_tilde(t, k, eta, alpha)?.exp())
}

// ---------------------------------------------------------------------------
// Radius λ(t)

/// `λ'(t) = −ρ⟨t⟩^{−(3/4 + s/2)}`.
pub fn lambda_rate(t: f64, p: &WeightParams) -> f64 {
    -p.rho * japanese(t).powf(-(0.75 + 0.5 * p.s))
}

/// `λ(t) = λ0 − ρ∫₀ᵗ ⟨τ⟩^{−(3/4+s/2)} dτ`.
pub fn lambda(t: f64, p: &WeightParams) -> Result<f64> {
    let beta = 0.75 + 0.5 * p.s;
    let integral = quadrature::integrate(|x| japanese(x).powf(-beta), 0.0, t, 1e-13)?;
    Ok(p.lambda0 - p.rho * integral)
}

/// Lower bound `λ0 − ρ(1 + 4/(2s−1))` valid for all `t ≥ 0`.
pub fn lambda_floor(p: &WeightParams) -> f64 {
    p.lambda0 - p.rho * (1.0 + 4.0 / (2.0 * p.s - 1.0))
}

/// Incremental evaluation of `λ(t)` along increasing times.
#[derive(Debug, Clone)]
pub struct LambdaTrack {
    params: WeightParams,
    t: f64,
    value: f64,
}

impl LambdaTrack {
    pub fn new(params: WeightParams) -> Self {
        Self { params, t: 0.0, value: params.lambda0 }
    }

    pub fn at(&mut self, t: f64) -> Result<f64> {
        let beta = 0.75 + 0.5 * self.params.s;
        let (from, base) = if t >= self.t { (self.t, self.value) } else { (0.0, self.params.lambda0) };
        let inc = quadrature::integrate(|x| japanese(x).powf(-beta), from, t, 1e-14)?;
        self.t = t;
        self.value = base - self.params.rho * inc;
        Ok(self.value)
    }
}

// ---------------------------------------------------------------------------
// Composite multipliers

/// Weights frozen at one time.
#[derive(Debug, Clone, Copy)]
pub struct WeightsAt {
    pub params: WeightParams,
    pub t: f64,
    pub lambda: f64,
    pub lambda_rate: f64,
}

impl WeightsAt {
    pub fn new(params: WeightParams, t: f64) -> Result<Self> {
        Ok(Self { params, t, lambda: lambda(t, &params)?, lambda_rate: lambda_rate(t, &params) })
    }

    pub fn with_lambda(params: WeightParams, t: f64, lambda: f64) -> Self {
        Self { params, t, lambda, lambda_rate: lambda_rate(t, &params) }
    }

    fn log_sobolev_gevrey(&self, k: f64, eta: f64, order: f64) -> f64 {
        order * japanese2(k, eta).ln() + self.lambda * mag(k, eta).powf(self.params.s)
    }

    /// `ln A = ln m + ln J + N ln⟨k,η⟩ + λ|k,η|^s`.
    pub fn log_a(&self, k: f64, eta: f64) -> f64 {
        let p = &self.params;
        log_m(self.t, k, eta, p) + log_j(self.t, k, eta, p.rho) + self.log_sobolev_gevrey(k, eta, p.n)
    }

    /// `ln Ã`, with `J̃` in place of `J`.
    pub fn log_a_tilde(&self, k: f64, eta: f64) -> f64 {
        let p = &self.params;
        log_m(self.t, k, eta, p) + log_j_tilde(self.t, eta, p.rho) + self.log_sobolev_gevrey(k, eta, p.n)
    }

    /// `ln A^lo = ln J(t,0,η) + (N−1) ln⟨η⟩ + λ|η|^s`; only the `k = 0` column.
    pub fn log_a_lo(&self, k: f64, eta: f64) -> Result<f64> {
        if k != 0.0 {
            return Err(Error::InvalidParameter("A-lo is defined on k = 0 only".into()));
        }
        let p = &self.params;
        Ok(log_j(self.t, 0.0, eta, p.rho) + self.log_sobolev_gevrey(0.0, eta, p.n - 1.0))
    }

    /// Signed `∂t A / A`.
    pub fn a_log_rate(&self, k: f64, eta: f64) -> f64 {
        let p = &self.params;
        m_log_derivative(self.t, k, eta, p)
            - j_tilde_over_j(self.t, k, eta, p.rho) * q_log_derivative(self.t, eta, p.rho)
            + self.lambda_rate * mag(k, eta).powf(p.s)
    }
}

// ---------------------------------------------------------------------------
// Audit of the weight inequalities

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LemmaRow {
    pub lemma_id: String,
    pub sample_count: usize,
    /// Smallest constant making the sampled inequality hold.
    pub empirical_constant: f64,
    /// Largest sampled `lhs / bound`, with the stated constant when one is
    /// given and constant one otherwise.
    pub max_violation_ratio: f64,
    /// Whether the bound carries an explicit constant that must hold.
    pub hard: bool,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AuditConfig {
    pub eta_max: f64,
    /// Samples per check scale linearly with this.
    pub density: usize,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { eta_max: 1e4, density: 2000, seed: 7 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AuditReport {
    pub params: WeightParams,
    pub config: AuditConfig,
    pub rows: Vec<LemmaRow>,
}

impl AuditReport {
    pub fn row(&self, id: &str) -> Option<&LemmaRow> {
        self.rows.iter().find(|r| r.lemma_id == id)
    }

    pub fn hard_checks_pass(&self) -> bool {
        self.rows.iter().filter(|r| r.hard).all(|r| r.passed)
    }

    pub fn constants_finite(&self) -> bool {
        self.rows.iter().all(|r| r.empirical_constant.is_finite())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("lemma_id,sample_count,empirical_constant,max_violation_ratio\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{}\n", r.lemma_id, r.sample_count, r.empirical_constant, r.max_violation_ratio));
        }
        s
    }
}

struct Acc {
    count: usize,
    worst: f64,
}

impl Acc {
    fn new() -> Self {
        Self { count: 0, worst: 0.0 }
    }
    fn push(&mut self, ratio: f64) {
        self.count += 1;
        if ratio.is_nan() || ratio > self.worst {
            self.worst = ratio;
        }
    }
}

fn soft_row(id: &str, acc: Acc, note: &str) -> LemmaRow {
    LemmaRow {
        lemma_id: id.into(),
        sample_count: acc.count,
        empirical_constant: acc.worst,
        max_violation_ratio: acc.worst,
        hard: false,
        passed: acc.worst.is_finite(),
        note: note.into(),
    }
}

/// `ratio` is `lhs / rhs` without constant; `stated` is the claimed constant.
fn hard_row(id: &str, acc: Acc, stated: f64, note: &str) -> LemmaRow {
    let v = acc.worst / stated;
    LemmaRow {
        lemma_id: id.into(),
        sample_count: acc.count,
        empirical_constant: acc.worst,
        max_violation_ratio: v,
        hard: true,
        passed: v <= 1.0 + 1e-12,
        note: note.into(),
    }
}

fn equality_row(id: &str, acc: Acc, tol: f64, note: &str) -> LemmaRow {
    LemmaRow {
        lemma_id: id.into(),
        sample_count: acc.count,
        empirical_constant: acc.worst,
        max_violation_ratio: acc.worst / tol,
        hard: true,
        passed: acc.worst <= tol,
        note: note.into(),
    }
}

/// Ratio `max/min` of `η^ρ e^{−8ρ√η} / q(0, η)` over `[2, eta_max]`.
pub fn q_size_spread(eta_max: f64, rho: f64, samples: usize) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..samples {
        let eta = 2.0 * (eta_max / 2.0).powf(i as f64 / (samples - 1) as f64);
        let v = (rho * eta.ln() - 8.0 * rho * eta.sqrt() - log_q(0.0, eta, rho)).exp();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi / lo
}

/// Sample every weight inequality and report the constants they need.
pub fn audit(params: &WeightParams, cfg: &AuditConfig) -> Result<AuditReport> {
    use rand::{Rng, SeedableRng};
    params.validate()?;
    if !(cfg.eta_max >= 4.0) || cfg.density == 0 {
        return Err(Error::InvalidParameter("audit needs eta_max >= 4 and density > 0".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = *params;
    let rho = p.rho;
    let emax = cfg.eta_max;
    let n = cfg.density;
    let mut rows = Vec::new();
    let rand_eta = |rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
        let e = 2.0 * (emax / 2.0).powf(rng.random::<f64>());
        if rng.random::<bool>() { e } else { -e }
    };

    // plateau equality and resonant dip
    let (mut plat, mut dip) = (Acc::new(), Acc::new());
    for i in 0..n {
        let eta = 2.0 + (emax - 2.0) * i as f64 / (n - 1).max(1) as f64;
        for k in 1..=resonant_count(eta) {
            let a = log_q(interval_end(k - 1, eta), eta, rho);
            let b = log_q(interval_end(k, eta), eta, rho);
            plat.push(((a - b).exp() - 1.0).abs());
            let c = log_q(eta / k as f64, eta, rho);
            let want = rho * ((k * k) as f64 / eta).ln();
            dip.push(((c - b) - want).exp_m1().abs());
        }
    }
    rows.push(equality_row("q_plateau", plat, 1e-10, "q equal at consecutive interval ends"));
    rows.push(equality_row("q_dip", dip, 1e-10, "q(η/k)/q(t_k) = (k²/η)^ρ"));

    // size of q at t = 0
    let base = q_size_spread(emax, rho, n.max(16));
    let doubled = q_size_spread(2.0 * emax, rho, n.max(16));
    rows.push(LemmaRow {
        lemma_id: "q_size".into(),
        sample_count: 2 * n.max(16),
        empirical_constant: base,
        max_violation_ratio: doubled / base,
        hard: false,
        passed: base.is_finite(),
        note: "spread of η^ρ e^{-8ρ√η}/q(0,η); max_violation_ratio is its growth under doubling eta_max. \
               q returns to 1 at every interval end, so the spread is not range-stable"
            .into(),
    });

    // |∂t q|/q against ρ/(1+|t−η/k|) on the resonant range
    let mut growth = Acc::new();
    for _ in 0..n {
        let eta = rand_eta(&mut rng).abs().max(16.0);
        let t = 2.0 * eta.sqrt() + (2.0 * eta - 2.0 * eta.sqrt()) * rng.random::<f64>();
        if let Some(k) = resonant_interval(t, eta) {
            let r = q_growth_ratio(t, eta, rho) / (rho / (1.0 + (t - eta / k as f64).abs()));
            growth.push(r.max(1.0 / r));
        }
    }
    rows.push(soft_row("q_growth", growth, "two-sided comparability constant of |∂t q|/q"));

    // exchange of |∂t q|/q between nearby frequencies
    let mut exch = Acc::new();
    for _ in 0..n {
        let eta = rand_eta(&mut rng);
        let xi = eta.signum() * eta.abs() * (0.5 + 1.5 * rng.random::<f64>());
        let t = 2.0 * eta.abs().min(xi.abs()) * rng.random::<f64>();
        let lhs = q_growth_ratio(t, xi, rho).sqrt();
        let rhs = (q_growth_ratio(t, eta, rho).sqrt() + eta.abs().powf(p.s / 2.0) / japanese(t).powf(p.s))
            * japanese(eta - xi);
        exch.push(lhs / rhs);
    }
    rows.push(soft_row("q_exchange", exch, "√(|∂t q|/q)(ξ) against the same at η"));

    // ratio of q at nearby frequencies
    let mut qr = Acc::new();
    for _ in 0..n {
        let eta = rand_eta(&mut rng);
        let xi = eta + (rng.random::<f64>() - 0.5) * 2.0 * eta.abs().sqrt().max(2.0);
        let t = 2.5 * eta.abs().max(xi.abs()) * rng.random::<f64>();
        let l = log_q(t, xi, rho) - log_q(t, eta, rho) - 8.0 * rho * (eta - xi).abs().sqrt();
        qr.push(l.exp());
    }
    rows.push(soft_row("q_ratio", qr, "q(ξ)/q(η) e^{-8ρ|η-ξ|^{1/2}}"));

    // J bounds (stated constant 2)
    let (mut jb, mut jr, mut jt, mut jtr) = (Acc::new(), Acc::new(), Acc::new(), Acc::new());
    for _ in 0..n {
        let eta = rand_eta(&mut rng);
        let k = (rng.random::<f64>() * 200.0).round() - 100.0;
        let t = 2.5 * eta.abs() * rng.random::<f64>();
        let lj = log_j(t, k, eta, rho);
        let upper = (lj - 8.0 * rho * mag(k, eta).sqrt()).exp();
        jb.push(upper.max(2.0 * (-lj).exp()));
        let xi = eta + (rng.random::<f64>() - 0.5) * 20.0;
        let l = k + (rng.random::<f64>() * 20.0).round() - 10.0;
        let r = lj - log_j(t, l, xi, rho) - 8.0 * rho * mag(k - l, eta - xi).sqrt();
        jr.push(r.exp());
        let rt = log_j_tilde(t, eta, rho) - log_j_tilde(t, xi, rho) - 8.0 * rho * (eta - xi).abs().sqrt();
        jtr.push(rt.exp());
        if 4.0 * k.abs() <= eta.abs() {
            jt.push((lj - log_j_tilde(t, eta, rho)).exp());
        }
    }
    rows.push(hard_row("j_bounds", jb, 2.0, "1 ≤ J ≤ 2e^{8ρ|k,η|^{1/2}}"));
    rows.push(hard_row("j_ratio", jr, 2.0, "J(k,η)/J(l,ξ) ≤ 2e^{8ρ|k-l,η-ξ|^{1/2}}"));
    rows.push(hard_row("j_tilde_ratio", jtr, 2.0, "J̃(η)/J̃(ξ) ≤ 2e^{8ρ|η-ξ|^{1/2}}"));
    rows.push(hard_row("j_tilde", jt, 2.0, "J ≤ 2J̃ when 4|k| ≤ |η|"));

    // J commutators
    let (mut jc1, mut jc2) = (Acc::new(), Acc::new());
    for _ in 0..n {
        let eta = rand_eta(&mut rng);
        let xi = eta + (rng.random::<f64>() - 0.5) * 20.0;
        let k = (rng.random::<f64>() * 128.0).round() - 64.0;
        let l = (rng.random::<f64>() * 128.0).round() - 64.0;
        let t = 0.5 * eta.abs().sqrt().min(xi.abs().sqrt()) * rng.random::<f64>();
        let lhs = (log_j(t, k, eta, rho) - log_j(t, l, xi, rho)).exp_m1().abs();
        let rhs = japanese2(eta - xi, k - l) * (100.0 * rho * (eta - xi).abs().sqrt()).exp()
            / (eta.abs() + xi.abs() + k.abs() + l.abs()).sqrt();
        jc1.push(lhs / rhs);

        let kk = (1.0 + rng.random::<f64>() * 200.0).round();
        let ee = (rng.random::<f64>() - 0.5) * 50.0;
        let ll = kk + (rng.random::<f64>() * 20.0).round() - 10.0;
        if 4.0 * ee.abs() <= ll.abs() {
            let xx = ee + (rng.random::<f64>() - 0.5) * 10.0;
            let t2 = 2.5 * ee.abs().max(xx.abs()) * rng.random::<f64>();
            let lhs = (log_j(t2, kk, ee, rho) - log_j(t2, ll, xx, rho)).exp_m1().abs();
            let rhs = japanese(kk - ll) / (rho * kk.sqrt()) * (8.0 * rho * (kk - ll).abs().sqrt()).exp();
            jc2.push(lhs / rhs);
        }
    }
    rows.push(soft_row("j_commutator_early", jc1, "|J(k,η)/J(l,ξ) − 1| for t ≤ ½ min(√|η|, √|ξ|)"));
    rows.push(soft_row("j_commutator_large_l", jc2, "|J(k,η)/J(l,ξ) − 1| for 4|η| ≤ |l|"));

    // m and m̃ bounds, m differences
    let (mut mb, mut mtb, mut md) = (Acc::new(), Acc::new(), Acc::new());
    let c1 = p.c1();
    for _ in 0..n {
        let eta = rand_eta(&mut rng);
        let k = {
            let v = (rng.random::<f64>() * 100.0).round() + 1.0;
            if rng.random::<bool>() { v } else { -v }
        };
        let t = 3.0 * eta.abs() * rng.random::<f64>() + 10.0 * rng.random::<f64>();
        let lm = log_m(t, k, eta, &p);
        let floor = -std::f64::consts::PI / (p.alpha.abs() * k.abs());
        mb.push(lm.exp().max((floor - lm).exp()));
        let lmt = log_m_tilde(t, k, eta, p.alpha)?;
        mtb.push((lmt.exp() / c1).max((-lmt).exp()));
        let l = if rng.random::<f64>() < 0.2 { 0.0 } else { k + (rng.random::<f64>() * 10.0).round() - 5.0 };
        let xi = eta + (rng.random::<f64>() - 0.5) * 10.0;
        if l != k {
            let diff = (m(t, k, eta, &p) - m(t, l, xi, &p)).abs();
            let scale = if l == 0.0 { 1.0 / k.abs() } else { (k - l).abs() / k.abs().min(l.abs()) };
            md.push(diff / scale);
        }
    }
    rows.push(hard_row("m_bounds", mb, 1.0, "e^{-π/(|α||k|)} ≤ m ≤ 1"));
    rows.push(hard_row("m_tilde_bounds", mtb, 1.0, "1 ≤ m̃ ≤ e^{π/(2|α|)}"));
    rows.push(soft_row("m_difference", md, "|m(k,η) − m(l,ξ)| against |k−l|/min(|k|,|l|)"));

    // composite multipliers
    let (mut avg, mut low) = (Acc::new(), Acc::new());
    let low_stated = 2.0 * (std::f64::consts::PI / p.alpha.abs()).exp();
    for _ in 0..n {
        let t = 20.0 * rng.random::<f64>();
        let w = WeightsAt::new(p, t)?;
        let eta = (rng.random::<f64>() - 0.5) * 200.0;
        let xi = (rng.random::<f64>() - 0.5) * 200.0;
        let k = (rng.random::<f64>() * 40.0).round() - 20.0;
        if k != 0.0 {
            let lhs = w.log_a_tilde(0.0, eta);
            let rhs = w.log_a_tilde(k, xi) + w.log_a_tilde(k, eta - xi)
                + log_add_exp(-p.n * japanese2(k, eta).ln(), -p.n * japanese2(k, xi).ln());
            avg.push((lhs - rhs).exp());
            if eta != 0.0 {
                low.push((eta.abs().ln() + w.log_a_lo(0.0, eta)? - w.log_a_tilde(k, eta)).exp());
            }
        }
    }
    rows.push(soft_row("a_tilde_average", avg, "Ã(0,η) against Ã(k,ξ)Ã(k,η−ξ)(⟨k,η⟩^{-N} + ⟨k,ξ⟩^{-N})"));
    rows.push(hard_row("a_lo", low, low_stated, "|η| A^lo(η) ≤ 2e^{π/|α|} Ã(k,η)"));

    let mut lam = Acc::new();
    let floor = lambda_floor(&p);
    let mut track = LambdaTrack::new(p);
    for i in 0..n.min(400) {
        let t = 1e4 * (i as f64 / 400.0).powi(2);
        let l = track.at(t)?;
        lam.push(floor / l);
    }
    rows.push(hard_row("lambda_floor", lam, 1.0, "λ(t) ≥ λ0 − ρ(1 + 4/(2s−1))"));

    Ok(AuditReport { params: p, config: cfg.clone(), rows })
}
