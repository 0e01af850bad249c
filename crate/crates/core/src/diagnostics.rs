//! Norms, weighted energies and consistency checks along trajectories.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Nonlinearity, SymbolVariant};
use crate::error::{Error, Result};
use crate::spectral::{Dealiaser, Grid, Mode, SpectralField};
use crate::unknowns::{from_ptilde, MhdState, TailoredState};
use crate::weights::{self, japanese2, mag, WeightParams, WeightsAt};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `log(⟨k,η⟩^{2N} e^{2λ|k,η|^s})`.
fn log_gevrey_weight_sq(m: &Mode, lambda: f64, s: f64, n: f64) -> f64 {
    let k = m.k as f64;
    2.0 * n * japanese2(k, m.eta).ln() + 2.0 * lambda * mag(k, m.eta).powf(s)
}

/// `‖f‖_{G^λ} = (Σ ⟨k,η⟩^{2N} e^{2λ|k,η|^s} |f̂|² dη)^{1/2}`.
pub fn gevrey_norm(f: &SpectralField, lambda: f64, s: f64, n: f64) -> f64 {
    f.weighted_norm_sq(|m| log_gevrey_weight_sq(m, lambda, s, n).exp()).sqrt()
}

pub fn gevrey_norm_state(st: &MhdState, lambda: f64, s: f64, n: f64) -> f64 {
    st.weighted_norm_sq(|m| log_gevrey_weight_sq(m, lambda, s, n).exp()).sqrt()
}

/// `Σ exp(x_i)` for possibly large `x_i`, returned as a log.
fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.filter(|x| *x > f64::NEG_INFINITY).collect();
    let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    mx + v.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

/// Every `(mode, |U|²)` pair of the adapted state: `p̃` on `k ≠ 0`, the
/// x-averages on `k = 0`.
fn amplitudes(s: &TailoredState) -> Vec<(Mode, f64)> {
    let g = s.grid();
    g.modes()
        .filter(|m| !(m.k == 0 && m.j == 0))
        .map(|m| {
            let a = if m.k == 0 {
                s.v_avg[m.idx].norm_sqr() + s.b_avg[m.idx].norm_sqr()
            } else {
                s.pt1.data[m.idx].norm_sqr() + s.pt2.data[m.idx].norm_sqr()
            };
            (m, a)
        })
        .filter(|(_, a)| *a > 0.0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energies {
    /// `‖A (p̃, v₌, b₌)‖²`.
    pub e: f64,
    /// `‖A^lo (v₌, b₌)‖²`.
    pub e_lo: f64,
    pub log_e: f64,
    pub log_e_lo: f64,
}

pub fn energies(s: &TailoredState, w: &WeightsAt) -> Result<Energies> {
    let amps = amplitudes(s);
    let de = s.grid().d_eta().ln();
    let log_e = log_sum_exp(amps.iter().map(|(m, a)| 2.0 * w.log_a(m.k as f64, m.eta) + a.ln())) + de;
    let mut lo = Vec::new();
    for (m, a) in amps.iter().filter(|(m, _)| m.k == 0) {
        lo.push(2.0 * w.log_a_lo(0.0, m.eta)? + a.ln());
    }
    let log_e_lo = log_sum_exp(lo.into_iter()) + de;
    Ok(Energies { e: log_e.exp(), e_lo: log_e_lo.exp(), log_e, log_e_lo })
}

/// Terms of the energy balance at one instant (ideal case):
///
/// `dE/dt + 2|λ'|‖Λ^{s/2}AU‖² + 2Σ(∂t q/q)AÃ|U|² = 2L + 2NL + 2ONL`
///
/// where `Λ^{s/2}` is the unsheared `|k,η|^{s/2}` and
/// `L = Re⟨Ap̃₁, σAp̃₂⟩ + Σ(∂t m/m)A²|U|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceTerms {
    pub energy: f64,
    pub lambda_term: f64,
    pub q_term: f64,
    pub linear: f64,
    pub nonlinear: f64,
    pub other_nonlinear: f64,
}

impl BalanceTerms {
    /// `2L + 2NL + 2ONL − (λ-term + q-term)`, the predicted `dE/dt`.
    pub fn predicted_rate(&self) -> f64 {
        2.0 * (self.linear + self.nonlinear + self.other_nonlinear) - self.lambda_term - self.q_term
    }

    pub fn scale(&self) -> f64 {
        self.lambda_term.abs()
            + self.q_term.abs()
            + 2.0 * (self.linear.abs() + self.nonlinear.abs() + self.other_nonlinear.abs())
    }
}

/// `Re⟨A a¹, A(a²·∇a³) − a²·∇(A a³)⟩` by pseudo-spectral products.
fn commutator_pairing(
    d: &Dealiaser,
    a_of: &dyn Fn(&Mode) -> f64,
    a1: &[SpectralField; 2],
    a2: &[SpectralField; 2],
    a3: &[SpectralField; 2],
    t: f64,
) -> f64 {
    let mut total = 0.0;
    for i in 0..2 {
        let wa3 = a3[i].map_symbol(|m| Complex64::new(a_of(m), 0.0));
        let adv = |f: &SpectralField| {
            let mut r = d.product(&a2[0], &f.dx());
            r.axpy(1.0, &d.product(&a2[1], &f.dy(t)));
            r
        };
        let mut c = adv(&a3[i]).map_symbol(|m| Complex64::new(a_of(m), 0.0));
        c.axpy(-1.0, &adv(&wa3));
        let wa1 = a1[i].map_symbol(|m| Complex64::new(a_of(m), 0.0));
        total += wa1.inner(&c);
    }
    total
}

/// Commutator form of the paired quadratic terms, summed over the four
/// interactions `(v,b,b)`, `(v,v,v)`, `(b,b,v)`, `(b,v,b)`.
pub fn paired_nonlinear(d: &Dealiaser, w: &WeightsAt, st: &MhdState) -> f64 {
    let a = |m: &Mode| w.log_a(m.k as f64, m.eta).exp();
    let t = st.t;
    commutator_pairing(d, &a, &st.v, &st.b, &st.b, t) - commutator_pairing(d, &a, &st.v, &st.v, &st.v, t)
        + commutator_pairing(d, &a, &st.b, &st.b, &st.v, t)
        - commutator_pairing(d, &a, &st.b, &st.v, &st.b, t)
}

pub fn balance_terms(s: &TailoredState, w: &WeightsAt, symbol: SymbolVariant, nl: &Nonlinearity) -> Result<BalanceTerms> {
    let g = s.grid();
    let t = s.t;
    let p = &w.params;
    let alpha = s.alpha;
    let de = g.d_eta();
    let (mut energy, mut lam, mut qt, mut lin) = (0.0, 0.0, 0.0, 0.0);
    for (m, amp) in amplitudes(s) {
        let (k, eta) = (m.k as f64, m.eta);
        let a2 = (2.0 * w.log_a(k, eta)).exp();
        energy += a2 * amp;
        lam += 2.0 * w.lambda_rate.abs() * mag(k, eta).powf(p.s) * a2 * amp;
        qt += 2.0
            * weights::q_log_derivative(t, eta, p.rho)
            * weights::j_tilde_over_j(t, k, eta, p.rho)
            * a2
            * amp;
        lin += weights::m_log_derivative(t, k, eta, p) * a2 * amp;
        if m.k != 0 {
            let sigma = symbol.symbol(&m, t, alpha);
            lin += (a2 * s.pt1.data[m.idx].conj() * sigma * s.pt2.data[m.idx]).re;
        }
    }
    let fields = from_ptilde(s);
    let nonlinear = paired_nonlinear(nl.dealiaser(), w, &fields);
    let (nv, nb) = nl.terms(&fields.v, &fields.b, t);
    let mut other = 0.0;
    for m in g.modes() {
        if m.k == 0 || !g.is_retained(&m) {
            continue;
        }
        let i = m.idx;
        let l2 = m.lambda_sq(t);
        let l = l2.sqrt();
        let (ik, iz) = (I * m.k as f64, I * m.shifted_eta(t));
        let n1 = (ik * nv[1].data[i] - iz * nv[0].data[i]) / l;
        let n2 = (ik * nb[1].data[i] - iz * nb[0].data[i]) / l;
        let corr = iz / (alpha * l2);
        let a2 = (2.0 * w.log_a(m.k as f64, m.eta)).exp();
        other += (a2 * ((corr * s.pt2.data[i]).conj() * n1 + s.pt1.data[i].conj() * corr * n2)).re;
    }
    Ok(BalanceTerms {
        energy: energy * de,
        lambda_term: lam * de,
        q_term: qt * de,
        linear: lin * de,
        nonlinear,
        other_nonlinear: other * de,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    /// Largest `|dE/dt − predicted| / scale` over the accepted sample times.
    pub max_relative_residual: f64,
    pub samples_used: usize,
    /// Sample times skipped because the stencil crosses a corner of q.
    pub samples_skipped: usize,
}

/// Check the energy balance along equally spaced samples `h` apart, using a
/// fourth-order centred difference for `dE/dt`.
pub fn balance_residual(
    traj: &[TailoredState],
    h: f64,
    params: &WeightParams,
    symbol: SymbolVariant,
    nl: &Nonlinearity,
) -> Result<BalanceReport> {
    if traj.len() < 5 {
        return Err(Error::InvalidParameter("need at least five samples".into()));
    }
    let g = traj[0].grid();
    let mut corners: Vec<f64> = Vec::new();
    for j in 0..=g.jmax() {
        corners.extend(weights::q_breakpoints(g.eta_of_j(j)));
    }
    let mut track = weights::LambdaTrack::new(*params);
    let mut es = Vec::with_capacity(traj.len());
    let mut ws = Vec::with_capacity(traj.len());
    for s in traj {
        let w = WeightsAt::with_lambda(*params, s.t, track.at(s.t)?);
        es.push(energies(s, &w)?.e);
        ws.push(w);
    }
    let (mut worst, mut used, mut skipped) = (0.0f64, 0, 0);
    for i in 2..traj.len() - 2 {
        let (lo, hi) = (traj[i - 2].t, traj[i + 2].t);
        if corners.iter().any(|&c| c > lo - 1e-12 && c < hi + 1e-12) {
            skipped += 1;
            continue;
        }
        let de = (es[i - 2] - 8.0 * es[i - 1] + 8.0 * es[i + 1] - es[i + 2]) / (12.0 * h);
        let b = balance_terms(&traj[i], &ws[i], symbol, nl)?;
        let r = (de - b.predicted_rate()).abs() / (b.scale() + de.abs());
        worst = worst.max(r);
        used += 1;
    }
    Ok(BalanceReport { max_relative_residual: worst, samples_used: used, samples_skipped: skipped })
}

// ---------------------------------------------------------------------------
// Frequency partition of the paired quadratic terms

/// Region of an interaction between output `(k,η)` and input `(l,ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    /// `k − l = 0`: the low-frequency factor is an x-average.
    Average,
    /// Low-frequency factor much larger than the high one, on the
    /// resonant cone.
    Reaction,
    /// Low-frequency factor much smaller than the high one.
    Transport,
    /// Comparable frequencies, or large factor off the resonant cone.
    Remainder,
}

/// Classify `(k, η, l, ξ)`. Ties go to `Reaction`/`Transport`, which makes
/// the three non-average regions disjoint.
pub fn classify(k: f64, eta: f64, l: f64, xi: f64) -> Region {
    if k == l {
        return Region::Average;
    }
    let ra = mag(k - l, eta - xi);
    let rb = mag(l, xi);
    let cone = 4.0 * (1.0 + k * k).sqrt() <= eta.abs() && 4.0 * (k - l).abs() <= (eta - xi).abs();
    if ra >= 8.0 * rb {
        if cone {
            Region::Reaction
        } else {
            Region::Remainder
        }
    } else if 8.0 * ra <= rb {
        Region::Transport
    } else {
        Region::Remainder
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// Paired quadratic terms from the pseudo-spectral route.
    pub total: f64,
    pub reaction: f64,
    pub transport: f64,
    pub remainder: f64,
    pub average: f64,
    /// `|R + T + ℛ + NL₌ − NL| / |NL|`.
    pub relative_error: f64,
}

/// Direct triple sum of one commutator interaction, split by region.
fn split_pairing(
    g: &Grid,
    a_of: &dyn Fn(f64, f64) -> f64,
    a1: &[SpectralField; 2],
    a2: &[SpectralField; 2],
    a3: &[SpectralField; 2],
    t: f64,
    acc: &mut [f64; 4],
) {
    let retained: Vec<Mode> = g.modes().filter(|m| g.is_retained(m)).collect();
    let de = g.d_eta();
    for mo in &retained {
        let ak = a_of(mo.k as f64, mo.eta);
        let w1 = [a1[0].data[mo.idx].conj() * ak, a1[1].data[mo.idx].conj() * ak];
        if w1[0] == ZERO && w1[1] == ZERO {
            continue;
        }
        for mi in &retained {
            let (dk, dj) = (mo.k - mi.k, mo.j - mi.j);
            if dk.abs() > g.kmax() || dj.abs() > g.jmax() {
                continue;
            }
            let li = g.index_of(dk, dj).expect("retained difference lies on grid");
            let adv = a2[0].data[li] * I * mi.k as f64 + a2[1].data[li] * I * mi.shifted_eta(t);
            if adv == ZERO {
                continue;
            }
            let diff = ak - a_of(mi.k as f64, mi.eta);
            let v = ((w1[0] * a3[0].data[mi.idx] + w1[1] * a3[1].data[mi.idx]) * adv * diff).re * de;
            let slot = match classify(mo.k as f64, mo.eta, mi.k as f64, mi.eta) {
                Region::Reaction => 0,
                Region::Transport => 1,
                Region::Remainder => 2,
                Region::Average => 3,
            };
            acc[slot] += v;
        }
    }
}

pub fn nl_partition_check(st: &MhdState, w: &WeightsAt) -> PartitionReport {
    let g = st.grid();
    let t = st.t;
    let d = Dealiaser::new(g);
    let total = paired_nonlinear(&d, w, st);
    let a_of = |k: f64, eta: f64| w.log_a(k, eta).exp();
    let mut acc = [0.0; 4];
    let mut neg = [0.0; 4];
    split_pairing(&g, &a_of, &st.v, &st.b, &st.b, t, &mut acc);
    split_pairing(&g, &a_of, &st.v, &st.v, &st.v, t, &mut neg);
    split_pairing(&g, &a_of, &st.b, &st.b, &st.v, t, &mut acc);
    split_pairing(&g, &a_of, &st.b, &st.v, &st.b, t, &mut neg);
    let parts: Vec<f64> = (0..4).map(|i| acc[i] - neg[i]).collect();
    let sum: f64 = parts.iter().sum();
    let relative_error = if total == 0.0 { sum.abs() } else { (sum - total).abs() / total.abs() };
    PartitionReport {
        total,
        reaction: parts[0],
        transport: parts[1],
        remainder: parts[2],
        average: parts[3],
        relative_error,
    }
}

// ---------------------------------------------------------------------------
// Bootstrap bookkeeping

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRow {
    pub t: f64,
    pub energy: f64,
    pub energy_lo: f64,
    /// `∫ |λ'| ‖Λ^{s/2} A U‖² dt`.
    pub lambda_integral: f64,
    /// `∫ ‖√(|∂t q|/q) Ã U‖² dt`.
    pub q_integral: f64,
    /// `(E + integrals) / (C* ε²)`.
    pub high_ratio: f64,
    /// `E_lo / (C* ln(e+t)² c0⁻² ε⁴)`.
    pub low_ratio: f64,
}

/// Accumulates the bootstrap quantities along a trajectory.
#[derive(Debug, Clone)]
pub struct BootstrapMonitor {
    params: WeightParams,
    cstar: f64,
    track: weights::LambdaTrack,
    last: Option<(f64, f64, f64)>,
    lambda_integral: f64,
    q_integral: f64,
    pub rows: Vec<BootstrapRow>,
}

impl BootstrapMonitor {
    pub fn new(params: WeightParams, cstar: f64) -> Self {
        Self {
            params,
            cstar,
            track: weights::LambdaTrack::new(params),
            last: None,
            lambda_integral: 0.0,
            q_integral: 0.0,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, s: &TailoredState) -> Result<BootstrapRow> {
        let p = self.params;
        let t = s.t;
        let w = WeightsAt::with_lambda(p, t, self.track.at(t)?);
        let en = energies(s, &w)?;
        let (mut lam, mut qd) = (0.0, 0.0);
        for (m, amp) in amplitudes(s) {
            let (k, eta) = (m.k as f64, m.eta);
            lam += w.lambda_rate.abs() * mag(k, eta).powf(p.s) * (2.0 * w.log_a(k, eta)).exp() * amp;
            qd += weights::q_growth_ratio(t, eta, p.rho) * (2.0 * w.log_a_tilde(k, eta)).exp() * amp;
        }
        let de = s.grid().d_eta();
        let (lam, qd) = (lam * de, qd * de);
        if let Some((t0, l0, q0)) = self.last {
            let h = t - t0;
            self.lambda_integral += 0.5 * h * (l0 + lam);
            self.q_integral += 0.5 * h * (q0 + qd);
        }
        self.last = Some((t, lam, qd));
        let eps = p.eps;
        let row = BootstrapRow {
            t,
            energy: en.e,
            energy_lo: en.e_lo,
            lambda_integral: self.lambda_integral,
            q_integral: self.q_integral,
            high_ratio: (en.e + self.lambda_integral + self.q_integral) / (self.cstar * eps * eps),
            low_ratio: en.e_lo
                / (self.cstar * (std::f64::consts::E + t).ln().powi(2) * eps.powi(4) / (p.c0 * p.c0)),
        };
        self.rows.push(row);
        Ok(row)
    }
}

// ---------------------------------------------------------------------------
// Growth fit

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub degenerate: bool,
}

/// Least-squares fit `y ≈ a + b x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> GrowthFit {
    let n = xs.len().min(ys.len());
    let degenerate = GrowthFit { intercept: 0.0, slope: 0.0, r_squared: 0.0, degenerate: true };
    if n < 2 {
        return degenerate;
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (xs[i] - mx, ys[i] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return GrowthFit { intercept: my, ..degenerate };
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = (0..n).map(|i| (ys[i] - intercept - slope * xs[i]).powi(2)).sum();
    GrowthFit { intercept, slope, r_squared: 1.0 - ss_res / syy, degenerate: false }
}

/// Fit `‖(w,j)(t)‖ / norm_in` against `⟨t⟩`; fewer than ten samples is degenerate.
pub fn growth_fit(times: &[f64], wj: &[f64], norm_in: f64) -> GrowthFit {
    if times.len() < 10 || times.len() != wj.len() || !(norm_in > 0.0) {
        return GrowthFit { intercept: 0.0, slope: 0.0, r_squared: 0.0, degenerate: true };
    }
    let xs: Vec<f64> = times.iter().map(|t| weights::japanese(*t)).collect();
    let ys: Vec<f64> = wj.iter().map(|v| v / norm_in).collect();
    linear_fit(&xs, &ys)
}

/// One row of the per-sample diagnostics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2: f64,
    pub hm1: f64,
    pub vorticity_current: f64,
    pub gevrey: f64,
    pub energy: f64,
    pub energy_lo: f64,
    pub lambda_integral: f64,
    pub q_integral: f64,
}

impl DiagnosticsRecord {
    pub const HEADER: &'static str = "t,l2,hm1,vorticity_current,gevrey,energy,energy_lo,lambda_integral,q_integral";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.t,
            self.l2,
            self.hm1,
            self.vorticity_current,
            self.gevrey,
            self.energy,
            self.energy_lo,
            self.lambda_integral,
            self.q_integral
        )
    }
}
