//! Changes of unknowns between velocity/magnetic fields and the scalar
//! variables that diagonalize the shear coupling.
//!
//! For a sheared-frame divergence-free pair `(v, b)` with zero mean:
//!
//! * `p₁ = Λ⁻¹ ∇⊥·v≠`, `p₂ = Λ⁻¹ ∇⊥·b≠`, so that `v≠ = −∇⊥Λ⁻¹p₁`;
//! * `p̃₁ = p₁ − α⁻¹ ∂y Δ⁻¹ p₂`, `p̃₂ = p₂`;
//! * the `k = 0` column is carried separately as the x-averages `v₁₌`, `b₁₌`
//!   (the second components vanish there by incompressibility).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{curl, leray_project, Grid, Mode, SpectralField};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Sheared-frame velocity and magnetic perturbations.
#[derive(Debug, Clone, PartialEq)]
pub struct MhdState {
    pub t: f64,
    pub v: [SpectralField; 2],
    pub b: [SpectralField; 2],
}

impl MhdState {
    pub fn zeros(grid: Grid, t: f64) -> Self {
        let z = SpectralField::zeros(grid);
        Self { t, v: [z.clone(), z.clone()], b: [z.clone(), z] }
    }

    pub fn grid(&self) -> Grid {
        self.v[0].grid
    }

    pub fn components(&self) -> [&SpectralField; 4] {
        [&self.v[0], &self.v[1], &self.b[0], &self.b[1]]
    }

    pub fn components_mut(&mut self) -> [&mut SpectralField; 4] {
        let [v0, v1] = &mut self.v;
        let [b0, b1] = &mut self.b;
        [v0, v1, b0, b1]
    }

    /// Project both fields onto divergence-free fields at the current time.
    pub fn project(&mut self) {
        self.v = leray_project(&self.v, self.t);
        self.b = leray_project(&self.b, self.t);
    }

    /// `Σ` over components of `Σ w |c|² dη`.
    pub fn weighted_norm_sq(&self, mut w: impl FnMut(&Mode) -> f64) -> f64 {
        self.components().iter().map(|f| f.weighted_norm_sq(&mut w)).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm_sq(|_| 1.0).sqrt()
    }

    /// `H⁻¹` norm with weight `⟨k, η⟩⁻²`.
    pub fn hm1_norm(&self) -> f64 {
        self.weighted_norm_sq(|m| 1.0 / (1.0 + m.magnitude().powi(2))).sqrt()
    }

    /// Vorticity `∇⊥·v` and current `∇⊥·b`.
    pub fn vorticity_current(&self) -> (SpectralField, SpectralField) {
        (curl(&self.v, self.t), curl(&self.b, self.t))
    }

    /// `‖(w, j)‖_{L²}`.
    pub fn vorticity_current_norm(&self) -> f64 {
        let (w, j) = self.vorticity_current();
        (w.norm_sq() + j.norm_sq()).sqrt()
    }

    pub fn max_divergence(&self) -> f64 {
        let d1 = crate::spectral::divergence(&self.v, self.t).max_abs();
        let d2 = crate::spectral::divergence(&self.b, self.t).max_abs();
        d1.max(d2)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|f| f.data.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }
}

/// Scalar unknowns `(p₁, p₂)` plus the x-averages.
#[derive(Debug, Clone, PartialEq)]
pub struct PState {
    pub t: f64,
    pub p1: SpectralField,
    pub p2: SpectralField,
    /// `v₁` on the `k = 0` column, indexed like the y-axis of the grid.
    pub v_avg: Vec<Complex64>,
    pub b_avg: Vec<Complex64>,
}

/// Adapted unknowns `(p̃₁, p̃₂)` plus the x-averages.
#[derive(Debug, Clone, PartialEq)]
pub struct TailoredState {
    pub t: f64,
    pub alpha: f64,
    pub pt1: SpectralField,
    pub pt2: SpectralField,
    pub v_avg: Vec<Complex64>,
    pub b_avg: Vec<Complex64>,
}

impl TailoredState {
    pub fn grid(&self) -> Grid {
        self.pt1.grid
    }

    /// `‖p̃‖_{L²}`.
    pub fn ptilde_norm(&self) -> f64 {
        (self.pt1.norm_sq() + self.pt2.norm_sq()).sqrt()
    }

    /// `‖p̃‖_{H⁻¹}`.
    pub fn ptilde_hm1_norm(&self) -> f64 {
        let w = |m: &Mode| 1.0 / (1.0 + m.magnitude().powi(2));
        (self.pt1.weighted_norm_sq(w) + self.pt2.weighted_norm_sq(w)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        [&self.pt1, &self.pt2].iter().all(|f| f.data.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
            && self.v_avg.iter().chain(&self.b_avg).all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Symbol of `∂y Δ⁻¹` at time `t`: `−i(η−kt)/Λ²` (zero where `Λ = 0`).
pub fn dy_inv_lap_symbol(m: &Mode, t: f64) -> Complex64 {
    let l2 = m.lambda_sq(t);
    if l2 == 0.0 {
        ZERO
    } else {
        -I * m.shifted_eta(t) / l2
    }
}

fn column(f: &SpectralField) -> Vec<Complex64> {
    let g = f.grid;
    (0..g.ny).map(|iy| f.data[iy]).collect()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter("alpha must be nonzero".into()));
    }
    Ok(())
}

/// `Λ⁻¹ ∇⊥·u` restricted to `k ≠ 0`.
fn scalar_of(u: &[SpectralField; 2], t: f64) -> SpectralField {
    let c = curl(u, t);
    c.map_symbol(|m| {
        if m.k == 0 {
            ZERO
        } else {
            Complex64::new(1.0 / m.lambda_sq(t).sqrt(), 0.0)
        }
    })
}

/// `−∇⊥Λ⁻¹p` for `k ≠ 0` and `(avg, 0)` on `k = 0`.
fn field_of(p: &SpectralField, avg: &[Complex64], t: f64) -> [SpectralField; 2] {
    let g = p.grid;
    let mut u = [SpectralField::zeros(g), SpectralField::zeros(g)];
    for m in g.modes() {
        if m.k == 0 {
            if m.j != 0 {
                u[0].data[m.idx] = avg[m.idx];
            }
            continue;
        }
        let l = m.lambda_sq(t).sqrt();
        let c = p.data[m.idx] / l;
        u[0].data[m.idx] = I * m.shifted_eta(t) * c;
        u[1].data[m.idx] = -I * m.k as f64 * c;
    }
    u
}

pub fn to_p(s: &MhdState) -> PState {
    let t = s.t;
    PState {
        t,
        p1: scalar_of(&s.v, t),
        p2: scalar_of(&s.b, t),
        v_avg: column(&s.v[0]),
        b_avg: column(&s.b[0]),
    }
}

pub fn from_p(p: &PState) -> MhdState {
    MhdState { t: p.t, v: field_of(&p.p1, &p.v_avg, p.t), b: field_of(&p.p2, &p.b_avg, p.t) }
}

pub fn p_to_ptilde(p: &PState, alpha: f64) -> Result<TailoredState> {
    check_alpha(alpha)?;
    let t = p.t;
    let mut pt1 = p.p1.clone();
    for m in p.p1.grid.modes() {
        if m.k != 0 {
            pt1.data[m.idx] -= dy_inv_lap_symbol(&m, t) * p.p2.data[m.idx] / alpha;
        }
    }
    Ok(TailoredState {
        t,
        alpha,
        pt1,
        pt2: p.p2.clone(),
        v_avg: p.v_avg.clone(),
        b_avg: p.b_avg.clone(),
    })
}

pub fn ptilde_to_p(s: &TailoredState) -> PState {
    let t = s.t;
    let mut p1 = s.pt1.clone();
    for m in s.pt1.grid.modes() {
        if m.k != 0 {
            p1.data[m.idx] += dy_inv_lap_symbol(&m, t) * s.pt2.data[m.idx] / s.alpha;
        }
    }
    PState { t, p1, p2: s.pt2.clone(), v_avg: s.v_avg.clone(), b_avg: s.b_avg.clone() }
}

pub fn to_ptilde(s: &MhdState, alpha: f64) -> Result<TailoredState> {
    p_to_ptilde(&to_p(s), alpha)
}

pub fn from_ptilde(s: &TailoredState) -> MhdState {
    from_p(&ptilde_to_p(s))
}

/// `ṽ = v + α⁻¹ ∂x⁻¹ b₂ e₁` on `k ≠ 0`.
pub fn adapted_velocity(v: &[SpectralField; 2], b: &[SpectralField; 2], alpha: f64) -> Result<[SpectralField; 2]> {
    check_alpha(alpha)?;
    let mut out = v.clone();
    for m in v[0].grid.modes() {
        if m.k != 0 {
            out[0].data[m.idx] += b[1].data[m.idx] / (alpha * I * m.k as f64);
        }
    }
    Ok(out)
}

/// `p̃₁` computed as `Λ⁻¹∇⊥·ṽ`, independent of the `p` route.
pub fn ptilde1_from_adapted_velocity(s: &MhdState, alpha: f64) -> Result<SpectralField> {
    Ok(scalar_of(&adapted_velocity(&s.v, &s.b, alpha)?, s.t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(8, 8, 1.0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p_of_stream_function_field() {
        // v = −∇⊥Λ⁻¹ψ with ψ(1,2) = 1 gives p₁ = ψ
        let g = grid();
        let mut psi = SpectralField::zeros(g);
        psi.set(1, 2, c(1.0, 0.0)).unwrap();
        let p = PState { t: 0.0, p1: psi.clone(), p2: SpectralField::zeros(g), v_avg: vec![ZERO; 8], b_avg: vec![ZERO; 8] };
        let s = from_p(&p);
        let back = to_p(&s);
        assert!((back.p1.get(1, 2) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.max_divergence() < 1e-15);
    }

    #[test]
    fn ptilde_correction_example() {
        // p₂(1,2) = 1, t = 0, α = 2: p̃₁ = p₁ + (i·2/5)/2
        let g = grid();
        let mut p2 = SpectralField::zeros(g);
        p2.set(1, 2, c(1.0, 0.0)).unwrap();
        let p = PState { t: 0.0, p1: SpectralField::zeros(g), p2, v_avg: vec![ZERO; 8], b_avg: vec![ZERO; 8] };
        let pt = p_to_ptilde(&p, 2.0).unwrap();
        assert!((pt.pt1.get(1, 2) - c(0.0, 0.2)).norm() < 1e-15);
        assert!(p_to_ptilde(&p, 0.0).is_err());
    }

    #[test]
    fn vorticity_norm_of_single_mode() {
        let g = grid();
        let t = 2.5;
        let mut p1 = SpectralField::zeros(g);
        p1.set(1, 0, c(1.0, 0.0)).unwrap();
        let s = from_p(&PState { t, p1, p2: SpectralField::zeros(g), v_avg: vec![ZERO; 8], b_avg: vec![ZERO; 8] });
        assert!((s.vorticity_current_norm() - (1.0 + t * t).sqrt()).abs() < 1e-13);
    }
}
