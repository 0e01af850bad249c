//! Initial data generators.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::diagnostics::gevrey_norm_state;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField, Snapshot};
use crate::unknowns::MhdState;
use crate::weights::{japanese2, mag};

/// Random mean-free, divergence-free data with Gevrey-decaying envelope
/// `e^{−λ₁|k,η|^s} ⟨k,η⟩^{−N−2}`, rescaled to `‖(v,b)‖_{G^{λ₁}} = ε`.
pub fn gevrey_random(grid: Grid, seed: u64, eps: f64, lambda1: f64, s: f64, n: f64) -> Result<MhdState> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = MhdState::zeros(grid, 0.0);
    for f in st.components_mut() {
        for m in grid.modes() {
            if !grid.is_retained(&m) || (m.k == 0 && m.j == 0) {
                continue;
            }
            let k = m.k as f64;
            let env = (-lambda1 * mag(k, m.eta).powf(s)).exp() * japanese2(k, m.eta).powf(-(n + 2.0));
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            f.data[m.idx] = env * Complex64::new(re, im);
        }
        f.enforce_hermitian();
    }
    st.project();
    let norm = gevrey_norm_state(&st, lambda1, s, n);
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter("grid has no admissible modes".into()));
    }
    for f in st.components_mut() {
        f.scale(eps / norm);
    }
    Ok(st)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// Velocity, through `p₁`.
    Velocity,
    /// Magnetic field, through `p₂`.
    Magnetic,
}

/// A real divergence-free field carried by the modes `±(k, j)` with
/// `Λ⁻¹∇⊥·u = amplitude` at `(k, j)`. `k = 0` sets the x-average of the first component.
pub fn single_mode(grid: Grid, k: i64, j: i64, amplitude: f64, component: Component) -> Result<MhdState> {
    let idx = grid
        .index_of(k, j)
        .ok_or_else(|| Error::InvalidParameter(format!("mode ({k}, {j}) not on grid")))?;
    let m = grid.mode(idx);
    if !grid.is_retained(&m) || (k == 0 && j == 0) {
        return Err(Error::InvalidParameter(format!("mode ({k}, {j}) is not a retained nonzero mode")));
    }
    let mut st = MhdState::zeros(grid, 0.0);
    let set = |u: &mut [SpectralField; 2]| {
        let a = Complex64::new(amplitude, 0.0);
        if k == 0 {
            u[0].data[idx] = a;
        } else {
            let l = m.lambda_sq(0.0).sqrt();
            u[0].data[idx] = Complex64::new(0.0, m.eta) * a / l;
            u[1].data[idx] = Complex64::new(0.0, -(k as f64)) * a / l;
        }
        for f in u.iter_mut() {
            f.enforce_hermitian();
            f.scale(2.0);
        }
    };
    match component {
        Component::Velocity => set(&mut st.v),
        Component::Magnetic => set(&mut st.b),
    }
    Ok(st)
}

/// State stored under the field names `v1, v2, b1, b2`.
pub fn from_snapshot(snap: &Snapshot) -> Result<MhdState> {
    let get = |name: &str| {
        snap.field(name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("snapshot lacks field {name}")))
    };
    Ok(MhdState { t: snap.t, v: [get("v1")?, get("v2")?], b: [get("b1")?, get("b2")?] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unknowns::to_p;

    #[test]
    fn random_data_is_normalized_and_admissible() {
        let g = Grid::new(16, 16, 1.0).unwrap();
        let st = gevrey_random(g, 3, 1e-3, 1.5, 0.6, 5.0).unwrap();
        assert!((gevrey_norm_state(&st, 1.5, 0.6, 5.0) / 1e-3 - 1.0).abs() < 1e-12);
        assert!(st.max_divergence() <= 1e-12 * st.l2_norm());
        for f in st.components() {
            assert_eq!(f.get(0, 0), Complex64::new(0.0, 0.0));
            assert!(f.hermitian_defect() == 0.0);
        }
        assert_eq!(st, gevrey_random(g, 3, 1e-3, 1.5, 0.6, 5.0).unwrap());
        assert_ne!(st, gevrey_random(g, 4, 1e-3, 1.5, 0.6, 5.0).unwrap());
    }

    #[test]
    fn single_mode_has_requested_scalar() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let st = single_mode(g, 1, 2, 0.3, Component::Magnetic).unwrap();
        let p = to_p(&st);
        assert!((p.p2.get(1, 2) - Complex64::new(0.3, 0.0)).norm() < 1e-15);
        assert!((p.p2.get(-1, -2) - Complex64::new(0.3, 0.0)).norm() < 1e-15);
        assert_eq!(p.p1.max_abs(), 0.0);
        assert!(single_mode(g, 0, 0, 1.0, Component::Velocity).is_err());
        assert!(single_mode(g, 4, 0, 1.0, Component::Velocity).is_err());
    }
}
