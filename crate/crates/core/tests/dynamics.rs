use couette_mhd::diagnostics::{classify, Region};
use couette_mhd::dynamics::{DynamicsConfig, Nonlinearity, Solver};
use couette_mhd::initial::gevrey_random;
use couette_mhd::spectral::Grid;
use couette_mhd::unknowns::{from_ptilde, to_ptilde, MhdState};
use couette_mhd::weights::mag;
use proptest::prelude::*;

fn state(grid: Grid, seed: u64, eps: f64, t: f64) -> MhdState {
    let mut s = gevrey_random(grid, seed, eps, 1.0, 0.6, 5.0).unwrap();
    s.t = t;
    s.project();
    s
}

fn max_diff(a: &MhdState, b: &MhdState) -> f64 {
    a.components()
        .iter()
        .zip(b.components())
        .flat_map(|(x, y)| x.data.iter().zip(&y.data).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

#[test]
fn quadratic_terms_conserve_energy() {
    let grid = Grid::new(24, 24, 1.0).unwrap();
    let nl = Nonlinearity::new(grid);
    for (seed, t) in [(1, 0.0), (2, 0.7), (3, -1.3)] {
        let s = state(grid, seed, 1.0, t);
        let (nv, nb) = nl.terms(&s.v, &s.b, t);
        let pair: f64 = (0..2).map(|i| s.v[i].inner(&nv[i]) + s.b[i].inner(&nb[i])).sum();
        let scale: f64 = (0..2).map(|i| nv[i].norm_sq().sqrt() + nb[i].norm_sq().sqrt()).sum::<f64>() * s.l2_norm();
        assert!(pair.abs() <= 1e-13 * scale, "seed {seed}: {pair:e} vs {scale:e}");
    }
}

#[test]
fn ideal_linear_flow_keeps_divergence_free() {
    let grid = Grid::new(16, 16, 1.0).unwrap();
    let cfg = DynamicsConfig { nonlinear: false, dt: 0.01, ..DynamicsConfig::default() };
    let solver = Solver::new(grid, cfg).unwrap();
    let out = solver.advance_vb(&state(grid, 4, 1e-2, 0.0), 1.0).unwrap();
    assert!(out.max_divergence() < 1e-12);
}

#[test]
fn both_formulations_agree_on_short_run() {
    let grid = Grid::new(16, 16, 1.0).unwrap();
    let cfg = DynamicsConfig { dt: 0.005, ..DynamicsConfig::default() };
    let solver = Solver::new(grid, cfg).unwrap();
    let s0 = state(grid, 7, 1e-2, 0.0);
    let a = solver.advance_vb(&s0, 1.0).unwrap();
    let b = from_ptilde(&solver.advance_ptilde(&to_ptilde(&s0, cfg.alpha).unwrap(), 1.0).unwrap());
    assert!(max_diff(&a, &b) <= 1e-9 * s0.l2_norm(), "{:e}", max_diff(&a, &b));
}

#[test]
fn solver_is_deterministic() {
    let grid = Grid::new(16, 16, 1.0).unwrap();
    let solver = Solver::new(grid, DynamicsConfig::default()).unwrap();
    let s0 = to_ptilde(&state(grid, 9, 1e-2, 0.0), 1.0).unwrap();
    assert_eq!(solver.advance_ptilde(&s0, 0.5).unwrap(), solver.advance_ptilde(&s0, 0.5).unwrap());
}

#[test]
fn invalid_dynamics_are_rejected() {
    let grid = Grid::new(16, 16, 1.0).unwrap();
    for cfg in [
        DynamicsConfig { alpha: 0.0, ..DynamicsConfig::default() },
        DynamicsConfig { nu: -1.0, ..DynamicsConfig::default() },
        DynamicsConfig { dt: 0.0, ..DynamicsConfig::default() },
    ] {
        assert!(Solver::new(grid, cfg).is_err());
    }
}

proptest! {
    #[test]
    fn classification_matches_its_defining_inequalities(
        k in -8i64..8, l in -8i64..8, eta in -200.0f64..200.0, xi in -200.0f64..200.0,
    ) {
        let (kf, lf) = (k as f64, l as f64);
        let ra = mag(kf - lf, eta - xi);
        let rb = mag(lf, xi);
        match classify(kf, eta, lf, xi) {
            Region::Average => prop_assert_eq!(k, l),
            Region::Reaction => {
                prop_assert!(ra >= 8.0 * rb);
                prop_assert!(4.0 * (1.0 + kf * kf).sqrt() <= eta.abs());
                prop_assert!(4.0 * (kf - lf).abs() <= (eta - xi).abs());
            }
            Region::Transport => prop_assert!(8.0 * ra <= rb),
            Region::Remainder => prop_assert!(k != l),
        }
    }
}

#[test]
fn formulations_agree_with_unequal_dissipation() {
    let grid = Grid::new(16, 16, 1.0).unwrap();
    let cfg = DynamicsConfig { nu: 0.02, kappa: 0.005, dt: 0.005, ..DynamicsConfig::default() };
    let solver = Solver::new(grid, cfg).unwrap();
    let s0 = state(grid, 8, 1e-2, 0.0);
    let a = solver.advance_vb(&s0, 1.0).unwrap();
    let b = from_ptilde(&solver.advance_ptilde(&to_ptilde(&s0, cfg.alpha).unwrap(), 1.0).unwrap());
    assert!(max_diff(&a, &b) <= 1e-9 * s0.l2_norm(), "{:e}", max_diff(&a, &b));
}
