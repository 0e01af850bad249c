mod common;

use couette_mhd::spectral::{divergence, Grid};
use couette_mhd::unknowns::{
    from_p, from_ptilde, p_to_ptilde, ptilde1_from_adapted_velocity, ptilde_to_p, to_p, to_ptilde, MhdState,
};
use proptest::prelude::*;

use common::{max_abs_diff, random_real_masked, rng};

fn random_state(g: Grid, seed: u64, t: f64) -> MhdState {
    let mut r = rng(seed);
    let mut s = MhdState::zeros(g, t);
    for f in s.components_mut() {
        *f = random_real_masked(g, &mut r);
        f.data[0] = Default::default();
    }
    s.project();
    s
}

fn state_diff(a: &MhdState, b: &MhdState) -> f64 {
    a.components().iter().zip(b.components()).map(|(x, y)| max_abs_diff(x, y)).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn p_roundtrip(seed in any::<u64>(), t in -4.0f64..8.0) {
        let g = Grid::new(16, 12, 1.7).unwrap();
        let s = random_state(g, seed, t);
        prop_assert!(state_diff(&s, &from_p(&to_p(&s))) <= 1e-13);
    }

    #[test]
    fn ptilde_roundtrip(seed in any::<u64>(), t in -4.0f64..8.0, alpha in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0]) {
        let g = Grid::new(12, 16, 0.8).unwrap();
        let s = random_state(g, seed, t);
        let back = from_ptilde(&to_ptilde(&s, alpha).unwrap());
        prop_assert!(state_diff(&s, &back) <= 1e-12);
        let p = to_p(&s);
        let pp = ptilde_to_p(&p_to_ptilde(&p, alpha).unwrap());
        prop_assert!(max_abs_diff(&p.p1, &pp.p1) <= 1e-13);
    }

    #[test]
    fn ptilde_agrees_with_adapted_velocity(seed in any::<u64>(), t in 0.0f64..6.0, alpha in 0.3f64..2.0) {
        let g = Grid::new(16, 16, 1.0).unwrap();
        let s = random_state(g, seed, t);
        let a = to_ptilde(&s, alpha).unwrap().pt1;
        let b = ptilde1_from_adapted_velocity(&s, alpha).unwrap();
        prop_assert!(max_abs_diff(&a, &b) <= 1e-12 * a.max_abs().max(1e-300));
    }

    #[test]
    fn reconstructed_fields_are_divergence_free(seed in any::<u64>(), t in -2.0f64..6.0) {
        let g = Grid::new(16, 16, 1.0).unwrap();
        let s = from_p(&to_p(&random_state(g, seed, t)));
        prop_assert!(divergence(&s.v, t).max_abs() <= 1e-13);
        prop_assert!(divergence(&s.b, t).max_abs() <= 1e-13);
    }

    #[test]
    fn p_preserves_l2_norm(seed in any::<u64>(), t in -2.0f64..6.0) {
        // ‖v‖ = ‖p₁‖ + averages since v = −∇⊥Λ⁻¹p₁ is an isometry off k = 0
        let g = Grid::new(16, 16, 1.0).unwrap();
        let s = random_state(g, seed, t);
        let p = to_p(&s);
        let avg: f64 = (0..g.ny).map(|iy| p.v_avg[iy].norm_sqr() + p.b_avg[iy].norm_sqr()).sum::<f64>() * g.d_eta();
        let lhs = s.l2_norm().powi(2);
        let rhs = p.p1.norm_sq() + p.p2.norm_sq() + avg;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }
}
