use couette_mhd::weights::{
    interval_end, j, j_tilde, lambda, lambda_floor, m, q, resonant_count, WeightParams, WeightsAt,
};
use proptest::prelude::*;

fn params() -> WeightParams {
    WeightParams::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn j_bounds(t in 0.0f64..2e4, k in -100i64..=100, eta in -1e4f64..1e4) {
        let rho = params().rho;
        let v = j(t, k as f64, eta, rho);
        let mag = ((k * k) as f64 + eta * eta).sqrt();
        prop_assert!(v >= 1.0);
        prop_assert!(v <= 2.0 * (8.0 * rho * mag.sqrt()).exp() * (1.0 + 1e-12));
        prop_assert!(j_tilde(t, eta, rho) <= v);
    }

    #[test]
    fn m_bounds(t in 0.0f64..1e3, k in 1i64..=50, eta in -1e3f64..1e3, alpha in 0.2f64..3.0) {
        let p = WeightParams { alpha, ..params() };
        for kk in [k, -k] {
            let v = m(t, kk as f64, eta, &p);
            prop_assert!(v <= 1.0);
            prop_assert!(v >= (-std::f64::consts::PI / (alpha * k as f64)).exp() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn q_is_bounded_by_one(t in 0.0f64..2e3, eta in -1e3f64..1e3, rho in 0.01f64..1.0) {
        let v = q(t, eta, rho);
        prop_assert!(v > 0.0 && v <= 1.0 + 1e-12);
    }

    #[test]
    fn q_returns_to_one_at_interval_ends(eta in 2.0f64..1e4, rho in 0.01f64..1.0) {
        for k in 0..=resonant_count(eta) {
            prop_assert!((q(interval_end(k, eta), eta, rho) - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn lambda_decreases_above_floor(t1 in 0.0f64..200.0, dt in 0.0f64..200.0) {
        let p = params();
        let (a, b) = (lambda(t1, &p).unwrap(), lambda(t1 + dt, &p).unwrap());
        prop_assert!(b <= a + 1e-12);
        prop_assert!(b >= lambda_floor(&p));
    }

    #[test]
    fn tilde_multiplier_is_smaller(t in 0.0f64..100.0, k in -30i64..=30, eta in -300.0f64..300.0) {
        let w = WeightsAt::new(params(), t).unwrap();
        prop_assert!(w.log_a(k as f64, eta) - w.log_a_tilde(k as f64, eta) >= -1e-12);
    }

    #[test]
    fn multiplier_sandwich(t in 0.0f64..100.0, k in -30i64..=30, eta in -300.0f64..300.0) {
        // e^{−π/|α|} w_λ ≤ A ≤ 2 w_{λ+8ρ}, with w_λ = ⟨k,η⟩^N e^{λ|k,η|^s}
        let p = params();
        let w = WeightsAt::new(p, t).unwrap();
        let (kf, mag2) = (k as f64, (k * k) as f64 + eta * eta);
        let la = w.log_a(kf, eta);
        let base = |lam: f64| 0.5 * p.n * (1.0 + mag2).ln() + lam * mag2.sqrt().powf(p.s);
        prop_assert!(la >= base(w.lambda) - std::f64::consts::PI / p.alpha.abs() - 1e-9);
        if mag2 >= 1.0 {
            prop_assert!(la <= base(w.lambda + 8.0 * p.rho) + 2f64.ln() + 1e-9);
        }
    }
}
