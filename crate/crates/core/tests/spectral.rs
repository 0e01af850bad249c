mod common;

use couette_mhd::spectral::{curl, divergence, leray_project, perp_grad, Dealiaser, Grid, SpectralField, Transform};
use num_complex::Complex64;
use proptest::prelude::*;

use common::{direct_convolution, max_abs_diff, random_field, random_real_masked, rng};

fn grids() -> impl Strategy<Value = Grid> {
    (2usize..=8, 2usize..=8, 0.5f64..3.0).prop_map(|(a, b, ly)| Grid::new(2 * a, 2 * b, ly).unwrap())
}

#[test]
fn curl_of_perp_grad_single_modes() {
    // curl(∇⊥φ) = Δφ: −1 for (1,0) and −29 for (2,5) at t = 0
    let g = Grid::new(16, 16, 1.0).unwrap();
    for (k, j, want) in [(1, 0, -1.0), (2, 5, -29.0)] {
        let mut phi = SpectralField::zeros(g);
        phi.set(k, j, Complex64::new(1.0, 0.0)).unwrap();
        let c = curl(&perp_grad(&phi, 0.0), 0.0);
        assert!((c.get(k, j) - Complex64::new(want, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn padded_products_on_small_grids() {
    // 12 points with kmax = 4 needs a larger product grid
    let g = Grid::new(12, 12, 1.0).unwrap();
    let d = Dealiaser::new(g);
    assert_eq!(d.product_shape(), (14, 14));
    let mut r = rng(3);
    let (a, b) = (random_real_masked(g, &mut r), random_real_masked(g, &mut r));
    assert!(max_abs_diff(&d.product(&a, &b), &direct_convolution(&a, &b)) < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_roundtrip(g in grids(), seed in any::<u64>()) {
        let tr = Transform::new(g);
        let f = random_field(g, &mut rng(seed));
        let back = tr.from_physical(&tr.to_physical(&f));
        prop_assert!(max_abs_diff(&f, &back) <= 1e-12 * f.max_abs());
    }

    #[test]
    fn product_matches_direct_convolution(g in grids(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_real_masked(g, &mut r), random_real_masked(g, &mut r));
        let want = direct_convolution(&a, &b);
        let got = Dealiaser::new(g).product(&a, &b);
        prop_assert!(max_abs_diff(&got, &want) <= 1e-12 * want.max_abs().max(1e-300));
    }

    #[test]
    fn product_of_real_fields_is_real(g in grids(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_real_masked(g, &mut r), random_real_masked(g, &mut r));
        let p = Dealiaser::new(g).product(&a, &b);
        prop_assert!(p.hermitian_defect() <= 1e-14);
    }

    #[test]
    fn projection_removes_divergence(g in grids(), seed in any::<u64>(), t in -3.0f64..3.0) {
        let mut r = rng(seed);
        let u = [random_field(g, &mut r), random_field(g, &mut r)];
        let p = leray_project(&u, t);
        let scale = u[0].max_abs().max(u[1].max_abs());
        prop_assert!(divergence(&p, t).max_abs() <= 1e-12 * scale * 10.0 * (1.0 + t.abs()) * g.nx.max(g.ny) as f64);
        let pp = leray_project(&p, t);
        prop_assert!(max_abs_diff(&p[0], &pp[0]).max(max_abs_diff(&p[1], &pp[1])) <= 1e-12 * scale);
    }

    #[test]
    fn laplacian_inverse(g in grids(), seed in any::<u64>(), t in 0.0f64..5.0) {
        let mut f = random_field(g, &mut rng(seed));
        f.set(0, 0, Complex64::new(0.0, 0.0)).unwrap();
        let back = f.laplacian(t).inv_laplacian(t);
        prop_assert!(max_abs_diff(&f, &back) <= 1e-12 * f.max_abs());
    }
}
