#![allow(dead_code)]

use couette_mhd::spectral::{Grid, SpectralField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random coefficients on every mode.
pub fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> SpectralField {
    SpectralField::from_fn(grid, |_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

/// Random coefficients of a real field restricted to the 2/3 mask.
pub fn random_real_masked(grid: Grid, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut f = random_field(grid, rng);
    f.apply_mask();
    f.enforce_hermitian();
    f
}

/// `Σ_{p+q=n} a_p b_q` over retained `p, q, n`, with integer wavenumbers (no wrap).
pub fn direct_convolution(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let g = a.grid;
    let mut out = SpectralField::zeros(g);
    let modes: Vec<_> = g.modes().filter(|m| g.is_retained(m)).collect();
    for n in &modes {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &modes {
            let (qk, qj) = (n.k - p.k, n.j - p.j);
            if qk.abs() > g.kmax() || qj.abs() > g.jmax() {
                continue;
            }
            acc += a.data[p.idx] * b.get(qk, qj);
        }
        out.data[n.idx] = acc;
    }
    out
}

pub fn max_abs_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
