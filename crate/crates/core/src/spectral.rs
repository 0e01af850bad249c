//! Fourier representation on the doubly periodic box `[0, 2π) × [0, 2π·Ly)`.
//!
//! Coefficients are stored in FFT order: index `ix * ny + iy`, where
//! `k = ix` for `ix < nx/2` and `k = ix - nx` otherwise (same for `j`).
//! The y-frequency is `η = j / Ly`. Physical values are
//! `f(x, y) = Σ c(k, j) e^{i(kx + ηy)}`.
//!
//! Derivatives are taken in the sheared frame: `∂x → ik`, `∂y → i(η − kt)`.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
}

/// One Fourier mode of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub idx: usize,
    pub k: i64,
    pub j: i64,
    pub eta: f64,
}

impl Mode {
    /// `η − kt`, the y-frequency seen from the sheared frame.
    pub fn shifted_eta(&self, t: f64) -> f64 {
        self.eta - self.k as f64 * t
    }

    /// `Λ_t² = k² + (η − kt)²`.
    pub fn lambda_sq(&self, t: f64) -> f64 {
        let z = self.shifted_eta(t);
        (self.k * self.k) as f64 + z * z
    }

    /// `|k, η|`, the unsheared frequency magnitude.
    pub fn magnitude(&self) -> f64 {
        ((self.k * self.k) as f64 + self.eta * self.eta).sqrt()
    }
}

impl Grid {
    pub fn new(nx: usize, ny: usize, ly: f64) -> Result<Self> {
        if nx < 4 || ny < 4 || !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "nx and ny must be even and at least 4, got {nx} x {ny}"
            )));
        }
        if !(ly.is_finite() && ly > 0.0) {
            return Err(Error::InvalidGrid(format!("ly must be positive, got {ly}")));
        }
        Ok(Self { nx, ny, ly })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k_of(&self, ix: usize) -> i64 {
        wrap(ix, self.nx)
    }

    pub fn j_of(&self, iy: usize) -> i64 {
        wrap(iy, self.ny)
    }

    pub fn eta_of_j(&self, j: i64) -> f64 {
        j as f64 / self.ly
    }

    /// Spacing of the discrete η lattice; multiplies every ℓ² sum.
    pub fn d_eta(&self) -> f64 {
        1.0 / self.ly
    }

    pub fn mode(&self, idx: usize) -> Mode {
        let (ix, iy) = (idx / self.ny, idx % self.ny);
        let j = self.j_of(iy);
        Mode { idx, k: self.k_of(ix), j, eta: self.eta_of_j(j) }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    /// Index of `(k, j)`, or `None` if outside the representable range.
    pub fn index_of(&self, k: i64, j: i64) -> Option<usize> {
        let (hx, hy) = ((self.nx / 2) as i64, (self.ny / 2) as i64);
        if k < -hx || k >= hx || j < -hy || j >= hy {
            return None;
        }
        let ix = k.rem_euclid(self.nx as i64) as usize;
        let iy = j.rem_euclid(self.ny as i64) as usize;
        Some(ix * self.ny + iy)
    }

    /// Largest retained |k| under the 2/3 rule.
    pub fn kmax(&self) -> i64 {
        (self.nx / 3) as i64
    }

    /// Largest retained |j| under the 2/3 rule.
    pub fn jmax(&self) -> i64 {
        (self.ny / 3) as i64
    }

    pub fn is_retained(&self, m: &Mode) -> bool {
        m.k.abs() <= self.kmax() && m.j.abs() <= self.jmax()
    }

    pub fn is_nyquist(&self, m: &Mode) -> bool {
        m.k == -((self.nx / 2) as i64) || m.j == -((self.ny / 2) as i64)
    }

    /// Index of the mode `(−k, −j)`, if representable.
    pub fn partner(&self, m: &Mode) -> Option<usize> {
        self.index_of(-m.k, -m.j)
    }

    /// Largest retained `|k, η − kt|` (used by the step-size bound).
    pub fn max_retained_wavenumber(&self, t: f64) -> f64 {
        self.modes()
            .filter(|m| self.is_retained(m))
            .map(|m| m.lambda_sq(t).sqrt())
            .fold(0.0, f64::max)
    }
}

fn wrap(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Coefficients of one scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    pub data: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, data: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(&Mode) -> Complex64) -> Self {
        let data = grid.modes().map(|m| f(&m)).collect();
        Self { grid, data }
    }

    pub fn get(&self, k: i64, j: i64) -> Complex64 {
        self.grid
            .index_of(k, j)
            .map(|i| self.data[i])
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn set(&mut self, k: i64, j: i64, v: Complex64) -> Result<()> {
        let i = self
            .grid
            .index_of(k, j)
            .ok_or_else(|| Error::InvalidParameter(format!("mode ({k}, {j}) not on grid")))?;
        self.data[i] = v;
        Ok(())
    }

    /// Multiply each coefficient by `f(mode)`.
    pub fn map_symbol(&self, mut f: impl FnMut(&Mode) -> Complex64) -> Self {
        let grid = self.grid;
        let data = grid.modes().zip(&self.data).map(|(m, c)| f(&m) * c).collect();
        Self { grid, data }
    }

    /// Zero every coefficient outside the 2/3-rule mask (this includes Nyquist).
    pub fn apply_mask(&mut self) {
        let grid = self.grid;
        for m in grid.modes() {
            if !grid.is_retained(&m) {
                self.data[m.idx] = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn zero_nyquist(&mut self) {
        let grid = self.grid;
        for m in grid.modes() {
            if grid.is_nyquist(&m) {
                self.data[m.idx] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Project onto coefficients of a real field: `c(−k,−j) = conj c(k,j)`.
    pub fn enforce_hermitian(&mut self) {
        let grid = self.grid;
        let old = self.data.clone();
        for m in grid.modes() {
            self.data[m.idx] = match grid.partner(&m) {
                Some(p) => 0.5 * (old[m.idx] + old[p].conj()),
                None => Complex64::new(0.0, 0.0),
            };
        }
    }

    /// Largest violation of Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        self.grid
            .modes()
            .map(|m| match self.grid.partner(&m) {
                Some(p) => (self.data[m.idx] - self.data[p].conj()).norm(),
                None => self.data[m.idx].norm(),
            })
            .fold(0.0, f64::max)
    }

    pub fn dx(&self) -> Self {
        self.map_symbol(|m| I * m.k as f64)
    }

    pub fn dy(&self, t: f64) -> Self {
        self.map_symbol(|m| I * m.shifted_eta(t))
    }

    pub fn laplacian(&self, t: f64) -> Self {
        self.map_symbol(|m| Complex64::new(-m.lambda_sq(t), 0.0))
    }

    /// `Δ_t⁻¹`, zero on the mode with `Λ_t = 0`.
    pub fn inv_laplacian(&self, t: f64) -> Self {
        self.map_symbol(|m| {
            let l2 = m.lambda_sq(t);
            Complex64::new(if l2 > 0.0 { -1.0 / l2 } else { 0.0 }, 0.0)
        })
    }

    /// `Λ_t^p`, zero on the mode with `Λ_t = 0`.
    pub fn lambda_pow(&self, t: f64, p: f64) -> Self {
        self.map_symbol(|m| {
            let l2 = m.lambda_sq(t);
            Complex64::new(if l2 > 0.0 { l2.powf(0.5 * p) } else { 0.0 }, 0.0)
        })
    }

    /// `Σ |c|² · dη`.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.d_eta()
    }

    /// `Σ w(mode) |c|² · dη`.
    pub fn weighted_norm_sq(&self, mut w: impl FnMut(&Mode) -> f64) -> f64 {
        self.grid
            .modes()
            .zip(&self.data)
            .map(|(m, c)| {
                let n = c.norm_sqr();
                if n == 0.0 {
                    0.0
                } else {
                    w(&m) * n
                }
            })
            .sum::<f64>()
            * self.grid.d_eta()
    }

    /// Complex pairing `Σ conj(a) b · dη`.
    pub fn pairing(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum::<Complex64>()
            * self.grid.d_eta()
    }

    /// Real inner product `Re Σ conj(a) b · dη`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.pairing(other).re
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        for (y, xv) in self.data.iter_mut().zip(&x.data) {
            *y += a * xv;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for y in &mut self.data {
            *y *= a;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Divergence `ik u₁ + i(η−kt) u₂`.
pub fn divergence(u: &[SpectralField; 2], t: f64) -> SpectralField {
    let mut d = u[0].dx();
    d.axpy(1.0, &u[1].dy(t));
    d
}

/// Scalar curl `∂x u₂ − ∂y u₁`, i.e. `∇⊥·u` with `∇⊥ = (−∂y, ∂x)`.
pub fn curl(u: &[SpectralField; 2], t: f64) -> SpectralField {
    let mut c = u[1].dx();
    c.axpy(-1.0, &u[0].dy(t));
    c
}

/// `∇⊥φ = (−∂y φ, ∂x φ)`.
pub fn perp_grad(phi: &SpectralField, t: f64) -> [SpectralField; 2] {
    let mut a = phi.dy(t);
    a.scale(-1.0);
    [a, phi.dx()]
}

pub fn grad(phi: &SpectralField, t: f64) -> [SpectralField; 2] {
    [phi.dx(), phi.dy(t)]
}

/// Orthogonal projection onto sheared-frame divergence-free fields,
/// `u − ∇Δ⁻¹(∇·u)`. The mean mode is left unchanged.
pub fn leray_project(u: &[SpectralField; 2], t: f64) -> [SpectralField; 2] {
    let grid = u[0].grid;
    let mut out = u.clone();
    for m in grid.modes() {
        let l2 = m.lambda_sq(t);
        if l2 == 0.0 {
            continue;
        }
        let (a, b) = (m.k as f64, m.shifted_eta(t));
        let d = a * u[0].data[m.idx] + b * u[1].data[m.idx];
        out[0].data[m.idx] -= a * d / l2;
        out[1].data[m.idx] -= b * d / l2;
    }
    out
}

/// Planned 2D complex FFT on an `mx × my` array stored row-major.
#[derive(Clone)]
pub struct Fft2 {
    mx: usize,
    my: usize,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Fft2({} x {})", self.mx, self.my)
    }
}

impl Fft2 {
    pub fn new(mx: usize, my: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            mx,
            my,
            fwd_x: planner.plan_fft_forward(mx),
            inv_x: planner.plan_fft_inverse(mx),
            fwd_y: planner.plan_fft_forward(my),
            inv_y: planner.plan_fft_inverse(my),
        }
    }

    fn run(&self, buf: &mut [Complex64], x: &Arc<dyn Fft<f64>>, y: &Arc<dyn Fft<f64>>) {
        y.process(buf);
        let mut col = vec![Complex64::new(0.0, 0.0); self.mx];
        for iy in 0..self.my {
            for ix in 0..self.mx {
                col[ix] = buf[ix * self.my + iy];
            }
            x.process(&mut col);
            for ix in 0..self.mx {
                buf[ix * self.my + iy] = col[ix];
            }
        }
    }

    /// Unnormalized forward transform, `Σ f e^{−i(...)}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.fwd_x, &self.fwd_y);
    }

    /// Unnormalized inverse transform, `Σ c e^{+i(...)}`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.inv_x, &self.inv_y);
    }
}

/// Transforms on the native grid.
#[derive(Debug, Clone)]
pub struct Transform {
    grid: Grid,
    fft: Fft2,
}

impl Transform {
    pub fn new(grid: Grid) -> Self {
        Self { grid, fft: Fft2::new(grid.nx, grid.ny) }
    }

    /// Values at `x = 2π ix / nx`, `y = 2π Ly iy / ny`.
    pub fn to_physical(&self, f: &SpectralField) -> Vec<Complex64> {
        let mut buf = f.data.clone();
        self.fft.inverse(&mut buf);
        buf
    }

    pub fn from_physical(&self, vals: &[Complex64]) -> SpectralField {
        let mut buf = vals.to_vec();
        self.fft.forward(&mut buf);
        let s = 1.0 / self.grid.len() as f64;
        for c in &mut buf {
            *c *= s;
        }
        SpectralField { grid: self.grid, data: buf }
    }
}

/// Size of the product grid along one axis: the native size when the 2/3
/// mask is already alias-free (`3·kmax < n`), otherwise the smallest even
/// size that is.
pub fn product_size(n: usize, kmax: i64) -> usize {
    let need = 3 * kmax as usize + 1;
    if n >= need {
        n
    } else {
        need + need % 2
    }
}

/// Pseudo-spectral products restricted to the 2/3 mask.
///
/// Inputs are masked before transforming and outputs are masked after, so
/// a product equals the exact convolution of the masked inputs restricted
/// to retained modes.
#[derive(Debug, Clone)]
pub struct Dealiaser {
    grid: Grid,
    mx: usize,
    my: usize,
    fft: Fft2,
    /// `(native index, product-grid index)` for each retained mode.
    map: Vec<(usize, usize)>,
}

impl Dealiaser {
    pub fn new(grid: Grid) -> Self {
        let mx = product_size(grid.nx, grid.kmax());
        let my = product_size(grid.ny, grid.jmax());
        let map = grid
            .modes()
            .filter(|m| grid.is_retained(m))
            .map(|m| {
                let ix = m.k.rem_euclid(mx as i64) as usize;
                let iy = m.j.rem_euclid(my as i64) as usize;
                (m.idx, ix * my + iy)
            })
            .collect();
        Self { grid, mx, my, fft: Fft2::new(mx, my), map }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn product_shape(&self) -> (usize, usize) {
        (self.mx, self.my)
    }

    pub fn to_physical(&self, f: &SpectralField) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.mx * self.my];
        for &(n, p) in &self.map {
            buf[p] = f.data[n];
        }
        self.fft.inverse(&mut buf);
        buf
    }

    /// Physical values of two real fields from one complex transform.
    pub fn to_physical_pair(&self, a: &SpectralField, b: &SpectralField) -> (Vec<f64>, Vec<f64>) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.mx * self.my];
        for &(n, p) in &self.map {
            buf[p] = a.data[n] + I * b.data[n];
        }
        self.fft.inverse(&mut buf);
        (buf.iter().map(|z| z.re).collect(), buf.iter().map(|z| z.im).collect())
    }

    pub fn from_physical(&self, vals: &[Complex64]) -> SpectralField {
        let mut buf = vals.to_vec();
        self.fft.forward(&mut buf);
        let s = 1.0 / (self.mx * self.my) as f64;
        let mut out = SpectralField::zeros(self.grid);
        for &(n, p) in &self.map {
            out.data[n] = buf[p] * s;
        }
        out
    }

    /// Coefficients of two real fields from one complex transform.
    pub fn from_physical_pair(&self, a: &[f64], b: &[f64]) -> (SpectralField, SpectralField) {
        let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.fft.forward(&mut buf);
        let s = 1.0 / (self.mx * self.my) as f64;
        let (mut fa, mut fb) = (SpectralField::zeros(self.grid), SpectralField::zeros(self.grid));
        let (mx, my) = (self.mx as i64, self.my as i64);
        for &(n, p) in &self.map {
            let m = self.grid.mode(n);
            let q = ((-m.k).rem_euclid(mx) * my + (-m.j).rem_euclid(my)) as usize;
            let (z, zc) = (buf[p], buf[q].conj());
            fa.data[n] = 0.5 * (z + zc) * s;
            fb.data[n] = -0.5 * I * (z - zc) * s;
        }
        (fa, fb)
    }

    pub fn product(&self, a: &SpectralField, b: &SpectralField) -> SpectralField {
        let pa = self.to_physical(a);
        let pb = self.to_physical(b);
        let prod: Vec<Complex64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        self.from_physical(&prod)
    }
}

/// Write named fields as text: two header lines, then
/// `field,k,eta_index,re,im` rows for every nonzero coefficient.
pub fn write_snapshot<W: Write>(w: &mut W, t: f64, fields: &[(&str, &SpectralField)]) -> Result<()> {
    write_snapshot_annotated(w, t, fields, &[])
}

/// As [`write_snapshot`], with extra `# ` comment lines after the grid header.
pub fn write_snapshot_annotated<W: Write>(
    w: &mut W,
    t: f64,
    fields: &[(&str, &SpectralField)],
    notes: &[String],
) -> Result<()> {
    let grid = fields
        .first()
        .map(|f| f.1.grid)
        .ok_or_else(|| Error::InvalidParameter("no fields to write".into()))?;
    writeln!(w, "# couette-mhd snapshot v1")?;
    writeln!(w, "# nx={} ny={} ly={} t={}", grid.nx, grid.ny, grid.ly, t)?;
    for n in notes {
        writeln!(w, "# {n}")?;
    }
    writeln!(w, "field,k,eta_index,re,im")?;
    for (name, f) in fields {
        if f.grid != grid {
            return Err(Error::GridMismatch);
        }
        for m in grid.modes() {
            let c = f.data[m.idx];
            if c.re != 0.0 || c.im != 0.0 {
                writeln!(w, "{},{},{},{},{}", name, m.k, m.j, c.re, c.im)?;
            }
        }
    }
    Ok(())
}

/// Parsed snapshot: time and named fields in file order.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub fields: Vec<(String, SpectralField)>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&SpectralField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

pub fn read_snapshot<R: BufRead>(r: R) -> Result<Snapshot> {
    let mut lines = r.lines();
    let bad = |s: &str| Error::Parse(s.to_string());
    let magic = lines.next().ok_or_else(|| bad("empty snapshot"))??;
    if magic.trim() != "# couette-mhd snapshot v1" {
        return Err(bad("unrecognized snapshot header"));
    }
    let header = lines.next().ok_or_else(|| bad("missing grid header"))??;
    let (mut nx, mut ny, mut ly, mut t) = (None, None, None, None);
    for kv in header.trim_start_matches('#').split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| bad("malformed header entry"))?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad("malformed header value"));
        match k {
            "nx" => nx = Some(num(v)? as usize),
            "ny" => ny = Some(num(v)? as usize),
            "ly" => ly = Some(num(v)?),
            "t" => t = Some(num(v)?),
            _ => {}
        }
    }
    let grid = Grid::new(
        nx.ok_or_else(|| bad("missing nx"))?,
        ny.ok_or_else(|| bad("missing ny"))?,
        ly.ok_or_else(|| bad("missing ly"))?,
    )?;
    let t = t.ok_or_else(|| bad("missing t"))?;
    let mut fields: Vec<(String, SpectralField)> = Vec::new();
    let mut seen_columns = false;
    for line in lines {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_columns {
            seen_columns = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(bad("expected 5 columns"));
        }
        let k: i64 = cols[1].trim().parse().map_err(|_| bad("bad k"))?;
        let j: i64 = cols[2].trim().parse().map_err(|_| bad("bad eta_index"))?;
        let re: f64 = cols[3].trim().parse().map_err(|_| bad("bad re"))?;
        let im: f64 = cols[4].trim().parse().map_err(|_| bad("bad im"))?;
        let name = cols[0].trim();
        let pos = match fields.iter().position(|(n, _)| n == name) {
            Some(p) => p,
            None => {
                fields.push((name.to_string(), SpectralField::zeros(grid)));
                fields.len() - 1
            }
        };
        fields[pos].1.set(k, j, Complex64::new(re, im))?;
    }
    Ok(Snapshot { t, fields })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(5, 8, 1.0).is_err());
        assert!(Grid::new(2, 8, 1.0).is_err());
        assert!(Grid::new(8, 8, 0.0).is_err());
        assert!(Grid::new(8, 8, 1.0).is_ok());
    }

    #[test]
    fn mask_bounds() {
        let g = Grid::new(12, 12, 1.0).unwrap();
        assert_eq!((g.kmax(), g.jmax()), (4, 4));
        let g = Grid::new(6, 8, 1.0).unwrap();
        assert_eq!(g.kmax(), 2);
        let n = g.modes().filter(|m| g.is_retained(m)).count();
        assert_eq!(n, 5 * 5);
        assert!(g.modes().filter(|m| g.is_nyquist(m)).all(|m| !g.is_retained(&m)));
    }

    #[test]
    fn index_roundtrip() {
        let g = Grid::new(8, 6, 2.0).unwrap();
        for m in g.modes() {
            assert_eq!(g.index_of(m.k, m.j), Some(m.idx));
            assert_eq!(m.eta, m.j as f64 / 2.0);
        }
        assert_eq!(g.index_of(4, 0), None);
    }

    #[test]
    fn curl_of_perp_grad_is_laplacian() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let mut phi = SpectralField::zeros(g);
        phi.set(1, 0, c(1.0, 0.0)).unwrap();
        let w = curl(&perp_grad(&phi, 0.0), 0.0);
        assert!((w.get(1, 0) - c(-1.0, 0.0)).norm() < 1e-15);

        let mut phi = SpectralField::zeros(g);
        phi.set(2, 1, c(1.0, 0.0)).unwrap();
        let w = curl(&perp_grad(&phi, 3.0), 3.0);
        // Λ² = 4 + (1 − 6)² = 29
        assert!((w.get(2, 1) - c(-29.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn shear_moves_eta() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let m = g.mode(g.index_of(1, 2).unwrap());
        assert_eq!(m.shifted_eta(2.0), 0.0);
        assert_eq!(m.lambda_sq(2.0), 1.0);
    }

    #[test]
    fn projection_is_divergence_free_and_idempotent() {
        let g = Grid::new(8, 8, 1.0).unwrap();
        let mk = |s: f64| SpectralField::from_fn(g, |m| c(s * (m.k as f64) + 0.3, m.eta - 0.7 * s));
        let u = [mk(1.0), mk(-2.0)];
        let t = 1.3;
        let p = leray_project(&u, t);
        assert!(divergence(&p, t).max_abs() < 1e-12);
        let pp = leray_project(&p, t);
        for i in 0..2 {
            let mut d = pp[i].clone();
            d.axpy(-1.0, &p[i]);
            assert!(d.max_abs() < 1e-12);
        }
    }

    #[test]
    fn product_size_is_alias_free() {
        assert_eq!(product_size(64, 21), 64);
        assert_eq!(product_size(12, 4), 14);
        assert_eq!(product_size(6, 2), 8);
    }

    #[test]
    fn snapshot_roundtrip() {
        let g = Grid::new(8, 6, 1.5).unwrap();
        let f = SpectralField::from_fn(g, |m| c(m.k as f64 * 0.1, 1.0 / (1.0 + m.eta.abs())));
        let mut buf = Vec::new();
        write_snapshot(&mut buf, 2.5, &[("v1", &f), ("b2", &f)]).unwrap();
        let s = read_snapshot(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(s.t, 2.5);
        assert_eq!(s.field("v1").unwrap(), &f);
        assert_eq!(s.field("b2").unwrap(), &f);
    }

    #[test]
    fn snapshot_rejects_garbage() {
        assert!(read_snapshot(std::io::Cursor::new("hello\n")).is_err());
        let text = "# couette-mhd snapshot v1\n# nx=8 ny=8 ly=1 t=0\nfield,k,eta_index,re,im\nv1,9,0,1,0\n";
        assert!(read_snapshot(std::io::Cursor::new(text)).is_err());
    }
}
