//! Periodic divergence-free vector fields on `[0, 2π)³` stored as Fourier
//! coefficients, with Littlewood–Paley tools, the Bony blocks, a small
//! pseudo-spectral Navier–Stokes solver and the off-diagonal scaling fit.
//!
//! Conventions: `u(x) = Σ_k û(k) e^{ik·x}`; index `i` on an axis of length
//! `M` carries frequency `i` for `i ≤ M/2` and `i - M` otherwise; the Ḣˢ norm
//! is `(Σ_{k≠0} |k|^{2s}|û(k)|²)^{1/2}` with no volume factor.

mod block;
mod fft;
mod io;
mod scaling;
mod solver;

pub use block::{bilinear_block, full_nonlinearity, BlockSpec, Method, Paraproduct, Zone};
pub use fft::Fft3;
pub use io::{load_trajectory, save_trajectory, Manifest};
pub use scaling::{offdiag_block, scaling_fit, ScalingFit, ScalingRow};
pub use solver::{energy_rate, ns_nonlinearity, ns_run, run_from, InitialData, NsConfig, Trajectory};

use crate::freqgeo::Tile;
use crate::profile::{lp_phi, psi};
use crate::vec3;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Coeffs = [Vec<Complex64>; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    m: usize,
    pub coeffs: Coeffs,
    pub divergence_free: bool,
}

/// Largest dealiased frequency per axis, `⌊(M-1)/3⌋`.
pub fn band(m: usize) -> i64 {
    ((m - 1) / 3) as i64
}

/// Checks `N` is a power of two and returns its exponent.
pub fn dyad_exponent(n: u32) -> Result<u32> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        Err(Error::NotDyadic(n))
    }
}

#[inline]
pub fn knorm(k: &[i64; 3]) -> f64 {
    ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt()
}

impl SpectralField {
    pub fn zeros(m: usize) -> Self {
        assert!(m >= 2 && m % 2 == 0, "grid must be even");
        let z = vec![Complex64::new(0.0, 0.0); m * m * m];
        SpectralField { m, coeffs: [z.clone(), z.clone(), z], divergence_free: true }
    }

    pub fn grid(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m * self.m * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        if i <= self.m / 2 {
            i as i64
        } else {
            i as i64 - self.m as i64
        }
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let m = self.m;
        [self.freq(idx / (m * m)), self.freq((idx / m) % m), self.freq(idx % m)]
    }

    #[inline]
    pub fn index_of(&self, k: &[i64; 3]) -> usize {
        let m = self.m as i64;
        let w = |c: i64| c.rem_euclid(m) as usize;
        (w(k[0]) * self.m + w(k[1])) * self.m + w(k[2])
    }

    pub fn get(&self, k: &[i64; 3]) -> [Complex64; 3] {
        let i = self.index_of(k);
        [self.coeffs[0][i], self.coeffs[1][i], self.coeffs[2][i]]
    }

    pub fn set(&mut self, k: &[i64; 3], v: [Complex64; 3]) {
        let i = self.index_of(k);
        for c in 0..3 {
            self.coeffs[c][i] = v[c];
        }
    }

    /// Sets `û(k) = v` and `û(-k) = conj(v)`.
    pub fn set_real_pair(&mut self, k: &[i64; 3], v: [Complex64; 3]) {
        self.set(k, v);
        self.set(&[-k[0], -k[1], -k[2]], [v[0].conj(), v[1].conj(), v[2].conj()]);
    }

    /// Multiplies each mode by the scalar `w(k)`.
    pub fn multiplier<F: Fn(&[i64; 3]) -> f64>(&self, w: F) -> SpectralField {
        let mut out = self.clone();
        for idx in 0..self.len() {
            let f = w(&self.wavevector(idx));
            for c in 0..3 {
                out.coeffs[c][idx] *= f;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> SpectralField {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            for v in c.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn add(&self, o: &SpectralField) -> Result<SpectralField> {
        if self.m != o.m {
            return Err(Error::GridMismatch(self.m, o.m));
        }
        let mut out = self.clone();
        for c in 0..3 {
            for (a, b) in out.coeffs[c].iter_mut().zip(&o.coeffs[c]) {
                *a += b;
            }
        }
        out.divergence_free = self.divergence_free && o.divergence_free;
        Ok(out)
    }

    /// Zeroes every mode outside the dealiased cube `|k_i| ≤ band(M)`.
    pub fn truncated(&self) -> SpectralField {
        let k = band(self.m);
        self.multiplier(|q| if q.iter().all(|c| c.abs() <= k) { 1.0 } else { 0.0 })
    }

    /// Largest `|û(k) - conj(û(-k))|` relative to the largest coefficient.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for idx in 0..self.len() {
            let k = self.wavevector(idx);
            let j = self.index_of(&[-k[0], -k[1], -k[2]]);
            for c in 0..3 {
                worst = worst.max((self.coeffs[c][idx] - self.coeffs[c][j].conj()).norm());
                scale = scale.max(self.coeffs[c][idx].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// `(Σ|k·û|²)^{1/2} / (Σ|k|²|û|²)^{1/2}`, zero for the zero field.
    pub fn divergence_defect(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for idx in 0..self.len() {
            let k = self.wavevector(idx);
            let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
            let d: Complex64 = (0..3).map(|c| self.coeffs[c][idx] * kf[c]).sum();
            num += d.norm_sqr();
            den += vec3::dot(&kf, &kf) * (0..3).map(|c| self.coeffs[c][idx].norm_sqr()).sum::<f64>();
        }
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }

    /// Real-space samples of each component on the `M³` grid.
    pub fn to_real(&self, fft: &Fft3) -> [Vec<f64>; 3] {
        let mut out: [Vec<f64>; 3] = Default::default();
        for c in 0..3 {
            let mut buf = self.coeffs[c].clone();
            fft.inverse(&mut buf);
            out[c] = buf.iter().map(|v| v.re).collect();
        }
        out
    }

    pub fn from_real(m: usize, fft: &Fft3, u: &[Vec<f64>; 3]) -> SpectralField {
        let mut f = SpectralField::zeros(m);
        let inv = 1.0 / (m * m * m) as f64;
        for c in 0..3 {
            let mut buf: Vec<Complex64> = u[c].iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft.forward(&mut buf);
            f.coeffs[c] = buf.into_iter().map(|v| v * inv).collect();
        }
        f.divergence_free = f.divergence_defect() < 1e-12;
        f
    }

    /// Max of `|u(x)|` over grid points.
    pub fn max_velocity(&self, fft: &Fft3) -> f64 {
        let u = self.to_real(fft);
        (0..self.len())
            .map(|i| (u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i]).sqrt())
            .fold(0.0, f64::max)
    }

    /// Random-phase divergence-free field on the dealiased cube with
    /// `|û(k)| ∝ |k|^{-exponent}`, scaled to unit L² norm times `amplitude`.
    pub fn random_divergence_free(m: usize, exponent: f64, amplitude: f64, seed: u64) -> SpectralField {
        let mut f = SpectralField::zeros(m);
        let kb = band(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in -kb..=kb {
            for b in -kb..=kb {
                for c in -kb..=kb {
                    let k = [a, b, c];
                    if k <= [0, 0, 0] {
                        continue;
                    }
                    let kf = [a as f64, b as f64, c as f64];
                    let kk = vec3::dot(&kf, &kf);
                    let mut v = [Complex64::new(0.0, 0.0); 3];
                    for x in v.iter_mut() {
                        *x = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                    }
                    let dot: Complex64 = (0..3).map(|i| v[i] * kf[i]).sum::<Complex64>() / kk;
                    for i in 0..3 {
                        v[i] -= dot * kf[i];
                    }
                    let len = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    let target = kk.sqrt().powf(-exponent);
                    for x in v.iter_mut() {
                        *x *= target / len;
                    }
                    f.set_real_pair(&k, v);
                }
            }
        }
        let l2 = sobolev_norm(&f, 0.0);
        if l2 > 0.0 {
            f = f.scaled(amplitude / l2);
        }
        f.divergence_free = true;
        f
    }

    /// Taylor–Green vortex `A(sin x cos y cos z, -cos x sin y cos z, 0)`.
    pub fn taylor_green(m: usize, amplitude: f64) -> SpectralField {
        let mut f = SpectralField::zeros(m);
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                for sz in [-1i64, 1] {
                    let ux = Complex64::new(0.0, -(sx as f64) * amplitude / 8.0);
                    let uy = Complex64::new(0.0, (sy as f64) * amplitude / 8.0);
                    f.set(&[sx, sy, sz], [ux, uy, Complex64::new(0.0, 0.0)]);
                }
            }
        }
        f
    }
}

/// `(Σ_{k≠0} |k|^{2s}|û(k)|²)^{1/2}`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let mut acc = 0.0;
    for idx in 0..f.len() {
        let k = f.wavevector(idx);
        if k == [0, 0, 0] {
            continue;
        }
        let e: f64 = (0..3).map(|c| f.coeffs[c][idx].norm_sqr()).sum();
        if e != 0.0 {
            acc += knorm(&k).powf(2.0 * s) * e;
        }
    }
    acc.sqrt()
}

/// `P_N f = φ(|D|/N) f`; requires `2N ≤ M/2`.
pub fn lp_project(f: &SpectralField, n: u32) -> Result<SpectralField> {
    dyad_exponent(n)?;
    if 4 * n as usize > f.grid() {
        return Err(Error::DyadTooLarge { dyad: n, grid: f.grid() });
    }
    let nf = n as f64;
    Ok(f.multiplier(|k| lp_phi(knorm(k) / nf)))
}

/// Smooth angular cutoff to the double cap `±tile`: 1 within the radius,
/// 0 beyond twice the radius.
pub fn angular_weight(k: &[i64; 3], tile: &Tile) -> f64 {
    let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
    if k == &[0, 0, 0] {
        return 0.0;
    }
    let a = vec3::angle(&kf, &tile.center);
    let a = a.min(std::f64::consts::PI - a);
    1.0 - psi(a / tile.radius)
}

pub fn angular_project(f: &SpectralField, tile: &Tile) -> SpectralField {
    f.multiplier(|k| angular_weight(k, tile))
}

/// Modewise `Π_k`; the zero mode is left unchanged.
pub fn leray_project_field(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    for idx in 0..f.len() {
        let k = f.wavevector(idx);
        if k == [0, 0, 0] {
            continue;
        }
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let kk = vec3::dot(&kf, &kf);
        let d: Complex64 = (0..3).map(|c| f.coeffs[c][idx] * kf[c]).sum::<Complex64>() / kk;
        for c in 0..3 {
            out.coeffs[c][idx] = f.coeffs[c][idx] - d * kf[c];
        }
    }
    out.divergence_free = true;
    out
}
