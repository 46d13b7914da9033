//! The interaction phase `Φ = x·ζ + 4tρ₁ρ₂`, its Hessian, the integration by
//! parts gain, oscillatory time integrals and the heat-to-phase reduction.

use crate::freqgeo::{rho_coords, FreqPair};
use crate::ledger::{DeltaParam, ExponentExpr};
use crate::quad::{integrate, GaussLegendre, Tol};
use crate::vec3::{self, Vec3};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub t: f64,
    pub x: Vec3,
    pub pair: FreqPair,
}

impl PhasePoint {
    /// `ϖ = 4ρ₁ρ₂`.
    pub fn varpi(&self) -> f64 {
        let r = rho_coords(&self.pair);
        4.0 * r.rho1 * r.rho2
    }

    pub fn phi(&self) -> f64 {
        vec3::dot(&self.x, &self.pair.zeta()) + self.t * self.varpi()
    }
}

/// `Φ` as a function of `(t, ρ₁, ρ₂)` at fixed `x·ζ`.
pub fn phi_trr(xz: f64, t: f64, rho1: f64, rho2: f64) -> f64 {
    xz + 4.0 * t * rho1 * rho2
}

pub type Mat3 = [[f64; 3]; 3];

/// Hessian of `Φ` in `(t, ρ₁, ρ₂)` and its determinant `128ρ₁ρ₂t`.
pub fn phase_hessian(t: f64, rho1: f64, rho2: f64) -> (Mat3, f64) {
    let a = [
        [0.0, 4.0 * rho2, 4.0 * rho1],
        [4.0 * rho2, 0.0, 4.0 * t],
        [4.0 * rho1, 4.0 * t, 0.0],
    ];
    (a, 128.0 * rho1 * rho2 * t)
}

/// `(|∂ₜΦ|, |∂_{ρ₁}Φ|, |∂_{ρ₂}Φ|) = (4ρ₁|ρ₂|, 4|t||ρ₂|, 4|t|ρ₁)`.
pub fn derivative_magnitudes(pair: &FreqPair, t: f64) -> [f64; 3] {
    let r = rho_coords(pair);
    magnitudes(t, r.rho1, r.rho2)
}

pub fn magnitudes(t: f64, rho1: f64, rho2: f64) -> [f64; 3] {
    [4.0 * rho1 * rho2.abs(), 4.0 * t.abs() * rho2.abs(), 4.0 * t.abs() * rho1]
}

/// Exponent of the six-fold integration by parts gain, `-6 + 4δ`.
pub fn ibp_gain() -> ExponentExpr {
    ExponentExpr::affine(-6, 1, 4, 1)
}

/// `Π |∂Φ|^{-2}` at `ρ₁ = N`, `|ρ₂| = N^{1-δ}`, `t = N^{-1/2}`, divided by `N^{-6+4δ}`.
pub fn ibp_numeric_ratio(n: f64, delta: &DeltaParam) -> f64 {
    let d = delta.as_f64();
    let m = magnitudes(n.powf(-0.5), n, n.powf(1.0 - d));
    let gain: f64 = m.iter().map(|v| v.powi(-2)).product();
    gain / n.powf(ibp_gain().eval_f64(d))
}

/// `∫_{t₋}^{t₊} e^{itϖ} a(t) dt` by Gauss–Legendre panels no longer than one period.
pub fn oscillatory_integral<A: Fn(f64) -> f64>(t_lo: f64, t_hi: f64, varpi: f64, amp: A) -> Result<Complex64> {
    if !(t_lo < t_hi) {
        return Err(Error::DegenerateWindow { lo: t_lo, hi: t_hi });
    }
    let len = t_hi - t_lo;
    let panels = ((varpi.abs() * len / TAU).ceil() as usize).max(8);
    let gl = GaussLegendre::new(20);
    let h = len / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = t_lo + h * p as f64;
        let mut part = Complex64::new(0.0, 0.0);
        for (t, w) in gl.on(a, a + h) {
            part += Complex64::from_polar(w * amp(t), t * varpi);
        }
        acc += part;
    }
    Ok(acc)
}

/// Closed form of [`oscillatory_integral`] for `a ≡ 1`.
pub fn oscillatory_closed_form(t_lo: f64, t_hi: f64, varpi: f64) -> Complex64 {
    if varpi == 0.0 {
        return Complex64::new(t_hi - t_lo, 0.0);
    }
    let i = Complex64::i();
    ((i * t_hi * varpi).exp() - (i * t_lo * varpi).exp()) / (i * varpi)
}

/// Both sides of the time normal form
/// `∫₀ᵗ e^{-(t-s)z}F ds = (F(t) - e^{-tz}F(0))/(z+iϖ) - (z+iϖ)^{-1}∫₀ᵗ e^{-(t-s)z}(∂ₛ - iϖ)F ds`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DuhamelCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub relative: f64,
}

/// `f` returns `(F(s), F'(s))`; `z = |ζ|²`.
pub fn duhamel_normal_form_check<F: Fn(f64) -> (f64, f64)>(f: F, t: f64, z: f64, varpi: f64) -> Result<DuhamelCheck> {
    let tol = Tol { abs: 1e-300, rel: 1e-14, ..Tol::default() }.panels(4);
    let (lhs, _) = integrate(|s: f64| (-(t - s) * z).exp() * f(s).0, 0.0, t, tol)?;
    let (inner, _) = integrate(
        |s: f64| {
            let (v, d) = f(s);
            Complex64::new(d, -varpi * v) * (-(t - s) * z).exp()
        },
        0.0,
        t,
        tol,
    )?;
    let w = Complex64::new(z, varpi);
    let rhs = (f(t).0 - (-t * z).exp() * f(0.0).0) / w - inner / w;
    let lhs = Complex64::new(lhs, 0.0);
    let residual = (lhs - rhs).norm();
    Ok(DuhamelCheck { lhs, rhs, residual, relative: residual / lhs.norm().max(f64::MIN_POSITIVE) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatReduction {
    pub a_n: Complex64,
    pub m_n: Complex64,
    /// `|m_N(t) - a_N|`.
    pub remainder: f64,
    /// `|a_N|·e^{-t|ζ|²}`.
    pub bound: f64,
}

/// `a_N = 1/(|ζ|²+iϖ)` and `m_N(t) = (1 - e^{-t(|ζ|²+iϖ)})/(|ζ|²+iϖ)`.
pub fn heat_amplitude_remainder(pair: &FreqPair, t: f64) -> HeatReduction {
    let r = rho_coords(pair);
    let z = vec3::dot(&r.zeta, &r.zeta);
    let w = Complex64::new(z, 4.0 * r.rho1 * r.rho2);
    let a_n = w.inv();
    let m_n = (Complex64::new(1.0, 0.0) - (-t * w).exp()) * a_n;
    HeatReduction { a_n, m_n, remainder: (m_n - a_n).norm(), bound: a_n.norm() * (-t * z).exp() }
}

/// Least-squares slope of `log|I(ϖ)|` against `log ϖ` for a bump amplitude on `[0, 1]`.
pub fn ibp_decay_slope(varpis: &[f64]) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &w in varpis {
        let v = oscillatory_integral(0.0, 1.0, w, |t| crate::profile::plateau_bump(2.0 * t - 1.0))?;
        xs.push(w.ln());
        ys.push(v.norm().max(1e-300).ln());
    }
    Ok(crate::fit_slope(&xs, &ys))
}
