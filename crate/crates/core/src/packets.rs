//! Gaussian wave packets with closed-form free evolution, their norms on
//! space-time cylinders, and the rank-4 bilinear decoupling experiment.

use crate::freqgeo::{rank4_predicate, Cylinder, Tile};
use crate::quad::{integrate, Tol};
use crate::vec3::{self, Vec3};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `f(x) = A exp(-|x - x₀|²/(4σ²) + iξ₀·(x - x₀))` with `A = (2πσ²)^{-3/4}`,
/// so `|f|²` has standard deviation σ per axis and unit mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacket {
    pub xi0: Vec3,
    pub tile: Option<Tile>,
    pub sigma: f64,
    pub x0: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PacketEvolution {
    /// `i∂ₜu + Δu = 0`.
    Schrodinger,
    /// `∂ₜu = Δu`.
    Heat,
}

/// Packet of scale `n` in `tile`: `ξ₀ = N·centre`, `σ = N^{-1/2}`.
pub fn make_packet(tile: &Tile, n: f64, x0: Vec3) -> WavePacket {
    WavePacket { xi0: vec3::scale(&tile.center, n), tile: Some(*tile), sigma: n.powf(-0.5), x0 }
}

impl WavePacket {
    pub fn isotropic(xi0: Vec3, x0: Vec3, sigma: f64) -> Self {
        WavePacket { xi0, tile: None, sigma, x0 }
    }

    /// `a = 1/(4σ²)`.
    pub fn a(&self) -> f64 {
        0.25 / (self.sigma * self.sigma)
    }

    pub fn amplitude(&self) -> f64 {
        (2.0 * PI * self.sigma * self.sigma).powf(-0.75)
    }

    /// Centre of `|u(t)|²`: `x₀ + 2ξ₀t`.
    pub fn center(&self, t: f64) -> Vec3 {
        vec3::add(&self.x0, &vec3::scale(&self.xi0, 2.0 * t))
    }

    /// Closed-form Schrödinger evolution `u(t, x)`.
    pub fn value(&self, t: f64, x: &Vec3) -> Complex64 {
        let a = self.a();
        let y = vec3::sub(x, &self.x0);
        let d = Complex64::new(1.0, 4.0 * a * t);
        let num = Complex64::new(-a * vec3::dot(&y, &y), vec3::dot(&self.xi0, &y) - vec3::dot(&self.xi0, &self.xi0) * t);
        self.amplitude() * d.powf(-1.5) * (num / d).exp()
    }

    /// `|u(t, x)|` and the Gaussian form `|u|^p = c·e^{-β|x - centre|²}`.
    pub fn abs_gaussian(&self, t: f64, p: f64, evo: PacketEvolution) -> GaussFactor {
        let a = self.a();
        match evo {
            PacketEvolution::Schrodinger => {
                let w = 1.0 + 16.0 * a * a * t * t;
                GaussFactor { coef: (self.amplitude() * w.powf(-0.75)).powf(p), beta: p * a / w, center: self.center(t) }
            }
            PacketEvolution::Heat => {
                let d = 1.0 + 4.0 * a * t;
                let damp = (-vec3::dot(&self.xi0, &self.xi0) * t / d).exp();
                GaussFactor { coef: (self.amplitude() * d.powf(-1.5) * damp).powf(p), beta: p * a / d, center: self.x0 }
            }
        }
    }

    pub fn abs(&self, t: f64, x: &Vec3) -> f64 {
        self.abs_gaussian(t, 1.0, PacketEvolution::Schrodinger).eval(x)
    }

    /// Upper bound on the Fourier mass outside
    /// `{|ξ| ∈ [N/2, 2N], ∠(ξ, centre) ≤ 2·radius}` with `N = |ξ₀|`.
    ///
    /// `|f̂|²` is Gaussian with per-axis deviation `s = 1/(2σ)`. The bound adds
    /// the exact mass outside the cone to the longitudinal tails below `N/2`
    /// and above `2N·cos(2·radius)`, which cover the shell inside the cone.
    pub fn frequency_leakage(&self) -> Result<f64> {
        let n = vec3::norm(&self.xi0);
        let s = 0.5 / self.sigma;
        let angle = self.tile.map_or(PI, |t| (2.0 * t.radius).min(PI));
        let g = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let tol = Tol::default().panels(16);
        // Standard normal tails in the longitudinal coordinate u = (ξ∥ - N)/s.
        let below = |u: f64| if u <= -40.0 { Ok(0.0) } else { integrate(g, -40.0, u.min(40.0), tol).map(|v| v.0) };
        let above = |u: f64| if u >= 40.0 { Ok(0.0) } else { integrate(g, u.max(-40.0), 40.0, tol).map(|v| v.0) };
        let cone = if angle >= PI / 2.0 {
            0.0
        } else {
            let tan = angle.tan();
            let outside = |u: f64| g(u) * (-0.5 * ((n + s * u) * tan / s).powi(2)).exp();
            let lo = (-n / s).max(-40.0);
            below(-n / s)? + if lo < 40.0 { integrate(outside, lo, 40.0, tol)?.0 } else { 0.0 }
        };
        let top = 2.0 * n * angle.min(PI / 3.0).cos();
        Ok(cone + below(-0.5 * n / s)? + above((top - n) / s)?)
    }
}

/// `coef · e^{-β|x - center|²}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussFactor {
    pub coef: f64,
    pub beta: f64,
    pub center: Vec3,
}

impl GaussFactor {
    pub fn eval(&self, x: &Vec3) -> f64 {
        let d = vec3::sub(x, &self.center);
        self.coef * (-self.beta * vec3::dot(&d, &d)).exp()
    }

    pub fn product(&self, o: &GaussFactor) -> GaussFactor {
        let beta = self.beta + o.beta;
        if beta == 0.0 {
            return GaussFactor { coef: self.coef * o.coef, beta, center: self.center };
        }
        let c = vec3::scale(&vec3::add(&vec3::scale(&self.center, self.beta), &vec3::scale(&o.center, o.beta)), 1.0 / beta);
        let sep = vec3::sub(&self.center, &o.center);
        let coef = self.coef * o.coef * (-self.beta * o.beta / beta * vec3::dot(&sep, &sep)).exp();
        GaussFactor { coef, beta, center: c }
    }

    /// `∫_{|x - x_q| ≤ R}` of the factor.
    pub fn ball_integral(&self, x_q: &Vec3, radius: f64) -> Result<f64> {
        Ok(self.coef * gaussian_ball_integral(self.beta, vec3::norm(&vec3::sub(&self.center, x_q)), radius)?)
    }
}

/// `∫_{|x| ≤ R} e^{-β|x - c|²} dx` with `|c| = d`.
pub fn gaussian_ball_integral(beta: f64, d: f64, radius: f64) -> Result<f64> {
    if beta == 0.0 {
        return Ok(4.0 / 3.0 * PI * radius.powi(3));
    }
    let f = |r: f64| {
        let x = 2.0 * beta * r * d;
        let shell = if x < 1e-8 { 1.0 - x } else { (1.0 - (-2.0 * x).exp()) / (2.0 * x) };
        4.0 * PI * r * r * (-beta * (r - d) * (r - d)).exp() * shell
    };
    let panels = ((radius * beta.sqrt()).ceil() as usize).clamp(4, 256);
    let tol = Tol { abs: 0.0, rel: 1e-12, ..Tol::default() }.panels(panels);
    Ok(integrate(f, 0.0, radius, tol)?.0)
}

/// `∫_Q Π|u_i|^{p_i}` for packets evolving by `evo`, with `Q` a cylinder.
pub fn cylinder_integral(packets: &[(&WavePacket, f64)], q: &Cylinder, evo: PacketEvolution) -> Result<f64> {
    let r = q.space_radius();
    let f = |t: f64| -> f64 {
        let g = packets
            .iter()
            .map(|(p, e)| p.abs_gaussian(t, *e, evo))
            .reduce(|a, b| a.product(&b))
            .expect("at least one packet");
        g.ball_integral(&q.x0, r).unwrap_or(f64::NAN)
    };
    let h = q.time_half_width();
    let tol = Tol { abs: 0.0, rel: 1e-10, ..Tol::default() }.panels(16);
    let (v, _) = integrate(f, q.t0 - h, q.t0 + h, tol)?;
    if v.is_nan() {
        return Err(Error::Quadrature("ball integral failed".into()));
    }
    Ok(v)
}

pub fn lp_norm_on(p: &WavePacket, exponent: f64, q: &Cylinder, evo: PacketEvolution) -> Result<f64> {
    Ok(cylinder_integral(&[(p, exponent)], q, evo)?.powf(1.0 / exponent))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecouplingResult {
    pub n: f64,
    pub angle: f64,
    pub l3: f64,
    pub l6f: f64,
    pub l6g: f64,
    /// `‖FG‖₃ / (‖F‖₆‖G‖₆)`.
    pub holder: f64,
    /// `‖FG‖₃ / (N^{-1/4}‖F‖₆‖G‖₆)`.
    pub ratio: f64,
}

/// Decoupling ratio of two packets crossing at the cylinder centre `(0, 0)`.
pub fn decoupling_ratio(a: &Tile, b: &Tile, n: f64) -> Result<DecouplingResult> {
    if !rank4_predicate(a, b, n) {
        return Err(Error::NotRank4);
    }
    let f = make_packet(a, n, [0.0; 3]);
    let g = make_packet(b, n, [0.0; 3]);
    decoupling_of(&f, &g, n)
}

fn decoupling_of(f: &WavePacket, g: &WavePacket, n: f64) -> Result<DecouplingResult> {
    let evo = PacketEvolution::Schrodinger;
    let q = Cylinder::at_dyad(n, 0.0, [0.0; 3]);
    let l3 = cylinder_integral(&[(f, 3.0), (g, 3.0)], &q, evo)?.cbrt();
    let l6f = lp_norm_on(f, 6.0, &q, evo)?;
    let l6g = lp_norm_on(g, 6.0, &q, evo)?;
    let holder = l3 / (l6f * l6g);
    Ok(DecouplingResult { n, angle: vec3::angle(&f.xi0, &g.xi0), l3, l6f, l6g, holder, ratio: holder * n.powf(0.25) })
}

/// Same normalized ratio for two unimodular plane waves (`|F| = |G| = 1`).
pub fn plane_wave_ratio(n: f64) -> Result<f64> {
    let q = Cylinder::at_dyad(n, 0.0, [0.0; 3]);
    let one = GaussFactor { coef: 1.0, beta: 0.0, center: [0.0; 3] };
    let vol = 2.0 * q.time_half_width() * one.ball_integral(&q.x0, q.space_radius())?;
    let l3 = vol.cbrt();
    let l6 = vol.powf(1.0 / 6.0);
    Ok(l3 / (n.powf(-0.25) * l6 * l6))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Orthogonal,
    Generic,
}

impl std::str::FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthogonal" => Ok(Geometry::Orthogonal),
            "generic" => Ok(Geometry::Generic),
            _ => Err(Error::Config(format!("unknown geometry `{s}`"))),
        }
    }
}

/// Angle between the two tile centres for each geometry.
pub fn geometry_angle(g: Geometry) -> f64 {
    match g {
        Geometry::Orthogonal => PI / 2.0,
        Geometry::Generic => 1.0,
    }
}

/// Decoupling trials at dyad `n`: the two-tile configuration is randomly
/// rotated per trial.
pub fn decoupling_trials(n: f64, geometry: Geometry, trials: usize, seed: u64) -> Result<Vec<DecouplingResult>> {
    let angle = geometry_angle(geometry);
    (0..trials.max(1))
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let d = random_unit(&mut rng);
            let axis = vec3::orthogonal(&d);
            let axis = vec3::rotate(&axis, &d, rng.gen_range(0.0..2.0 * PI));
            let e = vec3::rotate(&d, &axis, angle);
            decoupling_ratio(&Tile::at(&d, n), &Tile::at(&e, n), n)
        })
        .collect()
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let ph = rng.gen_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    [r * ph.cos(), r * ph.sin(), z]
}

/// Widths on a geometric grid from `4/N` to `N^{-1/2}`, one per trial.
pub fn strichartz_widths(n: f64, trials: usize) -> Vec<f64> {
    let lo = (4.0 / n).min(n.powf(-0.5));
    let hi = n.powf(-0.5);
    let k = trials.max(1);
    (0..k)
        .map(|i| if k == 1 { lo } else { lo * (hi / lo).powf(i as f64 / (k - 1) as f64) })
        .collect()
}

/// Max of `‖u‖_{L⁶(Q)}/‖f‖₂` over the width family; packets with zero
/// amplitude are skipped. Returns the ratio and the number of trials used.
pub fn strichartz_family_ratio(n: f64, trials: usize, evo: PacketEvolution, seed: u64) -> Result<(f64, usize)> {
    let q = match evo {
        PacketEvolution::Schrodinger => Cylinder::at_dyad(n, 0.0, [0.0; 3]),
        PacketEvolution::Heat => Cylinder::at_dyad(n, 2.0 * n.powf(-0.5), [0.0; 3]),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    let mut used = 0;
    for sigma in strichartz_widths(n, trials) {
        let p = WavePacket::isotropic(vec3::scale(&random_unit(&mut rng), n), [0.0; 3], sigma);
        if p.amplitude() == 0.0 {
            continue;
        }
        best = best.max(lp_norm_on(&p, 6.0, &q, evo)?);
        used += 1;
    }
    Ok((best, used))
}
