//! Schrödinger and heat propagator kernels of `P_N`, their norms on
//! space-time cylinders, and packet-based L⁶ ratios.

use crate::packets::{strichartz_family_ratio, PacketEvolution};
use crate::profile::lp_phi;
use crate::quad::{integrate, GaussLegendre, Tol};
use crate::vec3::{self, Vec3};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Schrodinger,
    Heat,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger" => Ok(KernelKind::Schrodinger),
            "heat" => Ok(KernelKind::Heat),
            _ => Err(Error::Config(format!("unknown kernel kind `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelProfile {
    pub n: f64,
    pub kind: KernelKind,
}

impl KernelProfile {
    pub fn new(n: f64, kind: KernelKind) -> Self {
        KernelProfile { n, kind }
    }

    /// The Littlewood–Paley profile φ.
    pub fn phi(&self, r: f64) -> f64 {
        lp_phi(r)
    }

    /// Largest deviation of `Σ_k φ(2^{-k}r)²` from 1 over a log-spaced sample.
    pub fn partition_error(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| {
                let r = 2f64.powf(-8.0 + 16.0 * i as f64 / samples as f64);
                let s: f64 = (-12..20).map(|k| lp_phi(r * 2f64.powi(-k)).powi(2)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

const NODES_PER_PANEL: usize = 20;

/// Weighted nodes `(ρ, w·φ(ρ)ρ²e^{iρ²t̃})` on (1/2, 2), one panel per period of
/// the fastest phase `ρ²t̃ + ρr̃_max`.
fn radial_nodes(tt: f64, rr_max: f64, gl: &GaussLegendre) -> Vec<(f64, Complex64)> {
    let range = 3.75 * tt.abs() + 1.5 * rr_max;
    let panels = ((range / (2.0 * PI)).ceil() as usize).max(16);
    let h = 1.5 / panels as f64;
    let mut out = Vec::with_capacity(panels * gl.nodes.len());
    for p in 0..panels {
        let a = 0.5 + h * p as f64;
        for (rho, w) in gl.on(a, a + h) {
            let amp = w * lp_phi(rho) * rho * rho;
            if amp != 0.0 {
                out.push((rho, Complex64::from_polar(amp, rho * rho * tt)));
            }
        }
    }
    out
}

const KERNEL_PREFACTOR: f64 = 4.0 * PI / (8.0 * PI * PI * PI);

/// `K_1(t̃, r̃)` at several radii for one rescaled time.
fn k1_row(tt: f64, rrs: &[f64], gl: &GaussLegendre) -> Vec<Complex64> {
    let rr_max = rrs.iter().cloned().fold(0.0, f64::max);
    let nodes = radial_nodes(tt, rr_max, gl);
    rrs.iter()
        .map(|&rr| nodes.iter().map(|(rho, c)| c * sinc(rho * rr)).sum::<Complex64>() * KERNEL_PREFACTOR)
        .collect()
}

/// Unit-frequency kernel `K_1(t̃, x̃)` in rescaled variables.
pub fn k1(tt: f64, rr: f64) -> Complex64 {
    k1_row(tt, &[rr], &GaussLegendre::new(NODES_PER_PANEL))[0]
}

/// `K_N(t, x) = (2π)^{-3}∫ φ(|ξ|/N) e^{i(x·ξ + t|ξ|²)} dξ`, evaluated in the
/// physical radial variable `|ξ| ∈ (N/2, 2N)`.
pub fn schrodinger_kernel(n: f64, t: f64, x: &Vec3) -> Complex64 {
    schrodinger_kernel_radial(n, t, vec3::norm(x))
}

pub fn schrodinger_kernel_radial(n: f64, t: f64, r: f64) -> Complex64 {
    let gl = GaussLegendre::new(NODES_PER_PANEL);
    let (lo, hi) = (0.5 * n, 2.0 * n);
    let range = (hi * hi - lo * lo) * t.abs() + (hi - lo) * r;
    let panels = ((range / (2.0 * PI)).ceil() as usize).max(16);
    let h = (hi - lo) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (k, w) in gl.on(a, a + h) {
            let amp = w * lp_phi(k / n) * k * k * sinc(k * r);
            acc += Complex64::from_polar(amp, k * k * t);
        }
    }
    acc * KERNEL_PREFACTOR
}

/// `K_N(0, 0) = (2π)^{-3}·4π·N³∫φ(ρ)ρ²dρ`.
pub fn schrodinger_kernel_origin(n: f64) -> f64 {
    let (v, _) = integrate(|r: f64| lp_phi(r) * r * r, 0.5, 2.0, Tol::default().panels(8)).expect("smooth integrand");
    KERNEL_PREFACTOR * n.powi(3) * v
}

/// `P_N`-projected heat kernel `(2π)^{-3}∫ φ(|ξ|/N) e^{ix·ξ - t|ξ|²} dξ`.
pub fn heat_kernel(n: f64, t: f64, x: &Vec3) -> f64 {
    let r = vec3::norm(x);
    let gl = GaussLegendre::new(NODES_PER_PANEL);
    let (lo, hi) = (0.5 * n, 2.0 * n);
    let panels = (((hi - lo) * r / (2.0 * PI)).ceil() as usize).max(16);
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (k, w) in gl.on(a, a + h) {
            acc += w * lp_phi(k / n) * k * k * sinc(k * r) * (-t * k * k).exp();
        }
    }
    acc * KERNEL_PREFACTOR
}

/// Gaussian heat factor `(4πt)^{-3/2} e^{-|x|²/4t}`.
pub fn heat_factor(t: f64, r: f64) -> f64 {
    (4.0 * PI * t).powf(-1.5) * (-r * r / (4.0 * t)).exp()
}

/// Time interval of the heat cylinder at dyad `n`: the cylinder of scale
/// `N^{-1/2}` whose lower time edge sits at `N^{-1/2}` (doubled: `[1, 5]·N^{-1/2}`).
pub fn heat_cylinder(n: f64, doubled: bool) -> (f64, f64, f64) {
    let s = n.powf(-0.5);
    if doubled {
        (s, 5.0 * s, 4.0 * s)
    } else {
        (s, 3.0 * s, 2.0 * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupReport {
    pub sup: f64,
    pub ratio: f64,
    pub at_origin: f64,
}

/// Sampled sup of `|K_N|` on `Q_{N^{-1/2}}` over a `side × side` grid in `(t, |x|)`;
/// Schrödinger ratio against `N³`, heat ratio against `N^{3/4}`.
pub fn kernel_sup_on_cylinder(n: f64, kind: KernelKind, side: usize) -> SupReport {
    let s = n.powf(-0.5);
    let side = side.max(2);
    match kind {
        KernelKind::Schrodinger => {
            let gl = GaussLegendre::new(NODES_PER_PANEL);
            let rrs: Vec<f64> = (0..side).map(|j| n * 2.0 * s * j as f64 / (side - 1) as f64).collect();
            let sup = (0..side)
                .into_par_iter()
                .map(|i| {
                    let tt = n * n * s * i as f64 / (side - 1) as f64;
                    k1_row(tt, &rrs, &gl).iter().map(|v| v.norm()).fold(0.0, f64::max)
                })
                .reduce(|| 0.0, f64::max)
                * n.powi(3);
            let at_origin = schrodinger_kernel_origin(n);
            SupReport { sup, ratio: sup / n.powi(3), at_origin }
        }
        KernelKind::Heat => {
            let (t0, t1, r1) = heat_cylinder(n, false);
            let mut sup: f64 = 0.0;
            for i in 0..side {
                let t = t0 + (t1 - t0) * i as f64 / (side - 1) as f64;
                for j in 0..side {
                    sup = sup.max(heat_factor(t, r1 * j as f64 / (side - 1) as f64));
                }
            }
            SupReport { sup, ratio: sup / n.powf(0.75), at_origin: heat_factor(t0, 0.0) }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct L3Report {
    pub norm: f64,
    pub ratio: f64,
    pub refined_norm: f64,
    pub refinement_gap: f64,
}

/// Truncation factor for rescaled time: beyond `factor·(R̃ + 4)` the radial
/// phase has no stationary point and `|K_1|` is negligible.
pub const TIME_TRUNCATION: f64 = 8.0;

/// `∫_{|t|≤t_half} ∫_{|x|≤r_max} |K_N|³` with nodes laid out in coordinates
/// rescaled by `n`. `order` is the Gauss–Legendre order per panel.
pub fn schrodinger_l3_cube(n: f64, t_half: f64, r_max: f64, order: usize, truncation: f64) -> f64 {
    let rr_max = n * r_max;
    let tt_max = (n * n * t_half).min(truncation * (rr_max + 4.0));
    let gl = GaussLegendre::new(order);
    let kernel_gl = GaussLegendre::new(NODES_PER_PANEL);
    let mut t_edges = vec![0.0, 0.125];
    while *t_edges.last().unwrap() < tt_max {
        let next = (t_edges.last().unwrap() * 1.25).min(tt_max);
        t_edges.push(next);
    }
    if t_edges[1] > tt_max {
        t_edges = vec![0.0, tt_max];
    }
    let r_panels = (rr_max.ceil() as usize).max(4);
    let mut rr_nodes = Vec::new();
    for p in 0..r_panels {
        let a = rr_max * p as f64 / r_panels as f64;
        let b = rr_max * (p + 1) as f64 / r_panels as f64;
        rr_nodes.extend(gl.on(a, b));
    }
    let phys_r: Vec<f64> = rr_nodes.iter().map(|(rr, _)| rr / n).collect();
    let t_nodes: Vec<(f64, f64)> = t_edges.windows(2).flat_map(|w| gl.on(w[0], w[1]).collect::<Vec<_>>()).collect();
    let total: f64 = t_nodes
        .par_iter()
        .map(|&(tt, wt)| {
            let t = tt / (n * n);
            let row = physical_row(n, t, &phys_r, &kernel_gl);
            let s: f64 = rr_nodes
                .iter()
                .zip(&row)
                .map(|((rr, wr), k)| wr * 4.0 * PI * rr * rr * k.powi(3))
                .sum();
            wt * s
        })
        .sum();
    // Undo the rescaling: dt dx = dt̃ dx̃ / N⁵; both signs of t contribute equally.
    2.0 * total / n.powi(5)
}

/// `|K_N(t, r)|` at several physical radii sharing the radial nodes.
fn physical_row(n: f64, t: f64, rs: &[f64], gl: &GaussLegendre) -> Vec<f64> {
    let (lo, hi) = (0.5 * n, 2.0 * n);
    let r_max = rs.iter().cloned().fold(0.0, f64::max);
    let range = (hi * hi - lo * lo) * t.abs() + (hi - lo) * r_max;
    let panels = ((range / (2.0 * PI)).ceil() as usize).max(16);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * gl.nodes.len());
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (k, w) in gl.on(a, a + h) {
            let amp = w * lp_phi(k / n) * k * k;
            if amp != 0.0 {
                nodes.push((k, Complex64::from_polar(amp, k * k * t)));
            }
        }
    }
    rs.iter()
        .map(|&r| (nodes.iter().map(|(k, c)| c * sinc(k * r)).sum::<Complex64>() * KERNEL_PREFACTOR).norm())
        .collect()
}

/// `‖K_N‖_{L³(2Q)}` on the doubled cylinder at the origin (Schrödinger) or at
/// the heat cylinder, with a refinement check.
pub fn kernel_l3_on_cylinder(n: f64, kind: KernelKind) -> Result<L3Report> {
    let (norm, refined) = match kind {
        KernelKind::Schrodinger => {
            let s = n.powf(-0.5);
            let a = schrodinger_l3_cube(n, 2.0 * s, 4.0 * s, 8, TIME_TRUNCATION).cbrt();
            let b = schrodinger_l3_cube(n, 2.0 * s, 4.0 * s, 12, TIME_TRUNCATION).cbrt();
            (a, b)
        }
        KernelKind::Heat => (heat_l3(n, 24).cbrt(), heat_l3(n, 40).cbrt()),
    };
    let gap = (norm - refined).abs() / refined;
    if gap > 0.01 {
        return Err(Error::Quadrature(format!("L3 refinement gap {gap:.3e} at N = {n}")));
    }
    let reference = match kind {
        KernelKind::Schrodinger => n.powf(4.0 / 3.0),
        KernelKind::Heat => n.powf(1.0 / 12.0),
    };
    Ok(L3Report { norm: refined, ratio: refined / reference, refined_norm: refined, refinement_gap: gap })
}

fn heat_l3(n: f64, order: usize) -> f64 {
    let (t0, t1, r1) = heat_cylinder(n, true);
    let gl = GaussLegendre::new(order);
    let mut acc = 0.0;
    for (t, wt) in gl.on(t0, t1) {
        for (r, wr) in gl.on(0.0, r1) {
            acc += wt * wr * 4.0 * PI * r * r * heat_factor(t, r).powi(3);
        }
    }
    acc
}

/// `‖K_{4N}‖` on the image of `2Q_N` under `(t, x) ↦ (t/16, x/4)` against
/// `4^{4/3}‖K_N‖_{L³(2Q_N)}`; returns the relative discrepancy. The two sides
/// use different quadrature orders so the comparison is not bit-for-bit trivial.
pub fn rescaling_cross_check(n: f64) -> f64 {
    let s = n.powf(-0.5);
    let base = schrodinger_l3_cube(n, 2.0 * s, 4.0 * s, 8, TIME_TRUNCATION).cbrt();
    let big = schrodinger_l3_cube(4.0 * n, 2.0 * s / 16.0, 4.0 * s / 4.0, 11, TIME_TRUNCATION).cbrt();
    let predicted = 4f64.powf(4.0 / 3.0) * base;
    (big - predicted).abs() / predicted
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzReport {
    pub n: f64,
    pub ratio: f64,
    /// `ratio / N^{2/3}` (Schrödinger) or `ratio / N^{1/12}` (heat).
    pub normalized: f64,
    pub trials_used: usize,
}

/// Max over a packet family of `‖U(t) f‖_{L⁶(Q_{N^{-1/2}})} / ‖f‖_{L²}`.
pub fn strichartz_ratio(n: f64, trials: usize, kind: KernelKind, seed: u64) -> Result<StrichartzReport> {
    let evo = match kind {
        KernelKind::Schrodinger => PacketEvolution::Schrodinger,
        KernelKind::Heat => PacketEvolution::Heat,
    };
    let (ratio, used) = strichartz_family_ratio(n, trials, evo, seed)?;
    let reference = match kind {
        KernelKind::Schrodinger => n.powf(2.0 / 3.0),
        KernelKind::Heat => n.powf(1.0 / 12.0),
    };
    Ok(StrichartzReport { n, ratio, normalized: ratio / reference, trials_used: used })
}
