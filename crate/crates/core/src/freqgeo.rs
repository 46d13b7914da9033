//! Frequency-space geometry: pair coordinates, zones, masks, angular tilings
//! and the squared temporal partition of unity.

use crate::ledger::DeltaParam;
use crate::profile::{psi, ramp_jet};
use crate::vec3::{self, Vec3};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreqPair {
    pub xi: Vec3,
    pub eta: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoCoords {
    pub rho1: f64,
    pub rho2: f64,
    pub zeta: Vec3,
}

impl FreqPair {
    pub fn new(xi: Vec3, eta: Vec3) -> Self {
        FreqPair { xi, eta }
    }

    pub fn zeta(&self) -> Vec3 {
        vec3::add(&self.xi, &self.eta)
    }
}

pub fn rho_coords(pair: &FreqPair) -> RhoCoords {
    let a = vec3::norm(&pair.xi);
    let b = vec3::norm(&pair.eta);
    RhoCoords { rho1: 0.5 * (a + b), rho2: 0.5 * (a - b), zeta: pair.zeta() }
}

/// Absolute constants of the zone definitions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoneConstants {
    /// `|ξ| ∼ N` means `|ξ| ∈ [annulus_lo·N, annulus_hi·N]`.
    pub annulus_lo: f64,
    pub annulus_hi: f64,
    /// Radial transversality: `|ρ₂| ≥ rad_const·N^{1-δ}`.
    pub rad_const: f64,
    /// Coherence constant c in `∠(η, ξ+η) ≤ c·N^{-1/2}|ζ|/N`.
    pub corona_c: f64,
    /// Norm shell `(corona_lo·N, corona_hi·N]` for both corona frequencies.
    pub corona_lo: f64,
    pub corona_hi: f64,
}

impl Default for ZoneConstants {
    fn default() -> Self {
        ZoneConstants { annulus_lo: 0.5, annulus_hi: 2.0, rad_const: 1.0, corona_c: 1.0, corona_lo: 0.5, corona_hi: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneFlags {
    pub in_offdiag: bool,
    pub in_offdiag_rad: bool,
    pub in_narrow_corona: bool,
    pub in_diagonal: bool,
}

/// `N^{1-δ}`.
pub fn offdiag_scale(n: f64, delta: &DeltaParam) -> f64 {
    n.powf(1.0 - delta.as_f64())
}

/// Largest `|ξ+η|` compatible with `∠(ξ,-η) ≤ N^{-1/2}` at norms `≤ N`.
pub fn corona_chord(n: f64) -> f64 {
    2.0 * n * (0.5 / n.sqrt()).sin()
}

pub fn zone_membership(pair: &FreqPair, n: f64, delta: &DeltaParam, k: &ZoneConstants) -> ZoneFlags {
    let a = vec3::norm(&pair.xi);
    let b = vec3::norm(&pair.eta);
    let zeta = pair.zeta();
    let z = vec3::norm(&zeta);
    let s = offdiag_scale(n, delta);
    let in_ann = |r: f64| r >= k.annulus_lo * n && r <= k.annulus_hi * n;
    let annulus = in_ann(a) && in_ann(b);
    let in_offdiag = annulus && z >= s;
    let in_offdiag_rad = in_offdiag && (0.5 * (a - b)).abs() >= k.rad_const * s;
    let in_shell = |r: f64| r > k.corona_lo * n && r <= k.corona_hi * n;
    let in_narrow_corona = in_offdiag
        && in_shell(a)
        && in_shell(b)
        && z <= 2.0 * s
        && z <= corona_chord(n)
        && vec3::angle(&pair.xi, &vec3::neg(&pair.eta)) <= 1.0 / n.sqrt()
        && vec3::angle(&pair.eta, &zeta) <= k.corona_c * z / (n.sqrt() * n);
    ZoneFlags { in_offdiag, in_offdiag_rad, in_narrow_corona, in_diagonal: annulus && z < s }
}

/// `ψ(|ξ+η| / N^{1-δ})`.
pub fn smooth_mask(pair: &FreqPair, n: f64, delta: &DeltaParam) -> f64 {
    psi(vec3::norm(&pair.zeta()) / offdiag_scale(n, delta))
}

/// Tile radius constant: radius = `TILE_C · N^{-1/2}`.
pub const TILE_C: f64 = 1.0;
/// Rank-4 separation constant.
pub const RANK4_C: f64 = 1.0;
/// Overlap bound guaranteed by [`build_tiling`].
pub const MAX_OVERLAP: usize = 8;

/// Angular cap on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub center: Vec3,
    pub radius: f64,
}

impl Tile {
    /// Tile of scale `n` centred at the direction of `dir`.
    pub fn at(dir: &Vec3, n: f64) -> Self {
        Tile { center: vec3::normalize(dir).expect("nonzero direction"), radius: TILE_C / n.sqrt() }
    }

    pub fn contains(&self, dir: &Vec3) -> bool {
        vec3::angle(&self.center, dir) <= self.radius
    }
}

/// Fibonacci-sphere tiling with centres sorted by descending z.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub n: f64,
    pub tiles: Vec<Tile>,
}

/// Tiling of scale `n ≥ 4` by `⌈8N/c²⌉` Fibonacci caps of radius `c·N^{-1/2}`.
pub fn build_tiling(n: f64) -> Tiling {
    assert!(n >= 4.0, "tiling needs N >= 4");
    let count = (8.0 * n / (TILE_C * TILE_C)).ceil() as usize;
    let radius = TILE_C / n.sqrt();
    let golden = PI * (3.0 - 5f64.sqrt());
    let tiles = (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Tile { center: [r * phi.cos(), r * phi.sin(), z], radius }
        })
        .collect();
    Tiling { n, tiles }
}

impl Tiling {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Indices of tiles whose centre could lie within `max_angle` of `dir`.
    fn candidates(&self, dir: &Vec3, max_angle: f64) -> std::ops::Range<usize> {
        let theta = dir[2].clamp(-1.0, 1.0).acos();
        let z_hi = (theta - max_angle).max(0.0).cos();
        let z_lo = (theta + max_angle).min(PI).cos();
        let lo = self.tiles.partition_point(|t| t.center[2] > z_hi + 1e-15);
        let hi = self.tiles.partition_point(|t| t.center[2] >= z_lo - 1e-15);
        lo..hi.max(lo)
    }

    /// Nearest centre to `dir`, ties broken by lowest index.
    pub fn assign(&self, dir: &Vec3) -> usize {
        let dir = vec3::normalize(dir).expect("nonzero direction");
        let mut reach = 2.0 * self.tiles[0].radius;
        loop {
            let mut best: Option<(usize, f64)> = None;
            for i in self.candidates(&dir, reach) {
                let a = vec3::angle(&self.tiles[i].center, &dir);
                if best.map_or(true, |(_, b)| a < b) {
                    best = Some((i, a));
                }
            }
            match best {
                Some((i, a)) if a <= reach => return i,
                _ if reach >= PI => return best.expect("tiling is nonempty").0,
                _ => reach = (2.0 * reach).min(PI),
            }
        }
    }

    /// Number of tiles containing `dir`.
    pub fn overlap(&self, dir: &Vec3) -> usize {
        let dir = vec3::normalize(dir).expect("nonzero direction");
        let r = self.tiles[0].radius;
        self.candidates(&dir, r).filter(|&i| self.tiles[i].contains(&dir)).count()
    }

    pub fn partner_count(&self, a: &Tile) -> usize {
        self.tiles.iter().filter(|b| rank4_predicate(a, b, self.n)).count()
    }
}

/// Both `∠(a, -b)` and `∠(a, b)` are at least `RANK4_C·N^{-1/2}`.
pub fn rank4_predicate(a: &Tile, b: &Tile, n: f64) -> bool {
    let min = RANK4_C / n.sqrt();
    vec3::angle(&a.center, &vec3::neg(&b.center)) >= min && vec3::angle(&a.center, &b.center) >= min
}

/// `n` quasi-uniform unit vectors (Fibonacci lattice with a twisted offset).
pub fn sphere_samples(n: usize, twist: f64) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64 + twist;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Squared smooth partition of unity in time at scale `N^{-1/2}`.
///
/// Window `j` rises across the breakpoint `jL` and falls across `(j+1)L`,
/// each transition of half-width `L/4`, so `Σ χ_j² = 1` identically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimePartition {
    pub n: f64,
    pub horizon: f64,
    pub scale: f64,
    pub ramp_half_width: f64,
    pub first: i64,
    pub windows: Vec<f64>,
    pub half_width: f64,
}

pub fn time_partition(n: f64, horizon: f64) -> Result<TimePartition> {
    let scale = n.powf(-0.5);
    if horizon < scale {
        return Err(Error::HorizonTooShort { horizon, scale });
    }
    let eps = 0.25 * scale;
    let first = -1i64;
    let last = ((horizon + eps) / scale).ceil() as i64 - 1;
    let windows = (first..=last).map(|j| (j as f64 + 0.5) * scale).collect();
    Ok(TimePartition { n, horizon, scale, ramp_half_width: eps, first, windows, half_width: 0.5 * scale })
}

impl TimePartition {
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Angle θ and its derivatives for the transition at breakpoint `b`.
    fn theta(&self, b: f64, t: f64) -> [f64; 3] {
        let w = 2.0 * self.ramp_half_width;
        let [r, r1, r2] = ramp_jet((t - b + self.ramp_half_width) / w);
        [FRAC_PI_2 * r, FRAC_PI_2 * r1 / w, FRAC_PI_2 * r2 / (w * w)]
    }

    /// `[χ_j, χ_j', χ_j'']` at `t` for window index `i` (0-based).
    pub fn chi_jet(&self, i: usize, t: f64) -> [f64; 3] {
        let (lo, hi) = self.support(i);
        if t <= lo || t >= hi {
            return [0.0; 3];
        }
        let j = self.first + i as i64;
        let a = self.theta(j as f64 * self.scale, t);
        let b = self.theta((j + 1) as f64 * self.scale, t);
        let (sa, ca) = a[0].sin_cos();
        let (sb, cb) = b[0].sin_cos();
        let f = sa;
        let f1 = ca * a[1];
        let f2 = ca * a[2] - sa * a[1] * a[1];
        let g = cb;
        let g1 = -sb * b[1];
        let g2 = -sb * b[2] - cb * b[1] * b[1];
        [f * g, f1 * g + f * g1, f2 * g + 2.0 * f1 * g1 + f * g2]
    }

    pub fn chi(&self, i: usize, t: f64) -> f64 {
        self.chi_jet(i, t)[0]
    }

    /// Support interval of window `i`.
    pub fn support(&self, i: usize) -> (f64, f64) {
        let j = (self.first + i as i64) as f64;
        (j * self.scale - self.ramp_half_width, (j + 1.0) * self.scale + self.ramp_half_width)
    }

    /// `(Σ χ_j², Σ |χ_j'|, max |χ_j'|, max |χ_j''|)` at `t`.
    pub fn sums_at(&self, t: f64) -> (f64, f64, f64, f64) {
        let mut s2 = 0.0;
        let mut s1 = 0.0;
        let mut m1: f64 = 0.0;
        let mut m2: f64 = 0.0;
        let k = ((t / self.scale).floor() as i64 - self.first).max(0) as usize;
        for i in k.saturating_sub(1)..(k + 2).min(self.len()) {
            let [c, d1, d2] = self.chi_jet(i, t);
            s2 += c * c;
            s1 += d1.abs();
            m1 = m1.max(d1.abs());
            m2 = m2.max(d2.abs());
        }
        (s2, s1, m1, m2)
    }
}

/// Partition statistics sampled at a fixed number of points per window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub max_sum_sq_error: f64,
    pub sup_sum_abs_d1: f64,
    pub sup_d1: f64,
    pub sup_d2: f64,
}

pub fn partition_stats(p: &TimePartition, per_window: usize) -> PartitionStats {
    let count = per_window * ((p.horizon / p.scale).ceil() as usize).max(1);
    let mut st = PartitionStats { max_sum_sq_error: 0.0, sup_sum_abs_d1: 0.0, sup_d1: 0.0, sup_d2: 0.0 };
    for i in 0..=count {
        let t = p.horizon * i as f64 / count as f64;
        let (s2, s1, m1, m2) = p.sums_at(t);
        st.max_sum_sq_error = st.max_sum_sq_error.max((s2 - 1.0).abs());
        st.sup_sum_abs_d1 = st.sup_sum_abs_d1.max(s1);
        st.sup_d1 = st.sup_d1.max(m1);
        st.sup_d2 = st.sup_d2.max(m2);
    }
    st
}

/// Space-time cylinder: `|t - t0| ≤ scale`, `|x - x0| ≤ 2·scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    pub t0: f64,
    pub x0: Vec3,
    pub scale: f64,
}

impl Cylinder {
    /// `Q_{N^{-1/2}}(t0, x0)`.
    pub fn at_dyad(n: f64, t0: f64, x0: Vec3) -> Self {
        Cylinder { t0, x0, scale: n.powf(-0.5) }
    }

    pub fn time_half_width(&self) -> f64 {
        self.scale
    }

    pub fn space_radius(&self) -> f64 {
        2.0 * self.scale
    }

    pub fn doubled(&self) -> Self {
        Cylinder { scale: 2.0 * self.scale, ..*self }
    }

    pub fn contains(&self, t: f64, x: &Vec3) -> bool {
        (t - self.t0).abs() <= self.time_half_width() && vec3::norm(&vec3::sub(x, &self.x0)) <= self.space_radius()
    }

    pub fn volume(&self) -> f64 {
        2.0 * self.time_half_width() * 4.0 / 3.0 * PI * self.space_radius().powi(3)
    }
}
