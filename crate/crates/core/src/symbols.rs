//! Leray projection, the null-form symbol `η·Π_{ξ+η}` and the narrow-corona scan.

use crate::freqgeo::{offdiag_scale, zone_membership, FreqPair, ZoneConstants};
use crate::ledger::DeltaParam;
use crate::vec3::{self, Vec3};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// `Π_ζ = I - ζ̂⊗ζ̂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LerayProjector {
    unit: Vec3,
}

impl LerayProjector {
    pub fn new(zeta: &Vec3) -> Result<Self> {
        vec3::normalize(zeta).map(|unit| LerayProjector { unit }).ok_or(Error::DegenerateProjector)
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        vec3::sub(v, &vec3::scale(&self.unit, vec3::dot(v, &self.unit)))
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let u = self.unit;
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = if i == j { 1.0 } else { 0.0 } - u[i] * u[j];
            }
        }
        m
    }
}

pub fn leray_project(zeta: &Vec3, v: &Vec3) -> Result<Vec3> {
    Ok(LerayProjector::new(zeta)?.apply(v))
}

/// `|Π_{ξ+η} η|`.
pub fn nullform_symbol(pair: &FreqPair) -> Result<f64> {
    Ok(vec3::norm(&leray_project(&pair.zeta(), &pair.eta)?))
}

/// `|η| sin∠(η, ξ+η)`.
pub fn nullform_symbol_sine(pair: &FreqPair) -> Result<f64> {
    let zeta = pair.zeta();
    if vec3::norm(&zeta) == 0.0 {
        return Err(Error::DegenerateProjector);
    }
    Ok(vec3::norm(&pair.eta) * vec3::angle(&pair.eta, &zeta).sin())
}

/// Parameters of one corona sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoronaSample {
    /// `|ζ| / N^{1-δ}`.
    pub zeta_scale: f64,
    /// `|η| / N`.
    pub eta_scale: f64,
    /// `∠(η, ζ)` as a fraction of its admissible maximum.
    pub angle_frac: f64,
    pub pair: FreqPair,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CoronaOutcome {
    /// No candidate satisfied the corona constraints.
    Empty { candidates: usize },
    Sup { max_ratio: f64, accepted: usize, argmax: CoronaSample },
}

impl CoronaOutcome {
    pub fn max_ratio(&self) -> Option<f64> {
        match self {
            CoronaOutcome::Sup { max_ratio, .. } => Some(*max_ratio),
            CoronaOutcome::Empty { .. } => None,
        }
    }
}

const GRID: [f64; 3] = [0.0, 0.5, 1.0];

/// Builds the pair with the given corona parameters around a direction.
pub fn corona_candidate(n: f64, delta: &DeltaParam, k: &ZoneConstants, zs: f64, es: f64, af: f64, dir: &Vec3, azimuth: f64) -> FreqPair {
    let s = offdiag_scale(n, delta);
    let zn = zs * s;
    let alpha = af * k.corona_c * zn / (n.sqrt() * n) * (1.0 - 1e-12);
    let perp = vec3::orthogonal(dir);
    let perp = vec3::rotate(&perp, dir, azimuth);
    let eta_dir = vec3::add(&vec3::scale(dir, alpha.cos()), &vec3::scale(&perp, alpha.sin()));
    let eta = vec3::scale(&eta_dir, es * n);
    let zeta = vec3::scale(dir, zn);
    FreqPair::new(vec3::sub(&zeta, &eta), eta)
}

/// Sampled sup of `|η·Π_{ξ+η}| / N^{1/2-δ}` over the narrow corona.
///
/// The first 27 samples sit on the extreme/midpoint parameter grid; the rest
/// are drawn from a per-index ChaCha stream. For δ ≤ 1/2 every candidate is
/// rejected and the outcome is [`CoronaOutcome::Empty`].
pub fn corona_sup_scan(n: f64, delta: &DeltaParam, samples: usize, seed: u64, k: &ZoneConstants) -> CoronaOutcome {
    let norm = n.powf(0.5 - delta.as_f64());
    let total = samples.max(GRID.len().pow(3));
    let found: Vec<CoronaSample> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (zs, es, af) = if i < 27 {
                (1.0 + GRID[i % 3], k.corona_lo + (k.corona_hi - k.corona_lo) * GRID[(i / 3) % 3].max(1e-9), GRID[i / 9])
            } else {
                (
                    rng.gen_range(1.0..=2.0),
                    rng.gen_range(k.corona_lo..=k.corona_hi).max(k.corona_lo * (1.0 + 1e-12)),
                    rng.gen_range(0.0..=1.0),
                )
            };
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let ph = rng.gen_range(0.0..TAU);
            let r = (1.0 - z * z).sqrt();
            let dir = [r * ph.cos(), r * ph.sin(), z];
            let pair = corona_candidate(n, delta, k, zs, es, af, &dir, rng.gen_range(0.0..TAU));
            if !zone_membership(&pair, n, delta, k).in_narrow_corona {
                return None;
            }
            let ratio = nullform_symbol(&pair).ok()? / norm;
            Some(CoronaSample { zeta_scale: zs, eta_scale: es, angle_frac: af, pair, ratio })
        })
        .collect();
    match found.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)) {
        None => CoronaOutcome::Empty { candidates: total },
        Some(best) => CoronaOutcome::Sup { max_ratio: best.ratio, accepted: found.len(), argmax: *best },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoronaGeometry {
    pub zeta_norm: f64,
    pub law: f64,
}

/// `|ξ+η|` for `|ξ| = |η| = N` at `∠(ξ, -η) = θ`, against `2N sin(θ/2)`.
pub fn corona_geometry_check(n: f64, theta: f64) -> CoronaGeometry {
    let xi = [n, 0.0, 0.0];
    let minus_eta = vec3::rotate(&xi, &[0.0, 0.0, 1.0], theta);
    let eta = vec3::neg(&minus_eta);
    CoronaGeometry { zeta_norm: vec3::norm(&vec3::add(&xi, &eta)), law: 2.0 * n * (0.5 * theta).sin() }
}
