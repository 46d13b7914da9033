//! Bony blocks of `ℙ∇·(u⊗v)` with optional zone masks.

use super::{band, dyad_exponent, knorm, Fft3, SpectralField};
use crate::freqgeo::{offdiag_scale, zone_membership, FreqPair, ZoneConstants};
use crate::ledger::DeltaParam;
use crate::profile::{lp_phi, psi};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Frequency pattern of a block relative to the output dyad `N`.
///
/// Input classes: `∼` spans `|log₂M - log₂N| ≤ 2`, `≪` lies below and `≫`
/// above; pieces are `φ(|k|/M)²`, so the three class weights sum to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Paraproduct {
    /// `u ∼ N`, `v ≪ N`.
    LowHigh,
    /// `u ≪ N`, `v ∼ N`.
    HighLow,
    /// Both inputs `∼ N`.
    HighHigh,
    /// At least one input `≫ N`.
    HighHighToLow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    None,
    OffDiag,
    OffDiagRad,
    NarrowCorona,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Direct,
    Convolution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub kind: Paraproduct,
    /// Mirrored blocks apply the same pattern to `(v, u)`.
    pub mirrored: bool,
    pub n: u32,
    pub zone: Zone,
    pub delta: DeltaParam,
    /// Dyad at which the zone mask is evaluated; defaults to `n`.
    pub zone_scale: Option<u32>,
    pub constants: ZoneConstants,
}

impl BlockSpec {
    pub fn new(kind: Paraproduct, n: u32, zone: Zone, delta: DeltaParam) -> Self {
        BlockSpec { kind, mirrored: false, n, zone, delta, zone_scale: None, constants: ZoneConstants::default() }
    }

    pub fn mirror(mut self) -> Self {
        self.mirrored = !self.mirrored;
        self
    }

    pub fn label(&self) -> String {
        let base = match self.kind {
            Paraproduct::LowHigh => "lh->h",
            Paraproduct::HighLow => "hl->h",
            Paraproduct::HighHigh => "hh->h",
            Paraproduct::HighHighToLow => "hh->l",
        };
        if self.mirrored {
            format!("{base}'")
        } else {
            base.to_string()
        }
    }

    /// The eight labels at output dyad `n`.
    pub fn all_labels(n: u32, zone: Zone, delta: &DeltaParam) -> Vec<BlockSpec> {
        let kinds = [Paraproduct::LowHigh, Paraproduct::HighLow, Paraproduct::HighHigh, Paraproduct::HighHighToLow];
        let mut v: Vec<BlockSpec> = kinds.iter().map(|&k| BlockSpec::new(k, n, zone, delta.clone())).collect();
        let mirrors: Vec<BlockSpec> = v.iter().cloned().map(BlockSpec::mirror).collect();
        v.extend(mirrors);
        v
    }

    fn zone_dyad(&self) -> f64 {
        self.zone_scale.unwrap_or(self.n) as f64
    }

    /// Mask weight of the pair `(ξ, η) = (k₁, k₂)`.
    pub fn zone_weight(&self, k1: &[i64; 3], k2: &[i64; 3]) -> f64 {
        let nz = self.zone_dyad();
        let s = offdiag_scale(nz, &self.delta);
        let z = knorm(&[k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]]);
        match self.zone {
            Zone::None => 1.0,
            Zone::OffDiag => psi(z / s),
            Zone::OffDiagRad => {
                let rho2 = 0.5 * (knorm(k1) - knorm(k2));
                psi(z / s) * psi(rho2.abs() / (self.constants.rad_const * s))
            }
            Zone::NarrowCorona => {
                let f = |k: &[i64; 3]| [k[0] as f64, k[1] as f64, k[2] as f64];
                let pair = FreqPair::new(f(k1), f(k2));
                if zone_membership(&pair, nz, &self.delta, &self.constants).in_narrow_corona {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// `(low, comp)` class weights of a mode with `|k| = kn` for output exponent `n_exp`.
pub(crate) fn class_weights(kn: f64, n_exp: i32) -> (f64, f64) {
    if kn == 0.0 {
        return (1.0, 0.0);
    }
    let m0 = kn.log2().floor() as i32;
    let (mut low, mut comp) = (0.0, 0.0);
    for m in [m0, m0 + 1] {
        if m < 0 {
            continue;
        }
        let w = lp_phi(kn / 2f64.powi(m)).powi(2);
        let rel = m - n_exp;
        if rel < -2 {
            low += w;
        } else if rel <= 2 {
            comp += w;
        }
    }
    (low, comp)
}

fn pattern_weight(kind: Paraproduct, u: (f64, f64), v: (f64, f64)) -> f64 {
    match kind {
        Paraproduct::LowHigh => u.1 * v.0,
        Paraproduct::HighLow => u.0 * v.1,
        Paraproduct::HighHigh => u.1 * v.1,
        Paraproduct::HighHighToLow => 1.0 - (u.0 + u.1) * (v.0 + v.1),
    }
}

/// Separable pieces `(weight_u, weight_v, sign)` of each pattern; `None` = all-ones.
type Piece = (Option<fn((f64, f64)) -> f64>, Option<fn((f64, f64)) -> f64>, f64);

fn pieces(kind: Paraproduct) -> Vec<Piece> {
    let low: fn((f64, f64)) -> f64 = |w| w.0;
    let comp: fn((f64, f64)) -> f64 = |w| w.1;
    let not_high: fn((f64, f64)) -> f64 = |w| w.0 + w.1;
    match kind {
        Paraproduct::LowHigh => vec![(Some(comp), Some(low), 1.0)],
        Paraproduct::HighLow => vec![(Some(low), Some(comp), 1.0)],
        Paraproduct::HighHigh => vec![(Some(comp), Some(comp), 1.0)],
        Paraproduct::HighHighToLow => vec![(None, None, 1.0), (Some(not_high), Some(not_high), -1.0)],
    }
}

pub(crate) fn check_grid(spec: &BlockSpec, m: usize) -> Result<i32> {
    let e = dyad_exponent(spec.n)? as i32;
    let kmax = 3f64.sqrt() * band(m) as f64;
    if spec.n as f64 / 2.0 >= kmax {
        return Err(Error::DyadTooLarge { dyad: spec.n, grid: m });
    }
    Ok(e)
}

/// Block of `ℙ∇·(u⊗v)`, component `i` of the pair term being `i(k·û(k₁))v̂_i(k₂)`,
/// followed by the output multiplier `φ(|k|/N)`.
pub fn bilinear_block(u: &SpectralField, v: &SpectralField, spec: &BlockSpec, method: Method) -> Result<SpectralField> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch(u.grid(), v.grid()));
    }
    let n_exp = check_grid(spec, u.grid())?;
    let (u, v) = if spec.mirrored { (v, u) } else { (u, v) };
    match method {
        Method::Direct => Ok(direct(u, v, spec, n_exp)),
        Method::Convolution => {
            if spec.zone != Zone::None {
                return Err(Error::MaskNeedsDirect);
            }
            let nf = spec.n as f64;
            Ok(convolution(u, v, spec.kind, n_exp, &|k| lp_phi(knorm(k) / nf)))
        }
    }
}

fn band_modes(f: &SpectralField) -> Vec<[i64; 3]> {
    let kb = band(f.grid());
    let mut out = Vec::new();
    for a in -kb..=kb {
        for b in -kb..=kb {
            for c in -kb..=kb {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn direct(u: &SpectralField, v: &SpectralField, spec: &BlockSpec, n_exp: i32) -> SpectralField {
    let kb = band(u.grid());
    let nf = spec.n as f64;
    let modes = band_modes(u);
    let u_list: Vec<([i64; 3], [Complex64; 3], (f64, f64))> = modes
        .iter()
        .filter_map(|k| {
            let c = u.get(k);
            (c.iter().any(|z| z.norm_sqr() != 0.0)).then(|| (*k, c, class_weights(knorm(k), n_exp)))
        })
        .collect();
    let outputs: Vec<[i64; 3]> = modes.iter().copied().filter(|k| lp_phi(knorm(k) / nf) > 0.0).collect();
    let values: Vec<[Complex64; 3]> = outputs
        .par_iter()
        .map(|k| {
            let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
            let mut acc = [Complex64::new(0.0, 0.0); 3];
            for (k1, uc, wu) in &u_list {
                let k2 = [k[0] - k1[0], k[1] - k1[1], k[2] - k1[2]];
                if k2.iter().any(|c| c.abs() > kb) {
                    continue;
                }
                let vc = v.get(&k2);
                if vc.iter().all(|z| z.norm_sqr() == 0.0) {
                    continue;
                }
                let w = pattern_weight(spec.kind, *wu, class_weights(knorm(&k2), n_exp));
                if w == 0.0 {
                    continue;
                }
                let w = w * spec.zone_weight(k1, &k2);
                if w == 0.0 {
                    continue;
                }
                let kdotu: Complex64 = (0..3).map(|c| uc[c] * kf[c]).sum();
                let s = Complex64::new(0.0, w) * kdotu;
                for c in 0..3 {
                    acc[c] += s * vc[c];
                }
            }
            project_mode(k, acc, lp_phi(knorm(k) / nf))
        })
        .collect();
    let mut out = SpectralField::zeros(u.grid());
    for (k, val) in outputs.iter().zip(values) {
        out.set(k, val);
    }
    out
}

fn project_mode(k: &[i64; 3], mut a: [Complex64; 3], mult: f64) -> [Complex64; 3] {
    if *k != [0, 0, 0] {
        let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
        let kk = kf[0] * kf[0] + kf[1] * kf[1] + kf[2] * kf[2];
        let d: Complex64 = (0..3).map(|c| a[c] * kf[c]).sum::<Complex64>() / kk;
        for c in 0..3 {
            a[c] -= d * kf[c];
        }
    }
    a.map(|z| z * mult)
}

/// Dealiased `i Σ_j k_j (a_j b_i)^(k)` on the band, before projection.
fn raw_product(a: &SpectralField, b: &SpectralField, fft: &Fft3) -> [Vec<Complex64>; 3] {
    let m = a.grid();
    let ar = a.truncated().to_real(fft);
    let br = b.truncated().to_real(fft);
    let inv = 1.0 / (m * m * m) as f64;
    let mut hat: Vec<Vec<Complex64>> = Vec::with_capacity(9);
    for j in 0..3 {
        for i in 0..3 {
            let mut buf: Vec<Complex64> = ar[j].iter().zip(&br[i]).map(|(x, y)| Complex64::new(x * y, 0.0)).collect();
            fft.forward(&mut buf);
            hat.push(buf);
        }
    }
    let kb = band(m);
    let mut out: [Vec<Complex64>; 3] = Default::default();
    for (i, o) in out.iter_mut().enumerate() {
        *o = vec![Complex64::new(0.0, 0.0); m * m * m];
        for idx in 0..m * m * m {
            let k = a.wavevector(idx);
            if k.iter().any(|c| c.abs() > kb) {
                continue;
            }
            let s: Complex64 = (0..3).map(|j| hat[3 * j + i][idx] * k[j] as f64).sum();
            o[idx] = Complex64::new(0.0, inv) * s;
        }
    }
    out
}

/// Convolution evaluation of a pattern with a general output multiplier.
pub(crate) fn convolution(
    u: &SpectralField,
    v: &SpectralField,
    kind: Paraproduct,
    n_exp: i32,
    out_mult: &(dyn Fn(&[i64; 3]) -> f64 + Sync),
) -> SpectralField {
    let m = u.grid();
    let fft = Fft3::new(m);
    let mut total: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); m * m * m]);
    for (wu, wv, sign) in pieces(kind) {
        let a = match wu {
            Some(f) => u.multiplier(|k| f(class_weights(knorm(k), n_exp))),
            None => u.clone(),
        };
        let b = match wv {
            Some(f) => v.multiplier(|k| f(class_weights(knorm(k), n_exp))),
            None => v.clone(),
        };
        let p = raw_product(&a, &b, &fft);
        for c in 0..3 {
            for (t, x) in total[c].iter_mut().zip(&p[c]) {
                *t += x * sign;
            }
        }
    }
    let mut out = SpectralField::zeros(m);
    for idx in 0..m * m * m {
        let k = u.wavevector(idx);
        let val = project_mode(&k, [total[0][idx], total[1][idx], total[2][idx]], out_mult(&k));
        for c in 0..3 {
            out.coeffs[c][idx] = val[c];
        }
    }
    out
}

/// Full dealiased `ℙ∇·(u⊗v)` on the band.
pub fn full_nonlinearity(u: &SpectralField, v: &SpectralField, fft: &Fft3) -> SpectralField {
    let p = raw_product(u, v, fft);
    let mut out = SpectralField::zeros(u.grid());
    for idx in 0..out.len() {
        let k = u.wavevector(idx);
        let val = project_mode(&k, [p[0][idx], p[1][idx], p[2][idx]], 1.0);
        for c in 0..3 {
            out.coeffs[c][idx] = val[c];
        }
    }
    out
}
