//! Integrating-factor RK4 for the dealiased, Leray-projected NS system
//! `∂ₜû = -ν|k|²û - ℙ∇·(u⊗u)^`.

use super::block::full_nonlinearity;
use super::{band, knorm, sobolev_norm, Fft3, SpectralField};
use crate::ledger::DeltaParam;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialData {
    Random,
    TaylorGreen,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NsConfig {
    pub grid: usize,
    pub viscosity: f64,
    pub horizon: f64,
    pub snapshots: usize,
    pub seed: u64,
    pub spectrum_exponent: f64,
    /// L² norm of the initial data.
    pub amplitude: f64,
    pub initial: InitialData,
    /// Fixed step; chosen from `cfl` when absent.
    pub dt: Option<f64>,
    pub cfl: f64,
    /// Used by the scaling fit run on the trajectory.
    pub delta: DeltaParam,
    /// Dyad exponents `k0..=k1`.
    pub dyads: (u32, u32),
}

impl Default for NsConfig {
    fn default() -> Self {
        NsConfig {
            grid: 32,
            viscosity: 1.0,
            horizon: 1.0,
            snapshots: 64,
            seed: 7,
            spectrum_exponent: 1.75,
            amplitude: 2.0,
            initial: InitialData::Random,
            dt: None,
            cfl: 0.5,
            delta: DeltaParam::half(),
            dyads: (0, 3),
        }
    }
}

impl NsConfig {
    pub fn initial_field(&self) -> SpectralField {
        match self.initial {
            InitialData::Random => {
                SpectralField::random_divergence_free(self.grid, self.spectrum_exponent, self.amplitude, self.seed)
            }
            InitialData::TaylorGreen => SpectralField::taylor_green(self.grid, self.amplitude),
            InitialData::Zero => SpectralField::zeros(self.grid),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid < 16 || self.grid % 2 != 0 {
            return Err(Error::Config(format!("grid {} must be even and at least 16", self.grid)));
        }
        if !(self.viscosity > 0.0) {
            return Err(Error::Config("viscosity must be positive".into()));
        }
        if !(self.horizon > 0.0) || self.snapshots < 2 {
            return Err(Error::Config("need a positive horizon and at least two snapshots".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<SpectralField>,
    pub viscosity: f64,
    pub horizon: f64,
    pub dt: f64,
}

impl Trajectory {
    pub fn grid(&self) -> usize {
        self.fields[0].grid()
    }

    pub fn max_divergence_defect(&self) -> f64 {
        self.fields.iter().map(|f| f.divergence_defect()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Trajectory {
        Trajectory { fields: self.fields.iter().map(|f| f.scaled(s)).collect(), ..self.clone() }
    }
}

/// `-ℙ∇·(u⊗u)` on the band.
pub fn ns_nonlinearity(u: &SpectralField, fft: &Fft3) -> SpectralField {
    full_nonlinearity(u, u, fft).scaled(-1.0)
}

/// `d/dt ½‖u‖² = -ν‖u‖²_{Ḣ¹} + Re⟨û, F(û)⟩`; the last term vanishes for the
/// dealiased system up to rounding.
pub fn energy_rate(u: &SpectralField, viscosity: f64, fft: &Fft3) -> f64 {
    let f = ns_nonlinearity(u, fft);
    let mut transfer = 0.0;
    for c in 0..3 {
        for (a, b) in u.coeffs[c].iter().zip(&f.coeffs[c]) {
            transfer += (a.conj() * b).re;
        }
    }
    -viscosity * sobolev_norm(u, 1.0).powi(2) + transfer
}

fn axpy(y: &SpectralField, a: f64, x: &SpectralField) -> SpectralField {
    let mut out = y.clone();
    for c in 0..3 {
        for (o, v) in out.coeffs[c].iter_mut().zip(&x.coeffs[c]) {
            *o += v * a;
        }
    }
    out
}

fn apply(decay: &[f64], f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    for c in 0..3 {
        for (o, d) in out.coeffs[c].iter_mut().zip(decay) {
            *o *= *d;
        }
    }
    out
}

pub fn ns_run(cfg: &NsConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let u0 = cfg.initial_field();
    run_from(cfg, u0)
}

/// Runs from given data, which must be divergence-free.
pub fn run_from(cfg: &NsConfig, u0: SpectralField) -> Result<Trajectory> {
    cfg.validate()?;
    if u0.grid() != cfg.grid {
        return Err(Error::GridMismatch(u0.grid(), cfg.grid));
    }
    if u0.divergence_defect() > 1e-12 {
        return Err(Error::Config("initial data is not divergence-free".into()));
    }
    let m = cfg.grid;
    let fft = Fft3::new(m);
    let mut u = u0.truncated();
    let kb = band(m) as f64;
    let frame = cfg.horizon / (cfg.snapshots - 1) as f64;
    let umax = u.max_velocity(&fft);
    let limit = if umax > 0.0 { cfg.cfl / (umax * kb) } else { f64::INFINITY };
    let dt_target = cfg.dt.unwrap_or_else(|| limit.min(frame));
    if dt_target > limit {
        return Err(Error::Cfl { dt: dt_target, limit });
    }
    let substeps = (frame / dt_target).ceil().max(1.0) as usize;
    let h = frame / substeps as f64;

    let nu = cfg.viscosity;
    let decay = |s: f64| -> Vec<f64> {
        (0..u.len()).map(|i| (-nu * h * s * knorm(&u.wavevector(i)).powi(2)).exp()).collect()
    };
    let e_half = decay(0.5);
    let e_full = decay(1.0);
    let rhs = |v: &SpectralField| ns_nonlinearity(v, &fft).scaled(h);

    let mut times = vec![0.0];
    let mut fields = vec![u.clone()];
    for frame_idx in 1..cfg.snapshots {
        for _ in 0..substeps {
            let a = rhs(&u);
            let eu = apply(&e_half, &u);
            let b = rhs(&apply(&e_half, &axpy(&u, 0.5, &a)));
            let c = rhs(&axpy(&eu, 0.5, &b));
            let d = rhs(&axpy(&apply(&e_full, &u), 1.0, &apply(&e_half, &c)));
            let bc = axpy(&b, 1.0, &c);
            let mut incr = axpy(&apply(&e_full, &a), 2.0, &apply(&e_half, &bc));
            incr = axpy(&incr, 1.0, &d);
            u = axpy(&apply(&e_full, &u), 1.0 / 6.0, &incr);
            u.divergence_free = true;
        }
        times.push(frame_idx as f64 * frame);
        fields.push(u.clone());
    }
    Ok(Trajectory { times, fields, viscosity: nu, horizon: cfg.horizon, dt: h })
}

