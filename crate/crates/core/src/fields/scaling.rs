//! Off-diagonal block norms along a trajectory and the dyadic slope fit.

use super::block::{check_grid, convolution, Paraproduct};
use super::{knorm, sobolev_norm, SpectralField, Trajectory};
use crate::ledger::DeltaParam;
use crate::profile::{lp_phi, psi};
use crate::{fit_slope, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `P_N ℙ∇·[P_{∼N}u ⊗ P_{∼N}u]` restricted to `|ξ+η| ≳ N^{1-δ}`.
///
/// The mask only sees the output frequency, so it is applied as an output
/// multiplier and the product is evaluated by convolution.
pub fn offdiag_block(u: &SpectralField, n: u32, delta: &DeltaParam) -> Result<SpectralField> {
    let spec = super::BlockSpec::new(Paraproduct::HighHigh, n, super::Zone::OffDiag, delta.clone());
    let n_exp = check_grid(&spec, u.grid())?;
    let nf = n as f64;
    let s = crate::freqgeo::offdiag_scale(nf, delta);
    Ok(convolution(u, u, Paraproduct::HighHigh, n_exp, &|k| {
        let r = knorm(k);
        lp_phi(r / nf) * psi(r / s)
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: u32,
    pub a_n: f64,
    pub r_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub rows: Vec<ScalingRow>,
    pub reference: f64,
    /// Least-squares slope of `log₂ r_N` against `log₂ N` over rows with `A_N > 0`.
    pub slope: Option<f64>,
    pub degenerate: bool,
}

fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2).zip(y.windows(2)).map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1])).sum()
}

pub fn scaling_fit(traj: &Trajectory, dyads: &[u32], delta: &DeltaParam) -> Result<ScalingFit> {
    if dyads.len() < 3 {
        return Err(Error::Config(format!("need at least 3 dyads, got {}", dyads.len())));
    }
    let norms: Vec<Vec<f64>> = traj
        .fields
        .par_iter()
        .map(|u| {
            dyads
                .iter()
                .map(|&n| offdiag_block(u, n, delta).map(|b| sobolev_norm(&b, -1.0)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let half = traj.fields.iter().map(|u| sobolev_norm(u, 0.5)).fold(0.0, f64::max);
    let grad2: Vec<f64> = traj.fields.iter().map(|u| sobolev_norm(u, 1.0).powi(2)).collect();
    let reference = half * trapezoid(&traj.times, &grad2).sqrt();
    let rows: Vec<ScalingRow> = dyads
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let series: Vec<f64> = norms.iter().map(|r| r[j]).collect();
            let a_n = trapezoid(&traj.times, &series);
            ScalingRow { n, a_n, r_n: if reference > 0.0 { a_n / reference } else { f64::NAN } }
        })
        .collect();
    let degenerate = rows.iter().all(|r| r.a_n == 0.0);
    let live: Vec<&ScalingRow> = rows.iter().filter(|r| r.a_n > 0.0 && r.r_n.is_finite()).collect();
    let slope = (!degenerate && live.len() >= 2).then(|| {
        let xs: Vec<f64> = live.iter().map(|r| (r.n as f64).log2()).collect();
        let ys: Vec<f64> = live.iter().map(|r| r.r_n.log2()).collect();
        fit_slope(&xs, &ys)
    });
    Ok(ScalingFit { rows, reference, slope, degenerate })
}
