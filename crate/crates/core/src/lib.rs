//! Verification laboratory for the off-diagonal frequency interactions of the
//! 3D Navier–Stokes nonlinearity.
//!
//! Every computational object of the analysis has a concrete implementation
//! here: smooth masks and tilings ([`freqgeo`]), the interaction phase
//! ([`phase`]), the Leray null-form symbol ([`symbols`]), propagator kernels
//! ([`kernels`]), Gaussian wave packets ([`packets`]), periodic spectral fields
//! with the Bony blocks and a small solver ([`fields`]), and the exact exponent
//! ledger ([`ledger`]). [`report`] collects pass/fail records for the CLI.

pub mod error;
pub mod fields;
pub mod freqgeo;
pub mod kernels;
pub mod ledger;
pub mod packets;
pub mod phase;
pub mod profile;
pub mod quad;
pub mod report;
pub mod symbols;
pub mod vec3;

pub use error::{Error, Result};

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}
