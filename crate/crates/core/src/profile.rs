//! Smooth cutoff profiles built from the `e^{-1/s}` glue function.

use std::f64::consts::FRAC_PI_2;

/// `e^{-1/s}` for `s > 0`, zero otherwise.
#[inline]
pub fn glue(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// C∞ step: 0 for `s <= 0`, 1 for `s >= 1`, strictly increasing between.
#[inline]
pub fn ramp(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = glue(s);
        a / (a + glue(1.0 - s))
    }
}

/// `[ramp, ramp', ramp'']` at `s`.
pub fn ramp_jet(s: f64) -> [f64; 3] {
    if s <= 0.0 {
        return [0.0, 0.0, 0.0];
    }
    if s >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let u = 1.0 - s;
    let a = glue(s);
    let b = glue(u);
    let a1 = a / (s * s);
    let a2 = a * (1.0 - 2.0 * s) / s.powi(4);
    let b1 = -b / (u * u);
    let b2 = b * (2.0 * s - 1.0) / u.powi(4);
    let d = a + b;
    let d1 = a1 + b1;
    let d2 = a2 + b2;
    let num1 = a1 * d - a * d1;
    let r1 = num1 / (d * d);
    let r2 = (a2 * d - a * d2) / (d * d) - 2.0 * d1 * num1 / (d * d * d);
    [a / d, r1, r2]
}

/// Off-diagonal smoothing mask: 0 for `s <= 1`, 1 for `s >= 2`.
#[inline]
pub fn psi(s: f64) -> f64 {
    ramp(s - 1.0)
}

/// Littlewood–Paley profile, supported in (1/2, 2) with `φ(1) = 1` and
/// `Σ_k φ(2^{-k} r)^2 = 1` for every `r > 0`.
pub fn lp_phi(r: f64) -> f64 {
    if r <= 0.5 || r >= 2.0 {
        return 0.0;
    }
    let s = r.log2();
    if s <= 0.0 {
        (FRAC_PI_2 * ramp(s + 1.0)).sin()
    } else {
        (FRAC_PI_2 * ramp(s)).cos()
    }
}

/// Compact bump on [-1, 1], equal to 1 on [-1/2, 1/2].
pub fn plateau_bump(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.5 {
        1.0
    } else {
        1.0 - ramp(2.0 * y - 1.0)
    }
}
