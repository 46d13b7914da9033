//! Cubic 3D complex FFT built from 1D rustfft plans.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct Fft3 {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 { m, fwd: planner.plan_fft_forward(m), inv: planner.plan_fft_inverse(m) }
    }

    /// Unnormalized `Σ_x a(x) e^{-ik·x}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.apply(&self.fwd, data);
    }

    /// Unnormalized `Σ_k a(k) e^{ik·x}`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(&self.inv, data);
    }

    fn apply(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        let m = self.m;
        assert_eq!(data.len(), m * m * m);
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // Last axis is contiguous.
        plan.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for stride in [m, m * m] {
            for base in 0..m * m {
                let start = if stride == m { (base / m) * m * m + base % m } else { base };
                for (q, v) in line.iter_mut().enumerate() {
                    *v = data[start + q * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for (q, v) in line.iter().enumerate() {
                    data[start + q * stride] = *v;
                }
            }
        }
    }
}
