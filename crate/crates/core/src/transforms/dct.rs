//! Orthonormal DCT-II / DCT-III through a single length-`n` complex FFT
//! (Makhoul's even/odd reordering).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub(crate) struct DctPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    twiddles: Vec<Complex64>,
}

impl std::fmt::Debug for DctPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DctPlan").field("n", &self.n).finish()
    }
}

impl DctPlan {
    pub(crate) fn new(n: usize, planner: &mut FftPlanner<f64>) -> Self {
        let twiddles = (0..n)
            .map(|k| Complex64::from_polar(1.0, -PI * k as f64 / (2 * n) as f64))
            .collect();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            twiddles,
        }
    }

    fn scale(&self, k: usize) -> f64 {
        let n = self.n as f64;
        if k == 0 {
            (1.0 / n).sqrt()
        } else {
            (2.0 / n).sqrt()
        }
    }

    pub(crate) fn forward(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut v = vec![Complex64::default(); n];
        for (k, slot) in v.iter_mut().enumerate().take(n.div_ceil(2)) {
            *slot = Complex64::new(x[2 * k], 0.0);
        }
        for k in 0..n / 2 {
            v[n - 1 - k] = Complex64::new(x[2 * k + 1], 0.0);
        }
        self.forward.process(&mut v);
        (0..n)
            .map(|k| (v[k] * self.twiddles[k]).re * self.scale(k))
            .collect()
    }

    pub(crate) fn inverse(&self, c: &[f64]) -> Vec<f64> {
        let n = self.n;
        let unscaled: Vec<f64> = (0..n).map(|k| c[k] / self.scale(k)).collect();
        let mut v: Vec<Complex64> = (0..n)
            .map(|k| {
                let w = if k == 0 {
                    Complex64::new(unscaled[0], 0.0)
                } else {
                    Complex64::new(unscaled[k], -unscaled[n - k])
                };
                w * self.twiddles[k].conj()
            })
            .collect();
        self.inverse.process(&mut v);
        let inv_n = 1.0 / n as f64;
        let mut x = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            x[2 * k] = v[k].re * inv_n;
        }
        for k in 0..n / 2 {
            x[2 * k + 1] = v[n - 1 - k].re * inv_n;
        }
        x
    }
}
