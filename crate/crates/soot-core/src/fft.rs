//! Frequency-domain convolution, used only to speed up the power iteration
//! in `op_norm_sq_bound` for long kernels. The direct summation in `signal`
//! is the reference path; the two must agree to 1e-10 (tested).

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        p.borrow_mut()
            .entry((len, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

/// Angular frequency ω ∈ [0, π] at which |Σ_j k[j]·e^{−iωj}| peaks, located
/// on an oversampled DFT grid. The top eigenvectors of the convolution Gram
/// matrix concentrate near this frequency, which makes cos(ω·)/sin(ω·)
/// excellent power-iteration starting vectors.
pub(crate) fn peak_frequency(k: &[f64]) -> f64 {
    let m = (8 * k.len()).next_power_of_two().max(64);
    let mut buf: Vec<Complex<f64>> = k
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(m)
        .collect();
    plan(m, false).process(&mut buf);
    let mut best = 0;
    let mut best_mag = -1.0;
    for (b, c) in buf.iter().take(m / 2 + 1).enumerate() {
        let mag = c.norm_sqr();
        if mag > best_mag {
            best_mag = mag;
            best = b;
        }
    }
    2.0 * std::f64::consts::PI * best as f64 / m as f64
}

/// Precomputed spectrum of one kernel; applies the zero-padded convolution
/// `out[i] = Σ_j k[j]·x[i+center−j]` by pointwise multiplication.
pub(crate) struct FftConv {
    m: usize,
    spectrum: Vec<Complex<f64>>,
    center: usize,
    out_len: usize,
}

impl FftConv {
    pub fn new(k: &[f64], out_len: usize, center: usize) -> Self {
        debug_assert!(center < k.len());
        let m = (out_len + k.len() - 1).next_power_of_two();
        let mut spectrum: Vec<Complex<f64>> = k
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(m)
            .collect();
        plan(m, false).process(&mut spectrum);
        FftConv { m, spectrum, center, out_len }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.out_len);
        let mut buf: Vec<Complex<f64>> = x
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(self.m)
            .collect();
        plan(self.m, false).process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= *s;
        }
        plan(self.m, true).process(&mut buf);
        let scale = 1.0 / self.m as f64;
        // linear convolution value at t lives in buf[t]; "same" output i maps to t = i + center
        (0..self.out_len).map(|i| buf[i + self.center].re * scale).collect()
    }
}
