//! Naive DFT, independent of any FFT library, for spectrum checks.

use std::f64::consts::PI;

/// Magnitudes |X_k| of the zero-padded DFT for bins k = 0..=padded_len/2.
/// Only the nonzero prefix (the given samples) contributes to each bin.
pub fn dft_magnitudes(x: &[f64], padded_len: usize) -> Vec<f64> {
    assert!(padded_len >= x.len() && padded_len > 0);
    let m = padded_len as f64;
    (0..=padded_len / 2)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (n, &v) in x.iter().enumerate() {
                let ang = -2.0 * PI * (k as f64) * (n as f64) / m;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// Frequency in Hz of DFT bin k for sample interval dt.
pub fn dft_bin_hz(k: usize, padded_len: usize, dt: f64) -> f64 {
    k as f64 / (padded_len as f64 * dt)
}
