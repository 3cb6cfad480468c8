//! Synthetic seismic instances: Ricker wavelet truth kernel, sparse
//! Bernoulli-uniform reflectivity, seeded Gaussian noise, and the constraint
//! sets / starting points derived from the ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use soot_core::{
    conv_with_center, project_box_ball, BoxConstraint, KernelConstraint, DYKSTRA_MAX_SWEEPS,
    DYKSTRA_TOL,
};

use crate::BenchError;

/// Mixes the noise stream away from the reflectivity stream of the same
/// realization; shared across σ so a larger σ scales the same noise vector.
pub const NOISE_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// r(t) = (1 − 2π²f_p²t²)·exp(−π²f_p²t²) sampled at t = (i − ⌊s/2⌋)·dt.
pub fn ricker_wavelet(s: usize, peak_hz: f64, dt: f64) -> Vec<f64> {
    assert!(s >= 1 && peak_hz > 0.0 && dt > 0.0);
    let c = (s / 2) as isize;
    (0..s)
        .map(|i| {
            let t = (i as isize - c) as f64 * dt;
            let a = std::f64::consts::PI.powi(2) * peak_hz * peak_hz * t * t;
            (1.0 - 2.0 * a) * (-a).exp()
        })
        .collect()
}

/// Bernoulli-uniform spike train: each sample is zero with probability
/// 1 − spike_prob, otherwise uniform on [x_min, −0.1·x_max] ∪ [0.1·x_max, x_max].
pub fn gen_reflectivity(n: usize, spike_prob: f64, amp_range: (f64, f64), seed: u64) -> Vec<f64> {
    let (x_min, x_max) = amp_range;
    assert!(x_min < 0.0 && x_max > 0.0 && x_min <= -0.1 * x_max);
    assert!(spike_prob > 0.0 && spike_prob < 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neg_len = -0.1 * x_max - x_min;
    let pos_len = 0.9 * x_max;
    (0..n)
        .map(|_| {
            if rng.random::<f64>() >= spike_prob {
                return 0.0;
            }
            let u = rng.random::<f64>() * (neg_len + pos_len);
            if u < neg_len {
                x_min + u
            } else {
                0.1 * x_max + (u - neg_len)
            }
        })
        .collect()
}

/// h ∗ x plus seeded zero-mean Gaussian noise of standard deviation σ. The
/// standard-normal draws depend only on the seed, so different σ values scale
/// one shared noise realization.
pub fn gen_observation(x: &[f64], h: &[f64], sigma: f64, seed: u64) -> Vec<f64> {
    assert!(sigma >= 0.0);
    let mut y = conv_with_center(h, x, h.len() / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in &mut y {
        let g: f64 = rng.sample(StandardNormal);
        *v += sigma * g;
    }
    y
}

/// Kernel constraint read off the ground truth: componentwise bounds
/// [min h̄, max h̄] intersected with the ball of radius 1.05·‖h̄‖.
pub fn constraint_from_truth(h_true: &[f64]) -> KernelConstraint {
    let lo = h_true.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = h_true.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let norm = h_true.iter().map(|v| v * v).sum::<f64>().sqrt();
    KernelConstraint::new(lo, hi, 1.05 * norm).expect("truth kernel yields a valid constraint")
}

/// Starting points: x⁰ is the constant signal with ‖x⁰‖ = max(|x_min|, |x_max|),
/// h⁰ a centered Gaussian bump (std S/8) projected into the kernel set.
pub fn init_strategy(
    n: usize,
    s: usize,
    amp_range: (f64, f64),
    set_h: &KernelConstraint,
) -> Result<(Vec<f64>, Vec<f64>), BenchError> {
    let peak = amp_range.0.abs().max(amp_range.1.abs());
    let x0 = vec![peak / (n as f64).sqrt(); n];

    let c = (s / 2) as isize;
    let std = s as f64 / 8.0;
    let bump: Vec<f64> = (0..s)
        .map(|i| {
            let d = (i as isize - c) as f64;
            (-d * d / (2.0 * std * std)).exp()
        })
        .collect();
    let h0 = project_box_ball(&bump, set_h, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS).map_err(|e| {
        BenchError::Solver(format!("projecting the initial kernel into its set: {e}"))
    })?;
    assert!(set_h.contains(&h0, 1e-8), "initial kernel left the feasible set");
    Ok((x0, h0))
}

/// Box constraint for the signal block, straight from the amplitude bounds.
pub fn signal_box(amp_range: (f64, f64)) -> BoxConstraint {
    BoxConstraint::new(amp_range.0, amp_range.1).expect("validated amplitude bounds")
}
