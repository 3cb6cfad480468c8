//! Projection and prox oracles: KKT bisection for the box∩ball set and
//! 1-D search oracles for separable proximal maps.

/// Euclidean projection onto {w ∈ [lo,hi]^n : ‖w‖ ≤ radius} via the KKT
/// characterization w(μ) = clamp(z/(1+μ)), ‖w(μ)‖ monotone decreasing in μ;
/// bisection to machine-level interval width. Panics on infeasible sets.
pub fn project_box_ball_kkt(z: &[f64], lo: f64, hi: f64, radius: f64) -> Vec<f64> {
    assert!(lo <= hi && radius > 0.0);
    let w_of = |mu: f64| -> Vec<f64> {
        z.iter().map(|&v| (v / (1.0 + mu)).clamp(lo, hi)).collect()
    };
    let norm = |w: &[f64]| w.iter().map(|&v| v * v).sum::<f64>().sqrt();
    let w0 = w_of(0.0);
    if norm(&w0) <= radius * (1.0 + 1e-14) {
        return w0;
    }
    let mut mu_lo = 0.0;
    let mut mu_hi = 1.0;
    while norm(&w_of(mu_hi)) > radius {
        mu_hi *= 2.0;
        assert!(mu_hi < 1e18, "box-ball instance is infeasible (min-norm box point outside ball)");
    }
    for _ in 0..200 {
        let mid = 0.5 * (mu_lo + mu_hi);
        if norm(&w_of(mid)) > radius {
            mu_lo = mid;
        } else {
            mu_hi = mid;
        }
    }
    w_of(0.5 * (mu_lo + mu_hi))
}

/// Ternary search for the minimizer of a strictly convex 1-D function on [a, b].
pub fn argmin_1d(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    for _ in 0..iters {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    0.5 * (a + b)
}

/// Grid-plus-refinement oracle for prox of t·|·| at z:
/// argmin_w t|w| + ½(w−z)².
pub fn soft_threshold_oracle(z: f64, t: f64) -> f64 {
    assert!(t >= 0.0);
    let obj = |w: f64| t * w.abs() + 0.5 * (w - z) * (w - z);
    let span = z.abs() + t + 1.0;
    // coarse grid locates the basin, ternary search refines it
    let cells = 4000usize;
    let width = 2.0 * span / cells as f64;
    let mut best = (obj(-span), -span);
    for i in 0..=cells {
        let w = -span + i as f64 * width;
        let v = obj(w);
        if v < best.0 {
            best = (v, w);
        }
    }
    argmin_1d(obj, best.1 - width, best.1 + width, 200)
}
