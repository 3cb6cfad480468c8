//! Reference single-step (PALM-style) proximal-gradient loop, coded
//! independently of the library solver: dense matrices rebuilt from the
//! brute-force convolution each iteration, gradient formulas written out
//! long-hand, scalar majorant steps.

use crate::conv::conv_same_brute;
use crate::dense::dense_matrix;
use nalgebra::{DMatrix, DVector};

pub struct PalmRefParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub step_x: f64,
    pub step_h: f64,
    pub box_lo: f64,
    pub box_hi: f64,
    pub kernel_lo: f64,
    pub kernel_hi: f64,
    pub radius: f64,
}

fn grad_ratio_penalty(x: &[f64], p: &PalmRefParams) -> Vec<f64> {
    let l1s: f64 = x.iter().map(|&v| (v * v + p.alpha * p.alpha).sqrt() - p.alpha).sum();
    let sumsq: f64 = x.iter().map(|&v| v * v).sum();
    let denom1 = l1s + p.beta;
    let denom2 = sumsq + p.eta * p.eta;
    x.iter()
        .map(|&v| p.lambda * (v / (v * v + p.alpha * p.alpha).sqrt() / denom1 - v / denom2))
        .collect()
}

/// Runs `iters` outer iterations of the one-inner-step scheme with scalar
/// majorants ν₁ = L1(h) + 9λ/(8η²) + λ/(βα) and ν₂ = max(L2(x), 1e-10), and
/// returns the iterate pairs after each outer iteration.
///
/// The kernel projection here is the plain radial ball projection followed by
/// a clamp; callers must pick kernel bounds wide enough that the clamp never
/// binds (asserted), so this equals the exact projection onto box∩ball.
pub fn palm_reference(
    y: &[f64],
    x0: &[f64],
    h0: &[f64],
    p: &PalmRefParams,
    iters: usize,
    l1_bound: &mut dyn FnMut(&[f64]) -> f64,
    l2_bound: &mut dyn FnMut(&[f64]) -> f64,
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = x0.len();
    let s = h0.len();
    let yv = DVector::from_column_slice(y);
    let mut x = x0.to_vec();
    let mut h = h0.to_vec();
    let mut out = Vec::with_capacity(iters);
    for _ in 0..iters {
        // x-step
        let hm: DMatrix<f64> = dense_matrix(n, n, |v| conv_same_brute(&h, v));
        let xv = DVector::from_column_slice(&x);
        let resid = &hm * &xv - &yv;
        let grad_quad = hm.transpose() * resid;
        let grad_pen = grad_ratio_penalty(&x, p);
        let nu1 = l1_bound(&h) + 9.0 * p.lambda / (8.0 * p.eta * p.eta) + p.lambda / (p.beta * p.alpha);
        for i in 0..n {
            let step = x[i] - p.step_x * (grad_quad[i] + grad_pen[i]) / nu1;
            x[i] = step.clamp(p.box_lo, p.box_hi);
        }
        // h-step
        let xm: DMatrix<f64> = dense_matrix(n, s, |v| conv_same_brute(v, &x));
        let hv = DVector::from_column_slice(&h);
        let residh = &xm * &hv - &yv;
        let gradh = xm.transpose() * residh;
        let nu2 = l2_bound(&x).max(1e-10);
        let mut ht: Vec<f64> = (0..s).map(|i| h[i] - p.step_h * gradh[i] / nu2).collect();
        let norm = ht.iter().map(|&v| v * v).sum::<f64>().sqrt();
        if norm > p.radius {
            let scale = p.radius / norm;
            for v in &mut ht {
                *v *= scale;
            }
        }
        for v in &mut ht {
            let clamped = v.clamp(p.kernel_lo, p.kernel_hi);
            assert_eq!(clamped, *v, "reference assumes an inactive kernel box");
            *v = clamped;
        }
        h = ht;
        out.push((x.clone(), h.clone()));
    }
    out
}

/// Dense projected-gradient iteration for ½‖Hx−y‖² over a box.
pub fn projected_gradient_dense(
    hmat: &DMatrix<f64>,
    y: &[f64],
    x0: &[f64],
    lo: f64,
    hi: f64,
    step: f64,
    iters: usize,
) -> Vec<f64> {
    let yv = DVector::from_column_slice(y);
    let mut x = DVector::from_column_slice(x0);
    for _ in 0..iters {
        let grad = hmat.transpose() * (hmat * &x - &yv);
        for i in 0..x.len() {
            x[i] = (x[i] - step * grad[i]).clamp(lo, hi);
        }
    }
    x.iter().copied().collect()
}
