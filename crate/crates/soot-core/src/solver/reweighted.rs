//! Reweighted-ℓ1 alternating baseline: the ℓ1/ℓ2 ratio is convexified by
//! freezing the denominator at the previous iterate, the resulting weighted
//! ℓ1 problem is handled by ISTA with box clipping, and the kernel gets one
//! projected-gradient step per outer iteration.

use crate::error::CoreError;
use crate::num;
use crate::penalty::{self, SootParams, EPS_METRIC};
use crate::prox::{self, BoxConstraint, KernelConstraint, DYKSTRA_TOL};
use crate::signal::{self, op_norm_sq_bound_warm};
use crate::solver::{
    objective_f, SolveResult, SolveTrace, SolverError, Termination, TraceRow, FEAS_TOL,
};
use std::time::Instant;

/// Denominator floor for the reweighting factor λ_b/‖x‖.
pub const REWEIGHT_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineConfig {
    /// ℓ1 weight before reweighting. Zero is allowed and turns the x-phase
    /// into plain projected gradient descent.
    pub lambda_b: f64,
    /// ISTA iterations per x-phase.
    pub ista_iters: usize,
    pub outer_iters: usize,
    /// Same role as the main solver's: stop when ‖x_k − x_{k−1}‖ ≤ stop_tol·√N.
    pub stop_tol: f64,
    /// Step = step_scale / Lipschitz bound, step_scale in (0, 1].
    pub step_scale: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            lambda_b: 1e-3,
            ista_iters: 71,
            outer_iters: 5000,
            stop_tol: 1e-6,
            step_scale: 0.95,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !self.lambda_b.is_finite() || self.lambda_b < 0.0 {
            return Err(SolverError::Config(format!(
                "lambda_b must be a finite nonnegative real, got {}",
                self.lambda_b
            )));
        }
        if self.ista_iters == 0 || self.outer_iters == 0 {
            return Err(SolverError::Config("iteration counts must be at least 1".into()));
        }
        if !self.stop_tol.is_finite() || self.stop_tol < 0.0 {
            return Err(SolverError::Config(format!(
                "stop_tol must be a finite nonnegative real, got {}",
                self.stop_tol
            )));
        }
        if !(self.step_scale > 0.0 && self.step_scale <= 1.0) {
            return Err(SolverError::Config(format!(
                "step_scale must lie in (0, 1], got {}",
                self.step_scale
            )));
        }
        Ok(())
    }
}

/// sign(z)·max(|z| − t, 0) per component; t = 0 returns z unchanged.
pub fn soft_threshold(z: &[f64], t: f64) -> Vec<f64> {
    assert!(t >= 0.0, "threshold must be nonnegative");
    if t == 0.0 {
        return z.to_vec();
    }
    z.iter().map(|&v| v.signum() * (v.abs() - t).max(0.0)).collect()
}

/// ISTA on ½‖Hx − y‖² + weight·‖x‖₁ over the box, starting from `x0`, with
/// step step_scale/L1(h). Thresholding and clipping commute into the exact
/// prox of the sum whenever the box contains 0; otherwise clip-after-threshold
/// is the documented approximation.
pub fn ista_l1_box(
    y: &[f64],
    h: &[f64],
    x0: &[f64],
    weight: f64,
    g1: &BoxConstraint,
    iters: usize,
    step_scale: f64,
) -> Vec<f64> {
    let l1 = signal::op_norm_sq_bound(h, y.len()).max(EPS_METRIC);
    let mut x = x0.to_vec();
    ista_phase(&mut x, y, h, weight, g1, iters, step_scale / l1);
    x
}

/// The shared x-phase body: `iters` thresholded gradient steps at a fixed
/// step size, clipping after each threshold.
fn ista_phase(
    x: &mut [f64],
    y: &[f64],
    h: &[f64],
    weight: f64,
    g1: &BoxConstraint,
    iters: usize,
    step: f64,
) {
    let t = step * weight;
    for _ in 0..iters {
        let r = residual(h, x, y);
        let g = signal::adjoint_conv_raw(h, &r);
        for (xi, gi) in x.iter_mut().zip(&g) {
            let z = *xi - step * gi;
            let s = if t == 0.0 { z } else { z.signum() * (z.abs() - t).max(0.0) };
            *xi = g1.clamp(s);
        }
    }
}

fn residual(h: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut r = signal::conv_with_center(h, x, h.len() / 2);
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri -= *yi;
    }
    r
}

/// Full alternating baseline. The trace reports the main solver's objective F
/// at each iterate (`trace_params` supplies its penalty constants) so traces
/// from both methods are directly comparable; the ν columns carry the inverse
/// ISTA step L1(h)/step_scale.
pub fn baseline_solve(
    y: &[f64],
    init_x: &[f64],
    init_h: &[f64],
    cfg: &BaselineConfig,
    g1: &BoxConstraint,
    g2: &KernelConstraint,
    trace_params: &SootParams,
) -> Result<SolveResult, SolverError> {
    cfg.validate()?;
    check_shapes(y, init_x, init_h)?;
    if !g2.is_nonempty_for_len(init_h.len()) {
        return Err(SolverError::InfeasibleInit(format!(
            "box∩ball is empty for kernel length {}",
            init_h.len()
        )));
    }
    if !g1.contains_all(init_x, FEAS_TOL) {
        return Err(SolverError::InfeasibleInit(
            "signal init violates the box constraint".into(),
        ));
    }
    if !g2.contains(init_h, FEAS_TOL) {
        return Err(SolverError::InfeasibleInit(
            "kernel init violates the box∩ball constraint".into(),
        ));
    }

    let n = y.len();
    let clock = Instant::now();
    let mut x = init_x.to_vec();
    let mut h = init_h.to_vec();
    let mut x_prev = x.clone();
    let mut h_prev = h.clone();

    let (mut l1h, mut vh) = op_norm_sq_bound_warm(&h, n, None);
    let mut vx: Option<Vec<f64>> = None;

    let mut trace = SolveTrace::default();
    let nu0 = l1h.max(EPS_METRIC) / cfg.step_scale;
    trace.rows.push(TraceRow {
        k: 0,
        f: objective_f(&x, &h, y, trace_params, g1, g2),
        x_delta: 0.0,
        h_delta: 0.0,
        wall_time_s: clock.elapsed().as_secs_f64(),
        nu_low: nu0,
        nu_high: nu0,
    });

    let stop_threshold = cfg.stop_tol * (n as f64).sqrt();
    let mut termination = Termination::MaxOuter;

    for k in 1..=cfg.outer_iters {
        // x-phase: ISTA with the weight frozen at the previous iterate
        let weight = cfg.lambda_b / num::norm2(&x).max(REWEIGHT_FLOOR);
        let step = cfg.step_scale / l1h.max(EPS_METRIC);
        ista_phase(&mut x, y, &h, weight, g1, cfg.ista_iters, step);

        // h-phase: one projected-gradient step
        let (l2_raw, vx_new) = op_norm_sq_bound_warm(&x, n, vx.as_deref());
        vx = Some(vx_new);
        let hstep = cfg.step_scale / l2_raw.max(EPS_METRIC);
        let gh = penalty::grad2_f(&x, &h, y);
        let tilde: Vec<f64> = h.iter().zip(&gh).map(|(hi, gi)| hi - hstep * gi).collect();
        h = prox::project_box_ball(&tilde, g2, DYKSTRA_TOL, super::SOLVER_PROJ_SWEEPS)
            .map_err(|source| SolverError::Projection { k, source })?;
        let (l1h_new, vh_new) = op_norm_sq_bound_warm(&h, n, Some(&vh));
        l1h = l1h_new;
        vh = vh_new;

        let x_delta = num::dist2(&x, &x_prev);
        let h_delta = num::dist2(&h, &h_prev);
        x_prev.copy_from_slice(&x);
        h_prev.copy_from_slice(&h);

        let nu = l1h.max(EPS_METRIC) / cfg.step_scale;
        trace.rows.push(TraceRow {
            k,
            f: objective_f(&x, &h, y, trace_params, g1, g2),
            x_delta,
            h_delta,
            wall_time_s: clock.elapsed().as_secs_f64(),
            nu_low: nu,
            nu_high: nu,
        });

        if x_delta <= stop_threshold {
            termination = Termination::Converged;
            break;
        }
    }

    Ok(SolveResult { x_hat: x, h_hat: h, trace, termination })
}

fn check_shapes(y: &[f64], init_x: &[f64], init_h: &[f64]) -> Result<(), SolverError> {
    if y.is_empty() {
        return Err(CoreError::Empty { what: "observation" }.into());
    }
    if init_x.len() != y.len() {
        return Err(CoreError::LengthMismatch { expected: y.len(), got: init_x.len() }.into());
    }
    if init_h.is_empty() {
        return Err(CoreError::Empty { what: "kernel init" }.into());
    }
    if init_h.len() > y.len() {
        return Err(CoreError::KernelTooLong { s: init_h.len(), n: y.len() }.into());
    }
    for (what, v) in [("observation", y), ("signal init", init_x), ("kernel init", init_h)] {
        if let Some(i) = v.iter().position(|a| !a.is_finite()) {
            return Err(CoreError::NonFinite { what, index: i }.into());
        }
    }
    Ok(())
}
