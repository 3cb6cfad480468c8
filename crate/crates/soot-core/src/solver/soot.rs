//! The block-alternating variable-metric forward-backward solver.
//!
//! Each outer iteration runs J proximal-gradient updates on the signal block
//! under the diagonal metric A1(x, h), then I updates on the kernel block
//! under the scalar metric L2(x)·I, projecting the kernel back onto box∩ball.
//! Spectral-norm bounds are power-iterated with warm starts, since consecutive
//! iterates barely move the leading eigenvector.

use crate::error::CoreError;
use crate::num;
use crate::penalty::{self, SootParams, EPS_METRIC};
use crate::prox::{self, BoxConstraint, KernelConstraint, DYKSTRA_TOL};
use crate::signal::op_norm_sq_bound_warm;
use crate::solver::{
    objective_f, Problem, SolveResult, SolveTrace, SolverConfig, SolverError, Termination,
    TraceRow, DESCENT_TOL, FEAS_TOL,
};
use std::time::Instant;

pub fn solve_problem(prob: &Problem, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    soot_solve(
        &prob.y,
        &prob.init_x,
        &prob.init_h,
        &prob.params,
        &prob.box_x,
        &prob.set_h,
        cfg,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn soot_solve(
    y: &[f64],
    init_x: &[f64],
    init_h: &[f64],
    params: &SootParams,
    box_x: &BoxConstraint,
    set_h: &KernelConstraint,
    cfg: &SolverConfig,
) -> Result<SolveResult, SolverError> {
    cfg.validate()?;
    check_inputs(y, init_x, init_h)?;
    if !set_h.is_nonempty_for_len(init_h.len()) {
        return Err(SolverError::InfeasibleInit(format!(
            "box∩ball is empty for kernel length {}",
            init_h.len()
        )));
    }
    if !box_x.contains_all(init_x, FEAS_TOL) {
        return Err(SolverError::InfeasibleInit(
            "signal init violates the box constraint".into(),
        ));
    }
    if !set_h.contains(init_h, FEAS_TOL) {
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

    // ‖H‖² bound for the current h; the warm vectors persist across outers.
    let (mut l1h, mut vh) = op_norm_sq_bound_warm(&h, n, None);
    let mut vx: Option<Vec<f64>> = None;

    let mut trace = SolveTrace::default();
    let mut f_prev = objective_f(&x, &h, y, params, box_x, set_h);
    let (nu_lo0, nu_hi0) = nu_bounds_for(&x, l1h, params, cfg.scalar_metric);
    trace.rows.push(TraceRow {
        k: 0,
        f: f_prev,
        x_delta: 0.0,
        h_delta: 0.0,
        wall_time_s: clock.elapsed().as_secs_f64(),
        nu_low: nu_lo0,
        nu_high: nu_hi0,
    });

    let stop_threshold = cfg.stop_tol * (n as f64).sqrt();
    let mut termination = Termination::MaxOuter;

    for k in 1..=cfg.max_outer {
        // --- signal block: J variable-metric forward-backward steps ---
        let mut nu_pair = (0.0, 0.0);
        for _ in 0..cfg.inner_x {
            let g = penalty::grad1_f(&x, &h, y, params);
            if cfg.scalar_metric {
                let nu = l1h
                    + penalty::lipschitz_phi2_bound(params)
                    + params.lambda / (params.beta * params.alpha);
                nu_pair = (nu, nu);
                for (xi, gi) in x.iter_mut().zip(&g) {
                    *xi = box_x.clamp(*xi - cfg.step_x * gi / nu);
                }
            } else {
                let metric = penalty::metric_a1_with_l1(&x, l1h, params);
                nu_pair = metric.nu_bounds();
                for ((xi, gi), di) in x.iter_mut().zip(&g).zip(metric.entries()) {
                    *xi = box_x.clamp(*xi - cfg.step_x * gi / di);
                }
            }
        }

        // --- kernel block: I forward-backward steps under L2(x)·I ---
        let (l2_raw, vx_new) = op_norm_sq_bound_warm(&x, n, vx.as_deref());
        vx = Some(vx_new);
        let l2 = l2_raw.max(EPS_METRIC);
        for _ in 0..cfg.inner_h {
            let g = penalty::grad2_f(&x, &h, y);
            let step = cfg.step_h / l2;
            let tilde: Vec<f64> = h.iter().zip(&g).map(|(hi, gi)| hi - step * gi).collect();
            h = prox::project_box_ball(&tilde, set_h, DYKSTRA_TOL, super::SOLVER_PROJ_SWEEPS)
                .map_err(|source| SolverError::Projection { k, source })?;
        }
        let (l1h_new, vh_new) = op_norm_sq_bound_warm(&h, n, Some(&vh));
        l1h = l1h_new;
        vh = vh_new;

        let x_delta = num::dist2(&x, &x_prev);
        let h_delta = num::dist2(&h, &h_prev);
        x_prev.copy_from_slice(&x);
        h_prev.copy_from_slice(&h);

        let f = objective_f(&x, &h, y, params, box_x, set_h);
        trace.rows.push(TraceRow {
            k,
            f,
            x_delta,
            h_delta,
            wall_time_s: clock.elapsed().as_secs_f64(),
            nu_low: nu_pair.0,
            nu_high: nu_pair.1,
        });

        if cfg.check_descent && f > f_prev + DESCENT_TOL {
            termination = Termination::DescentViolation;
            break;
        }
        f_prev = f;

        if x_delta <= stop_threshold {
            termination = Termination::Converged;
            break;
        }
    }

    Ok(SolveResult { x_hat: x, h_hat: h, trace, termination })
}

fn nu_bounds_for(x: &[f64], l1h: f64, params: &SootParams, scalar: bool) -> (f64, f64) {
    if scalar {
        let nu = l1h
            + penalty::lipschitz_phi2_bound(params)
            + params.lambda / (params.beta * params.alpha);
        (nu, nu)
    } else {
        penalty::metric_a1_with_l1(x, l1h, params).nu_bounds()
    }
}

fn check_inputs(y: &[f64], init_x: &[f64], init_h: &[f64]) -> Result<(), SolverError> {
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
