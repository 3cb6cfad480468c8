//! Block-alternating solvers for blind deconvolution, plus the shared
//! problem/result types and the name-indexed solver registry.

mod registry;
mod reweighted;
mod soot;

pub use registry::{BlindSolver, PalmSolver, ReweightedL1, SolverRegistry, SolverSettings, SootSolver};
pub use reweighted::{baseline_solve, ista_l1_box, soft_threshold, BaselineConfig};
pub use soot::{solve_problem, soot_solve};

use crate::error::CoreError;
use crate::num;
use crate::penalty::{self, SootParams};
use crate::prox::{BoxConstraint, KernelConstraint, ProxError};
use crate::signal;
use std::io::Write;
use thiserror::Error;

/// Objective decrease beyond this tolerance counts as a surrogate violation.
pub const DESCENT_TOL: f64 = 1e-9;
/// Slack allowed when checking whether a point satisfies the constraints.
pub const FEAS_TOL: f64 = 1e-8;

pub const STEP_MIN: f64 = 0.01;
pub const STEP_MAX: f64 = 1.99;

/// Sweep budget granted to the box∩ball projection inside solver loops.
/// More generous than the standalone default: when Dykstra enters a slow
/// geometric tail near a box/ball pinch, finishing it costs microseconds and
/// spares the whole run from a spurious failure.
pub const SOLVER_PROJ_SWEEPS: usize = 200_000;

/// One blind-deconvolution instance: data, starting point, penalty
/// parameters, and the two constraint sets.
#[derive(Debug, Clone)]
pub struct Problem {
    pub y: Vec<f64>,
    pub init_x: Vec<f64>,
    pub init_h: Vec<f64>,
    pub params: SootParams,
    pub box_x: BoxConstraint,
    pub set_h: KernelConstraint,
}

impl Problem {
    pub fn new(
        y: Vec<f64>,
        init_x: Vec<f64>,
        init_h: Vec<f64>,
        params: SootParams,
        box_x: BoxConstraint,
        set_h: KernelConstraint,
    ) -> Result<Self, CoreError> {
        if y.is_empty() {
            return Err(CoreError::Empty { what: "observation" });
        }
        if init_x.len() != y.len() {
            return Err(CoreError::LengthMismatch { expected: y.len(), got: init_x.len() });
        }
        if init_h.is_empty() {
            return Err(CoreError::Empty { what: "kernel init" });
        }
        if init_h.len() > y.len() {
            return Err(CoreError::KernelTooLong { s: init_h.len(), n: y.len() });
        }
        if !set_h.is_nonempty_for_len(init_h.len()) {
            return Err(CoreError::InvalidParam {
                name: "set_h",
                reason: format!(
                    "box∩ball is empty for kernel length {}: min box norm exceeds radius {}",
                    init_h.len(),
                    set_h.radius()
                ),
            });
        }
        for (what, v) in [("observation", &y), ("signal init", &init_x), ("kernel init", &init_h)] {
            if let Some(i) = v.iter().position(|a| !a.is_finite()) {
                return Err(CoreError::NonFinite { what, index: i });
            }
        }
        Ok(Problem { y, init_x, init_h, params, box_x, set_h })
    }

    pub fn signal_len(&self) -> usize {
        self.y.len()
    }

    pub fn kernel_len(&self) -> usize {
        self.init_h.len()
    }
}

/// Step-size and loop-count knobs for the alternating solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// x-updates per outer iteration (J ≥ 1).
    pub inner_x: usize,
    /// h-updates per outer iteration (I ≥ 1).
    pub inner_h: usize,
    /// Relaxation γ_x in [0.01, 1.99].
    pub step_x: f64,
    /// Relaxation γ_h in [0.01, 1.99].
    pub step_h: f64,
    /// Outer loop stops when ‖x_k − x_{k−1}‖ ≤ stop_tol·√N.
    pub stop_tol: f64,
    pub max_outer: usize,
    /// Abort with a DescentViolation termination if the objective rises.
    pub check_descent: bool,
    /// Replace the diagonal x-metric with its scalar upper bound.
    pub scalar_metric: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            inner_x: 1,
            inner_h: 1,
            step_x: 1.0,
            step_h: 1.0,
            stop_tol: 1e-6,
            max_outer: 5000,
            check_descent: true,
            scalar_metric: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.inner_x == 0 || self.inner_h == 0 {
            return Err(SolverError::Config("inner loop counts must be at least 1".into()));
        }
        for (name, s) in [("step_x", self.step_x), ("step_h", self.step_h)] {
            if !(STEP_MIN..=STEP_MAX).contains(&s) {
                return Err(SolverError::Config(format!(
                    "{name} must lie in [{STEP_MIN}, {STEP_MAX}], got {s}"
                )));
            }
        }
        if !self.stop_tol.is_finite() || self.stop_tol < 0.0 {
            return Err(SolverError::Config(format!(
                "stop_tol must be a finite nonnegative real, got {}",
                self.stop_tol
            )));
        }
        if self.max_outer == 0 {
            return Err(SolverError::Config("max_outer must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-outer-iteration record; row 0 describes the starting point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub f: f64,
    pub x_delta: f64,
    pub h_delta: f64,
    pub wall_time_s: f64,
    pub nu_low: f64,
    pub nu_high: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SolveTrace {
    pub rows: Vec<TraceRow>,
}

impl SolveTrace {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,F,x_delta,h_delta,wall_time_s,nu_low,nu_high")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.k, r.f, r.x_delta, r.h_delta, r.wall_time_s, r.nu_low, r.nu_high
            )?;
        }
        Ok(())
    }

    /// True when F never rises by more than `tol` between consecutive rows.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].f <= w[0].f + tol)
    }

    pub fn final_f(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// ‖x_k − x_{k−1}‖ dropped below stop_tol·√N.
    Converged,
    MaxOuter,
    /// The objective rose beyond DESCENT_TOL; the trace holds the offending row.
    DescentViolation,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x_hat: Vec<f64>,
    pub h_hat: Vec<f64>,
    pub trace: SolveTrace,
    pub termination: Termination,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("infeasible starting point: {0}")]
    InfeasibleInit(String),
    #[error("kernel projection failed at outer iteration {k}: {source}")]
    Projection {
        k: usize,
        #[source]
        source: ProxError,
    },
    #[error("unknown method {0:?}; known methods: {1}")]
    UnknownMethod(String, String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Full objective F(x, h) = ½‖h∗x − y‖² + φ(x) with the constraint
/// indicators folded in: returns +∞ outside the feasible set (to FEAS_TOL).
pub fn objective_f(
    x: &[f64],
    h: &[f64],
    y: &[f64],
    params: &SootParams,
    box_x: &BoxConstraint,
    set_h: &KernelConstraint,
) -> f64 {
    if !box_x.contains_all(x, FEAS_TOL) || !set_h.contains(h, FEAS_TOL) {
        return f64::INFINITY;
    }
    let hx = signal::conv_with_center(h, x, h.len() / 2);
    let mut r = hx;
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri -= *yi;
    }
    0.5 * num::sum_sq(&r) + penalty::phi(x, params)
}
