//! Sparse blind deconvolution via a smoothed ℓ1/ℓ2 log-ratio penalty.
//!
//! The observation model is y = h ∗ x + w with a short kernel h, a sparse
//! signal x, and zero-padded "same" convolution. The main solver minimizes
//!
//!   F(x, h) = ½‖h ∗ x − y‖² + λ·log((ℓ1,α(x) + β) / ℓ2,η(x))
//!
//! over box-constrained x and box∩ball-constrained h by block-alternating
//! variable-metric forward-backward steps. A reweighted-ℓ1 baseline and a
//! single-step scalar-metric variant share the same problem and result types
//! through a small runtime registry.

pub mod error;
mod fft;
pub mod io;
pub mod num;
pub mod penalty;
pub mod prox;
pub mod signal;
pub mod solver;

pub use error::CoreError;
pub use penalty::{
    grad1_f, grad2_f, grad_phi, l1_smooth, l2_smooth, lipschitz_phi2_bound, metric_a1,
    metric_a1_with_l1, metric_a2, phi, DiagMetric, SootParams, EPS_METRIC,
};
pub use prox::{
    project_ball, project_box_ball, prox_box_diag_metric, BoxConstraint, KernelConstraint,
    ProxError, DYKSTRA_MAX_SWEEPS, DYKSTRA_TOL,
};
pub use signal::{
    adjoint_convolve_wrt_h, adjoint_convolve_wrt_x, conv_with_center, convolve, op_norm_sq_bound,
    op_norm_sq_bound_warm, Boundary, ConvOperator, Kernel, Signal,
};
pub use solver::{
    baseline_solve, ista_l1_box, objective_f, soft_threshold, solve_problem, soot_solve,
    BaselineConfig, BlindSolver, PalmSolver, Problem, ReweightedL1, SolveResult, SolveTrace,
    SolverConfig, SolverError, SolverRegistry, SolverSettings, SootSolver, Termination, TraceRow,
    DESCENT_TOL, FEAS_TOL, STEP_MAX, STEP_MIN,
};
