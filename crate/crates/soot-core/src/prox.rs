//! Proximity operators for the two constraint sets: a per-coordinate box for
//! the signal and box∩ball for the kernel.
//!
//! Under any positive diagonal metric the weighted prox of a separable box
//! indicator decouples per coordinate into 1-D projections, so it is the
//! plain clip regardless of the weights. The kernel set only ever meets a
//! scalar metric (A2 = L2·I), so its weighted prox is the Euclidean
//! projection onto the intersection, computed with Dykstra's alternating
//! projections (plain alternating projection would land in the intersection
//! but not at the *closest* point).

use crate::error::CoreError;
use crate::num;
use crate::penalty::DiagMetric;
use thiserror::Error;

pub const DYKSTRA_TOL: f64 = 1e-10;
pub const DYKSTRA_MAX_SWEEPS: usize = 10_000;

/// [lo, hi] applied per coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxConstraint {
    lo: f64,
    hi: f64,
}

impl BoxConstraint {
    pub fn new(lo: f64, hi: f64) -> Result<Self, CoreError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(CoreError::InvalidParam {
                name: "box",
                reason: format!("need lo <= hi, got [{lo}, {hi}]"),
            });
        }
        Ok(BoxConstraint { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    pub fn contains_all(&self, xs: &[f64], tol: f64) -> bool {
        xs.iter().all(|&v| v >= self.lo - tol && v <= self.hi + tol)
    }
}

/// C = {h ∈ [lo, hi]^S : ‖h‖ ≤ radius}. Whether C is empty depends on S when
/// the box excludes 0, so the dimension-aware check happens at projection
/// (and problem-construction) time, not here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConstraint {
    lo: f64,
    hi: f64,
    radius: f64,
}

impl KernelConstraint {
    pub fn new(lo: f64, hi: f64, radius: f64) -> Result<Self, CoreError> {
        BoxConstraint::new(lo, hi)?;
        if !radius.is_finite() || radius <= 0.0 {
            return Err(CoreError::InvalidParam {
                name: "radius",
                reason: format!("must be a finite positive real, got {radius}"),
            });
        }
        Ok(KernelConstraint { lo, hi, radius })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn box_part(&self) -> BoxConstraint {
        BoxConstraint { lo: self.lo, hi: self.hi }
    }

    /// The box point of least norm has every coordinate clamp(0); C is
    /// nonempty iff that point is inside the ball.
    pub fn is_nonempty_for_len(&self, s: usize) -> bool {
        let c = 0.0f64.clamp(self.lo, self.hi);
        (s as f64).sqrt() * c.abs() <= self.radius * (1.0 + 1e-12)
    }

    pub fn contains(&self, h: &[f64], tol: f64) -> bool {
        self.box_part().contains_all(h, tol)
            && num::norm2(h) <= self.radius + tol * self.radius.max(1.0)
    }
}

#[derive(Debug, Error)]
pub enum ProxError {
    #[error("box∩ball set is empty: min box norm {min_norm:.6} exceeds radius {radius:.6}")]
    EmptySet { min_norm: f64, radius: f64 },
    #[error("Dykstra projection did not converge within {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence {
        sweeps: usize,
        residual: f64,
        /// last iterate, for diagnostics
        last: Vec<f64>,
    },
}

/// Weighted prox of the box indicator: the clip, independent of the metric.
pub fn prox_box_diag_metric(z: &[f64], bounds: &BoxConstraint, metric: &DiagMetric) -> Vec<f64> {
    assert_eq!(metric.len(), z.len(), "metric/point length mismatch");
    z.iter().map(|&v| bounds.clamp(v)).collect()
}

/// Euclidean projection onto the centered ℓ2 ball of the given radius.
pub fn project_ball(z: &[f64], radius: f64) -> Vec<f64> {
    assert!(radius >= 0.0);
    let n = num::norm2(z);
    if n <= radius {
        z.to_vec()
    } else {
        let s = radius / n;
        z.iter().map(|&v| v * s).collect()
    }
}

/// Euclidean projection onto box∩ball by Dykstra's alternating projections.
///
/// Each sweep projects onto the ball and then the box, with the usual
/// correction terms; stops once an entire sweep moves the full state — the
/// iterate and both correction vectors — by at most `tol` in ℓ2. The iterate
/// alone can sit still at a feasible but wrong point while the corrections
/// keep drifting (the Birgin–Raydan observation), so its movement is not a
/// safe stopping signal by itself. The returned point is exactly box-feasible
/// (the sweep ends on the box) and ball-feasible to within the sweep
/// residual.
pub fn project_box_ball(
    z: &[f64],
    c: &KernelConstraint,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, ProxError> {
    if !c.is_nonempty_for_len(z.len()) {
        let m = 0.0f64.clamp(c.lo, c.hi);
        return Err(ProxError::EmptySet {
            min_norm: (z.len() as f64).sqrt() * m.abs(),
            radius: c.radius,
        });
    }
    let s = z.len();
    let mut x = z.to_vec();
    let mut p = vec![0.0; s]; // ball correction
    let mut q = vec![0.0; s]; // box correction
    let mut work = vec![0.0; s];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        for i in 0..s {
            work[i] = x[i] + p[i];
        }
        let a = project_ball(&work, c.radius);
        let mut delta_sq = 0.0;
        for i in 0..s {
            let p_new = work[i] - a[i];
            delta_sq += (p_new - p[i]) * (p_new - p[i]);
            p[i] = p_new;
            work[i] = a[i] + q[i];
        }
        for i in 0..s {
            let b = work[i].clamp(c.lo, c.hi);
            let q_new = work[i] - b;
            delta_sq += (q_new - q[i]) * (q_new - q[i]);
            q[i] = q_new;
            let d = b - x[i];
            delta_sq += d * d;
            x[i] = b;
        }
        residual = delta_sq.sqrt();
        if residual <= tol {
            return Ok(x);
        }
    }
    Err(ProxError::NoConvergence { sweeps: max_iter, residual, last: x })
}
