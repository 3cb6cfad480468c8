//! The smoothed ℓ1/ℓ2 log-ratio penalty
//!
//!   φ(x) = λ · log( (ℓ1,α(x) + β) / ℓ2,η(x) ),
//!
//! with ℓ1,α(x) = Σ_n (√(x_n² + α²) − α) and ℓ2,η(x) = √(‖x‖² + η²), its
//! gradient, the partial gradients of the smooth objective
//! f(x, h) = ½‖h ∗ x − y‖² + φ(x), and the quadratic-majorant metrics used
//! by the variable-metric forward-backward solver:
//!
//!   A1(x, h) = (L1(h) + 9λ/(8η²)) I + (λ/(ℓ1,α(x)+β)) · Diag(1/√(x_n²+α²))
//!   A2(x)    = L2(x) I
//!
//! where L1(h), L2(x) are squared-spectral-norm bounds of the convolution
//! operators. Splitting φ = φ₁ + φ₂ with φ₂ = −λ·log ℓ2,η,  9λ/(8η²) is a
//! Lipschitz constant of ∇φ₂ (the maximum of the bound
//! χ(u) = λ(3u²+η²)/(u²+η²)² at u = η/√3) and the diagonal term majorizes
//! the hyperbolic smoothing of φ₁.

use crate::error::CoreError;
use crate::num;
use crate::signal::{adjoint_conv_raw, adjoint_conv_wrt_h_raw, conv_with_center, op_norm_sq_bound};

/// Floor applied by callers to L2(x) so the scalar metric stays invertible
/// when x vanishes (transiently possible; the analysis assumes SPD metrics).
pub const EPS_METRIC: f64 = 1e-10;

/// Penalty constants (λ, α, β, η), all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SootParams {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
}

impl SootParams {
    pub fn new(lambda: f64, alpha: f64, beta: f64, eta: f64) -> Result<Self, CoreError> {
        for (name, v) in [("lambda", lambda), ("alpha", alpha), ("beta", beta), ("eta", eta)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(CoreError::InvalidParam {
                    name,
                    reason: format!("must be a finite positive real, got {v}"),
                });
            }
        }
        Ok(SootParams { lambda, alpha, beta, eta })
    }
}

/// Positive diagonal quadratic-majorant metric together with the eigenvalue
/// bracket [ν_low, ν_high] it is guaranteed to live in.
#[derive(Debug, Clone)]
pub struct DiagMetric {
    diag: Vec<f64>,
    nu_low: f64,
    nu_high: f64,
}

impl DiagMetric {
    pub fn new(diag: Vec<f64>, nu_low: f64, nu_high: f64) -> Self {
        debug_assert!(nu_low > 0.0 && nu_low <= nu_high && nu_high.is_finite());
        debug_assert!(diag
            .iter()
            .all(|&d| d >= nu_low * (1.0 - 1e-12) && d <= nu_high * (1.0 + 1e-12)));
        DiagMetric { diag, nu_low, nu_high }
    }

    pub fn entries(&self) -> &[f64] {
        &self.diag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// (ν_low, ν_high)
    pub fn nu_bounds(&self) -> (f64, f64) {
        (self.nu_low, self.nu_high)
    }
}

/// ℓ1,α(x) = Σ (√(x_n² + α²) − α). Equals ‖x‖₁ at α = 0, and is 0 at x = 0.
pub fn l1_smooth(x: &[f64], alpha: f64) -> f64 {
    assert!(alpha >= 0.0 && alpha.is_finite());
    num::sum(x.iter().map(|&v| v.hypot(alpha) - alpha))
}

/// ℓ2,η(x) = √(‖x‖² + η²) ≥ η. Equals ‖x‖₂ at η = 0.
pub fn l2_smooth(x: &[f64], eta: f64) -> f64 {
    assert!(eta >= 0.0 && eta.is_finite());
    (num::sum_sq(x) + eta * eta).sqrt()
}

/// φ(x) = λ·log((ℓ1,α(x)+β)/ℓ2,η(x)); finite for every finite x because the
/// numerator is ≥ β > 0 and the denominator ≥ η > 0.
pub fn phi(x: &[f64], p: &SootParams) -> f64 {
    p.lambda * ((l1_smooth(x, p.alpha) + p.beta) / l2_smooth(x, p.eta)).ln()
}

/// ∇φ, componentwise λ·[ x_n/√(x_n²+α²)/(ℓ1,α(x)+β) − x_n/(‖x‖²+η²) ].
pub fn grad_phi(x: &[f64], p: &SootParams) -> Vec<f64> {
    let denom1 = l1_smooth(x, p.alpha) + p.beta;
    let denom2 = num::sum_sq(x) + p.eta * p.eta;
    x.iter()
        .map(|&v| p.lambda * (v / v.hypot(p.alpha) / denom1 - v / denom2))
        .collect()
}

/// ∇₁f(x,h) = Hᵀ(Hx − y) + ∇φ(x).
pub fn grad1_f(x: &[f64], h: &[f64], y: &[f64], p: &SootParams) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    let mut r = conv_with_center(h, x, h.len() / 2);
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri -= yi;
    }
    let mut g = adjoint_conv_raw(h, &r);
    for (gi, pi) in g.iter_mut().zip(grad_phi(x, p)) {
        *gi += pi;
    }
    g
}

/// ∇₂f(x,h) = Xᵀ(Xh − y); φ does not depend on h.
pub fn grad2_f(x: &[f64], h: &[f64], y: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), y.len());
    let mut r = conv_with_center(h, x, h.len() / 2);
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri -= yi;
    }
    adjoint_conv_wrt_h_raw(x, &r, h.len())
}

/// A1(x, h) with L1(h) freshly bounded. The solver recomputes L1(h) once per
/// outer iteration (h only changes there) and uses [`metric_a1_with_l1`].
pub fn metric_a1(x: &[f64], h: &[f64], p: &SootParams) -> DiagMetric {
    metric_a1_with_l1(x, op_norm_sq_bound(h, x.len()), p)
}

/// A1(x, h) given a precomputed L1(h) ≥ ‖H‖².
///
/// Reported bracket: ν_low = 9λ/(8η²) and ν_high = L1 + 9λ/(8η²) + λ/(βα),
/// the analytic bound on the diagonal correction (ℓ1,α ≥ 0, √(x²+α²) ≥ α).
pub fn metric_a1_with_l1(x: &[f64], l1_h: f64, p: &SootParams) -> DiagMetric {
    debug_assert!(l1_h >= 0.0);
    let lip = lipschitz_phi2_bound(p);
    let base = l1_h + lip;
    let scale = p.lambda / (l1_smooth(x, p.alpha) + p.beta);
    let diag = x.iter().map(|&v| base + scale / v.hypot(p.alpha)).collect();
    DiagMetric::new(diag, lip, base + p.lambda / (p.beta * p.alpha))
}

/// L2(x) = squared-spectral-norm bound of h ↦ x ∗ h. The conv-by-x matrix on
/// length-S kernels is a column submatrix of the full N×N same-convolution
/// matrix generated by x (column s maps to column s + ⌊N/2⌋ − ⌊S/2⌋), so one
/// bound serves every S ≤ N. Callers floor the result at [`EPS_METRIC`].
pub fn metric_a2(x: &[f64]) -> f64 {
    op_norm_sq_bound(x, x.len())
}

/// 9λ/(8η²), the Lipschitz bound on ∇φ₂ used inside A1.
pub fn lipschitz_phi2_bound(p: &SootParams) -> f64 {
    9.0 * p.lambda / (8.0 * p.eta * p.eta)
}
