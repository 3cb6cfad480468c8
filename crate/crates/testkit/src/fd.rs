//! Central finite differences for gradient and Hessian checks.

use nalgebra::DMatrix;

/// Central-difference gradient with per-coordinate step 1e-6·(1 + |x_i|).
pub fn fd_gradient(mut f: impl FnMut(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-6 * (1.0 + x[i].abs());
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// Central second differences; `rel_step` around 1e-4 balances truncation
/// against roundoff for smooth f.
pub fn fd_hessian(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], rel_step: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut hess = DMatrix::zeros(n, n);
    let step = |i: usize| rel_step * (1.0 + x[i].abs());
    let mut xp = x.to_vec();
    let eval = |xp: &mut Vec<f64>, i: usize, si: f64, j: usize, sj: f64, f: &mut dyn FnMut(&[f64]) -> f64| {
        xp[i] += si;
        xp[j] += sj;
        let v = f(xp);
        xp[i] = x[i];
        xp[j] = x[j];
        v
    };
    for i in 0..n {
        for j in 0..n {
            let (hi, hj) = (step(i), step(j));
            let pp = eval(&mut xp, i, hi, j, hj, &mut f);
            let pm = eval(&mut xp, i, hi, j, -hj, &mut f);
            let mp = eval(&mut xp, i, -hi, j, hj, &mut f);
            let mm = eval(&mut xp, i, -hi, j, -hj, &mut f);
            hess[(i, j)] = (pp - pm - mp + mm) / (4.0 * hi * hj);
        }
    }
    // symmetrize away odd roundoff
    let ht = hess.transpose();
    (hess + ht) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        // f(x) = x0^2 + 3 x0 x1, grad = [2 x0 + 3 x1, 3 x0]
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1];
        let g = fd_gradient(f, &[1.5, -2.0]);
        assert!((g[0] - (2.0 * 1.5 - 6.0)).abs() < 1e-7);
        assert!((g[1] - 4.5).abs() < 1e-7);
    }

    #[test]
    fn hessian_of_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 3.0 * x[0] * x[1];
        let h = fd_hessian(f, &[0.3, 0.7], 1e-4);
        assert!((h[(0, 0)] - 2.0).abs() < 1e-5);
        assert!((h[(0, 1)] - 3.0).abs() < 1e-5);
        assert!(h[(1, 1)].abs() < 1e-5);
    }
}
