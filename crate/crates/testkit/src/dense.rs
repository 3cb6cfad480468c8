//! Dense-matrix materialization of linear operators, for adjoint and
//! operator-norm checks at small sizes.

use nalgebra::DMatrix;

/// Builds the matrix of a linear map by applying it to basis vectors.
pub fn dense_matrix(rows: usize, cols: usize, mut apply: impl FnMut(&[f64]) -> Vec<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    let mut e = vec![0.0; cols];
    for j in 0..cols {
        e[j] = 1.0;
        let col = apply(&e);
        assert_eq!(col.len(), rows, "operator output length mismatch");
        for i in 0..rows {
            m[(i, j)] = col[i];
        }
        e[j] = 0.0;
    }
    m
}

/// Largest singular value via nalgebra's SVD.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values.amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm_is_one() {
        let id = dense_matrix(4, 4, |v| v.to_vec());
        assert!((spectral_norm(&id) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_norm() {
        let m = dense_matrix(3, 3, |v| v.iter().map(|&t| -2.5 * t).collect());
        assert!((spectral_norm(&m) - 2.5).abs() < 1e-12);
    }
}
