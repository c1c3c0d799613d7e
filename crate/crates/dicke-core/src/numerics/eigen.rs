//! Dense symmetric eigensolver contract over the faer backend.

use faer::{Mat, Side};
use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EigenError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("eigensolver failed to converge")]
    NoConvergence,
}

/// Full spectrum of a dense real symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column k belongs to values[k].
    pub vectors: Array2<f64>,
}

/// Diagonalize a dense real symmetric matrix; eigenvalues ascending.
pub fn symmetric_eigensolve(h: &Array2<f64>) -> Result<EigenResult, EigenError> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(EigenError::NotSymmetric);
    }
    let scale = h.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    for i in 0..n {
        for k in (i + 1)..n {
            if (h[(i, k)] - h[(k, i)]).abs() > 1e-12 * scale {
                return Err(EigenError::NotSymmetric);
            }
        }
    }
    let m = Mat::from_fn(n, n, |r, c| h[(r, c)]);
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| EigenError::NoConvergence)?;
    let s = evd.S().column_vector();
    let u = evd.U();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));

    let values: Vec<f64> = order.iter().map(|&k| s[k]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &k) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = u[(r, k)];
        }
    }
    Ok(EigenResult { values, vectors })
}
