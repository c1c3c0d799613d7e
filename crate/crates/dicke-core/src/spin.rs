//! Dense collective spin operators in the Jz eigenbasis.
//!
//! Basis ordering runs over m = -j, -j+1, ..., +j so index i maps to
//! m = i - j (with 2j an integer, half-integer j allowed).

use ndarray::Array2;

/// m value for basis index i given 2j.
pub fn m_of_index(i: usize, two_j: u32) -> f64 {
    i as f64 - two_j as f64 / 2.0
}

/// Jz as a diagonal dense matrix of dimension 2j+1.
pub fn jz_matrix(two_j: u32) -> Array2<f64> {
    let dim = two_j as usize + 1;
    let mut m = Array2::zeros((dim, dim));
    for i in 0..dim {
        m[(i, i)] = m_of_index(i, two_j);
    }
    m
}

/// Jx as a tridiagonal dense matrix, <m+1|Jx|m> = sqrt(j(j+1)-m(m+1))/2.
pub fn jx_matrix(two_j: u32) -> Array2<f64> {
    let dim = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut mat = Array2::zeros((dim, dim));
    for i in 0..dim - 1 {
        let m = m_of_index(i, two_j);
        let c = 0.5 * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        mat[(i + 1, i)] = c;
        mat[(i, i + 1)] = c;
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half() {
        let jx = jx_matrix(1);
        assert!((jx[(0, 1)] - 0.5).abs() < 1e-15);
        let jz = jz_matrix(1);
        assert!((jz[(0, 0)] + 0.5).abs() < 1e-15);
        assert!((jz[(1, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn casimir_spin_one() {
        // Jx^2 + Jy^2 + Jz^2 = j(j+1); check via Jx^2 + Jz^2 trace identity
        // tr(Jx^2) = tr(Jy^2) = tr(Jz^2) = j(j+1)(2j+1)/3
        let jx = jx_matrix(2);
        let jz = jz_matrix(2);
        let tx: f64 = jx.dot(&jx).diag().sum();
        let tz: f64 = jz.dot(&jz).diag().sum();
        assert!((tx - 2.0).abs() < 1e-14);
        assert!((tz - 2.0).abs() < 1e-14);
    }
}
