//! Exact Dicke Hamiltonian in a truncated Fock (x) spin basis: assembly,
//! parity-resolved diagonalization, truncation convergence, Peres lattices,
//! and the invariant operators J_z' and b'b.

use crate::boa::pseudospin::omega_p;
use crate::model::ModelParams;
use crate::numerics::{symmetric_eigensolve, EigenError};
use crate::spin::{jx_matrix, jz_matrix, m_of_index};
use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("spin length must be a positive integer or half-integer")]
    InvalidSpin,
    #[error("truncation budget exhausted at n_max = {}", best.n_max)]
    BudgetExceeded { best: FockSpinBasis },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Product basis |n> (x) |j m>, indexed k = n (2j+1) + (m + j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpinBasis {
    pub n_max: usize,
    pub two_j: usize,
    pub dim: usize,
}

impl FockSpinBasis {
    pub fn new(n_max: usize, j: f64) -> Result<Self, QuantumError> {
        let two_j = (2.0 * j).round();
        if j <= 0.0 || (2.0 * j - two_j).abs() > 1e-9 {
            return Err(QuantumError::InvalidSpin);
        }
        let two_j = two_j as usize;
        Ok(Self { n_max, two_j, dim: (n_max + 1) * (two_j + 1) })
    }

    pub fn index(&self, n: usize, mi: usize) -> usize {
        n * (self.two_j + 1) + mi
    }

    /// Inverse of `index`: k -> (n, mi) with m = mi - j.
    pub fn split(&self, k: usize) -> (usize, usize) {
        (k / (self.two_j + 1), k % (self.two_j + 1))
    }

    /// Parity quantum number (-1)^(n + m + j) of basis state k.
    pub fn parity(&self, k: usize) -> i8 {
        let (n, mi) = self.split(k);
        if (n + mi) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, same order as `energies`.
    pub states: Array2<f64>,
    pub parity: Vec<i8>,
    pub converged_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableTag {
    Jz,
    PhotonNumber,
    JzPrime,
    ShiftedNumber,
}

#[derive(Debug, Clone)]
pub struct LatticeRow {
    pub energy: f64,
    pub expval: f64,
    pub uncert: f64,
    pub parity: i8,
}

#[derive(Debug, Clone)]
pub struct PeresLattice {
    pub tag: ObservableTag,
    pub rows: Vec<LatticeRow>,
}

/// Tridiagonal (a + a') on the truncated Fock space.
fn fock_quadrature_sum(n_max: usize) -> Array2<f64> {
    let d = n_max + 1;
    let mut m = Array2::zeros((d, d));
    for n in 0..n_max {
        let v = ((n + 1) as f64).sqrt();
        m[(n + 1, n)] = v;
        m[(n, n + 1)] = v;
    }
    m
}

fn kron(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for ia in 0..ra {
        for ja in 0..ca {
            let v = a[(ia, ja)];
            if v == 0.0 {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = v * b[(ib, jb)];
                }
            }
        }
    }
    out
}

fn identity(d: usize) -> Array2<f64> {
    Array2::eye(d)
}

/// H = w a'a + w0 Jz + (sqrt2 gamma / sqrt j)(a + a') Jx.
pub fn build_hamiltonian(params: &ModelParams, basis: &FockSpinBasis) -> Array2<f64> {
    let sdim = basis.two_j + 1;
    let mut h = Array2::zeros((basis.dim, basis.dim));
    for k in 0..basis.dim {
        let (n, mi) = basis.split(k);
        h[(k, k)] = params.omega * n as f64 + params.omega0 * m_of_index(mi, basis.two_j as u32);
    }
    let c = std::f64::consts::SQRT_2 * params.gamma / params.j.sqrt();
    if c != 0.0 {
        let jx = jx_matrix(basis.two_j as u32);
        for n in 0..basis.n_max {
            let ladder = c * ((n + 1) as f64).sqrt();
            for mi in 0..sdim.saturating_sub(1) {
                let v = ladder * jx[(mi + 1, mi)];
                let k0 = basis.index(n, mi);
                let k1 = basis.index(n + 1, mi + 1);
                h[(k0, k1)] = v;
                h[(k1, k0)] = v;
                let k0 = basis.index(n, mi + 1);
                let k1 = basis.index(n + 1, mi);
                h[(k0, k1)] = v;
                h[(k1, k0)] = v;
            }
        }
    }
    h
}

/// Diagonalize per parity block. The coupling conserves (-1)^(n+m+j), so
/// splitting the basis halves the eigensolver cost and makes every
/// eigenstate an exact parity eigenstate, degenerate doublets included.
pub fn diagonalize(
    h: &Array2<f64>,
    basis: &FockSpinBasis,
) -> Result<SpectralDecomposition, QuantumError> {
    let mut merged: Vec<(f64, Vec<f64>, i8)> = Vec::with_capacity(basis.dim);
    for sector in [1i8, -1i8] {
        let idx: Vec<usize> = (0..basis.dim).filter(|&k| basis.parity(k) == sector).collect();
        let nb = idx.len();
        let mut block = Array2::zeros((nb, nb));
        for (r, &kr) in idx.iter().enumerate() {
            for (c, &kc) in idx.iter().enumerate() {
                block[(r, c)] = h[(kr, kc)];
            }
        }
        let eig = symmetric_eigensolve(&block)?;
        for s in 0..nb {
            let mut full = vec![0.0; basis.dim];
            for (r, &kr) in idx.iter().enumerate() {
                full[kr] = eig.vectors[(r, s)];
            }
            merged.push((eig.values[s], full, sector));
        }
    }
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut states = Array2::zeros((basis.dim, basis.dim));
    let mut energies = Vec::with_capacity(basis.dim);
    let mut parity = Vec::with_capacity(basis.dim);
    for (s, (e, v, p)) in merged.into_iter().enumerate() {
        energies.push(e);
        parity.push(p);
        for (k, x) in v.into_iter().enumerate() {
            states[(k, s)] = x;
        }
    }
    Ok(SpectralDecomposition { energies, states, parity, converged_count: 0 })
}

const CONVERGE_START: usize = 32;
const CONVERGE_CAP: usize = 2048;
const FOCK_TAIL_WEIGHT: f64 = 1e-8;

/// Weight of the top four Fock layers in eigenstate column s.
fn tail_weight(spec: &SpectralDecomposition, basis: &FockSpinBasis, s: usize) -> f64 {
    let lo = basis.n_max.saturating_sub(3);
    let mut w = 0.0;
    for n in lo..=basis.n_max {
        for mi in 0..=basis.two_j {
            let v = spec.states[(basis.index(n, mi), s)];
            w += v * v;
        }
    }
    w
}

/// Smallest doubling-certified truncation: every eigenvalue below
/// `energy_window` moves less than `tol` when n_max doubles, and no window
/// eigenvector leans on the top four Fock layers.
pub fn converge_truncation(
    params: &ModelParams,
    energy_window: f64,
    tol: f64,
) -> Result<FockSpinBasis, QuantumError> {
    let mut n_max = CONVERGE_START;
    let mut basis = FockSpinBasis::new(n_max, params.j)?;
    let mut spec = diagonalize(&build_hamiltonian(params, &basis), &basis)?;
    loop {
        let next = FockSpinBasis::new(2 * n_max, params.j)?;
        let spec2 = diagonalize(&build_hamiltonian(params, &next), &next)?;
        let in_window =
            spec.energies.iter().take_while(|&&e| e <= energy_window).count().max(1);
        let mut ok = true;
        for s in 0..in_window.min(spec2.energies.len()) {
            if (spec.energies[s] - spec2.energies[s]).abs() >= tol
                || tail_weight(&spec, &basis, s) >= FOCK_TAIL_WEIGHT
            {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(basis);
        }
        if 2 * n_max > CONVERGE_CAP {
            return Err(QuantumError::BudgetExceeded { best: next });
        }
        n_max *= 2;
        basis = next;
        spec = spec2;
    }
}

/// Mark the first `count` states of `spec` as truncation-certified.
pub fn certify(spec: &mut SpectralDecomposition, basis: &FockSpinBasis, tol_weight: f64) {
    let mut count = 0;
    for s in 0..spec.energies.len() {
        if tail_weight(spec, basis, s) < tol_weight {
            count = s + 1;
        } else {
            break;
        }
    }
    spec.converged_count = count;
}

pub fn build_observable(
    tag: ObservableTag,
    params: &ModelParams,
    basis: &FockSpinBasis,
) -> Result<Array2<f64>, QuantumError> {
    let sdim = basis.two_j + 1;
    let fdim = basis.n_max + 1;
    match tag {
        ObservableTag::Jz => Ok(kron(&identity(fdim), &jz_matrix(basis.two_j as u32))),
        ObservableTag::PhotonNumber => {
            let mut num = Array2::zeros((fdim, fdim));
            for n in 0..fdim {
                num[(n, n)] = n as f64;
            }
            Ok(kron(&num, &identity(sdim)))
        }
        ObservableTag::ShiftedNumber => {
            let mut num = Array2::zeros((fdim, fdim));
            for n in 0..fdim {
                num[(n, n)] = n as f64;
            }
            let jx = jx_matrix(basis.two_j as u32);
            let jx2 = jx.dot(&jx);
            let quad = fock_quadrature_sum(basis.n_max);
            let c2 = 2.0 * params.gamma * params.gamma / (params.j * params.omega * params.omega);
            let c1 = std::f64::consts::SQRT_2 * params.gamma / (params.j.sqrt() * params.omega);
            let mut o = kron(&num, &identity(sdim));
            o += &(kron(&identity(fdim), &jx2) * c2);
            o += &(kron(&quad, &jx) * c1);
            Ok(o)
        }
        ObservableTag::JzPrime => {
            // The square roots in cos/sin beta have no usable power series,
            // so apply them to the eigenvalues of Q = (a + a')/sqrt2.
            let q = fock_quadrature_sum(basis.n_max) / std::f64::consts::SQRT_2;
            let eig = symmetric_eigensolve(&q)?;
            let mut cmat = Array2::zeros((fdim, fdim));
            let mut smat = Array2::zeros((fdim, fdim));
            for k in 0..fdim {
                let qk = eig.values[k];
                let wp = omega_p(qk, params);
                let cb = params.omega0 / wp;
                let sb = (2.0 * params.gamma * qk / params.j.sqrt()) / wp;
                for a in 0..fdim {
                    for b in 0..fdim {
                        let w = eig.vectors[(a, k)] * eig.vectors[(b, k)];
                        cmat[(a, b)] += cb * w;
                        smat[(a, b)] += sb * w;
                    }
                }
            }
            let jz = jz_matrix(basis.two_j as u32);
            let jx = jx_matrix(basis.two_j as u32);
            let mut o = kron(&cmat, &jz);
            o += &kron(&smat, &jx);
            // symmetrize away eigensolver roundoff
            let ot = o.t().to_owned();
            Ok((o + ot) * 0.5)
        }
    }
}

pub fn peres_lattice(
    spec: &SpectralDecomposition,
    o: &Array2<f64>,
    tag: ObservableTag,
) -> PeresLattice {
    let n = spec.energies.len();
    let mut rows = Vec::with_capacity(n);
    // one gemm instead of per-state matvecs
    let applied = o.dot(&spec.states);
    for s in 0..n {
        let v = spec.states.column(s);
        let w = applied.column(s);
        let expval = v.dot(&w);
        let var = (w.dot(&w) - expval * expval).max(0.0);
        rows.push(LatticeRow {
            energy: spec.energies[s],
            expval,
            uncert: var.sqrt(),
            parity: spec.parity[s],
        });
    }
    PeresLattice { tag, rows }
}
