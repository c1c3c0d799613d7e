//! Shared numerical kernels: quadrature, root finding, eigensolver, FFT peaks.

pub mod eigen;
pub mod quadrature;
pub mod roots;
pub mod spectrum;

pub use eigen::{symmetric_eigensolve, EigenError, EigenResult};
pub use quadrature::{integrate_singular, QuadError, QuadratureSpec, Singularity};
pub use roots::{find_root, RootError};
pub use spectrum::{principal_frequency, SpectralPeak, SpectrumError};
