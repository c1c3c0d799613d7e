//! Numerical library for the Dicke model: exact diagonalization, adiabatic
//! (Born-Oppenheimer) band approximations, semiclassical expectation values,
//! and classical trajectory analysis.

pub mod boa;
pub mod classical;
pub mod model;
pub mod numerics;
pub mod quantum;
pub mod spin;
