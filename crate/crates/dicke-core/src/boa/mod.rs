//! Born-Oppenheimer band approximations: fast-pseudospin (effective
//! potentials over the boson coordinate) and fast-boson (effective LMG
//! dynamics on the Bloch sphere).

pub mod boson;
pub mod pseudospin;

use crate::model::ModelError;
use crate::numerics::{QuadError, RootError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoaError {
    #[error("energy {e} below band minimum {e_min}")]
    BelowBandMinimum { e: f64, e_min: f64 },
    #[error("density of states diverges at the double-well barrier top")]
    BarrierTop,
    #[error("flat potential minimum at m' = -j/f^2, zero slow frequency")]
    FlatMinimum,
    #[error("reduced energy {0} outside the band")]
    OutOfBand(f64),
    #[error("density of states diverges at the critical energy eps = -1")]
    EsqptDivergence,
    #[error("angular boundary defined only for eps <= -1, got {0}")]
    PhiDomain(f64),
    #[error("band label out of range")]
    OutOfRange,
    #[error("action is not monotone in energy")]
    NonMonotoneAction,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Requantization convention for bound levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// Action S = 2 pi (n + 1/2); reproduces the harmonic ladder.
    #[default]
    HalfInteger,
    /// Literal S = 2 pi n.
    Integer,
}

/// One requantized level within a band.
#[derive(Debug, Clone, Copy)]
pub struct BandLevel {
    pub n: usize,
    pub energy: f64,
    pub degeneracy: u32,
}

/// Requantized spectrum of a single adiabatic band.
#[derive(Debug, Clone)]
pub struct BandSpectrum {
    /// Band label: m' for fast-pseudospin, n' for fast-boson.
    pub label: f64,
    /// Levels in ascending energy order.
    pub levels: Vec<BandLevel>,
}

impl BandSpectrum {
    /// Energies expanded by degeneracy, ascending.
    pub fn energies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for lvl in &self.levels {
            for _ in 0..lvl.degeneracy {
                out.push(lvl.energy);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}
