//! Model parameters, phase classification, quadratic (normal-mode)
//! frequencies and the frequency-based validity test of the two
//! fast-slow approximations.

use thiserror::Error;

/// Tolerance around `f = 1` inside which the coupling is treated as
/// exactly critical.
pub const CRITICAL_TOL: f64 = 1e-12;

/// Relative deviation threshold between fast-slow and quadratic
/// frequencies below which an approximation is accepted.
pub const FREQ_DEV_THRESHOLD: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coupling is critical (f = 1): low normal-mode frequency vanishes")]
    CriticalCoupling,
}

/// Physical parameters of the Dicke Hamiltonian
/// `H = omega a†a + omega0 Jz + (2 gamma / sqrt(2 j)) (a + a†) Jx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Field frequency (energy units, hbar = 1).
    pub omega: f64,
    /// Two-level splitting (energy).
    pub omega0: f64,
    /// Atom-field coupling (energy), >= 0.
    pub gamma: f64,
    /// Pseudospin length; 2j must be a positive integer.
    pub j: f64,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, gamma: f64, j: f64) -> Result<Self, ModelError> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(ModelError::InvalidParams(format!("omega must be > 0, got {omega}")));
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(ModelError::InvalidParams(format!("omega0 must be > 0, got {omega0}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(ModelError::InvalidParams(format!("gamma must be >= 0, got {gamma}")));
        }
        let two_j = 2.0 * j;
        if !(two_j >= 1.0) || (two_j - two_j.round()).abs() > 1e-9 {
            return Err(ModelError::InvalidParams(format!(
                "2j must be a positive integer, got j = {j}"
            )));
        }
        Ok(Self { omega, omega0, gamma, j })
    }

    /// Build parameters from the dimensionless coupling `f = gamma/gamma_c`.
    pub fn from_coupling_ratio(omega: f64, omega0: f64, f: f64, j: f64) -> Result<Self, ModelError> {
        if !(f >= 0.0) || !f.is_finite() {
            return Err(ModelError::InvalidParams(format!("f must be >= 0, got {f}")));
        }
        let gamma_c = (omega * omega0).sqrt() / 2.0;
        Self::new(omega, omega0, f * gamma_c, j)
    }

    /// Critical coupling `gamma_c = sqrt(omega omega0) / 2`.
    pub fn gamma_c(&self) -> f64 {
        (self.omega * self.omega0).sqrt() / 2.0
    }

    /// Dimensionless coupling `f = gamma / gamma_c`.
    pub fn coupling_ratio(&self) -> f64 {
        self.gamma / self.gamma_c()
    }

    /// Number of two-level systems, `N = 2j`.
    pub fn two_j(&self) -> u32 {
        (2.0 * self.j).round() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Normal,
    Critical,
    Superradiant,
}

/// Scales derived from the bare parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    pub gamma_c: f64,
    pub f: f64,
    pub phase: Phase,
}

pub fn derived_scales(params: &ModelParams) -> DerivedScales {
    let gamma_c = params.gamma_c();
    let f = params.gamma / gamma_c;
    let phase = if (f - 1.0).abs() <= CRITICAL_TOL {
        Phase::Critical
    } else if f < 1.0 {
        Phase::Normal
    } else {
        Phase::Superradiant
    };
    DerivedScales { gamma_c, f, phase }
}

/// Normal-mode frequencies of the quadratic (Holstein-Primakoff)
/// expansion around the ground-state configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFrequencies {
    pub omega_plus: f64,
    pub omega_minus: f64,
}

pub fn quadratic_frequencies(params: &ModelParams) -> Result<QuadraticFrequencies, ModelError> {
    let scales = derived_scales(params);
    if scales.phase == Phase::Critical {
        return Err(ModelError::CriticalCoupling);
    }
    let (w, w0) = (params.omega, params.omega0);
    let (p, m) = match scales.phase {
        Phase::Normal => {
            let s = ((w0 * w0 - w * w).powi(2) + 16.0 * params.gamma.powi(2) * w * w0).sqrt();
            ((w * w + w0 * w0 + s) / 2.0, (w * w + w0 * w0 - s) / 2.0)
        }
        _ => {
            // superradiant branch, written in terms of f^2 = (gamma/gamma_c)^2
            let f2 = scales.f * scales.f;
            let a = w0 * w0 * f2 * f2;
            let s = ((a - w * w).powi(2) + 4.0 * w * w * w0 * w0).sqrt();
            ((a + w * w + s) / 2.0, (a + w * w - s) / 2.0)
        }
    };
    Ok(QuadraticFrequencies {
        omega_plus: p.sqrt(),
        omega_minus: m.max(0.0).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FastPseudospin,
    FastBoson,
    Neither,
}

/// Outcome of the frequency-matching validity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeVerdict {
    pub regime: Regime,
    /// Fast/slow frequency ratio of the winning approximation (or of the
    /// better-scoring candidate when the verdict is `Neither`).
    pub ratio: f64,
    /// Worst relative deviation of {omega_B, omega_F} from {omega_-, omega_+}.
    pub max_rel_dev: f64,
}

/// Lowest-band (ground-band) fast-pseudospin frequencies (omega_B, omega_F).
pub fn pseudospin_ground_frequencies(params: &ModelParams) -> (f64, f64) {
    let f = params.coupling_ratio();
    if f > 1.0 {
        let f2 = f * f;
        (params.omega * (1.0 - 1.0 / (f2 * f2)).sqrt(), params.omega0 * f2)
    } else {
        (params.omega * (1.0 - f * f).max(0.0).sqrt(), params.omega0)
    }
}

/// Lowest-band fast-boson frequencies (omega_B, omega_F).
pub fn boson_ground_frequencies(params: &ModelParams) -> (f64, f64) {
    let f = params.coupling_ratio();
    let wf = if f > 1.0 {
        params.omega0 * (f * f * f * f - 1.0).sqrt()
    } else {
        params.omega0 * (1.0 - f * f).max(0.0).sqrt()
    };
    (params.omega, wf)
}

/// Worst relative deviation when pairing each BOA frequency to the nearest
/// quadratic frequency.
fn pairing_deviation(boa: (f64, f64), quad: &QuadraticFrequencies) -> f64 {
    let exact = [quad.omega_minus, quad.omega_plus];
    let mut worst: f64 = 0.0;
    for w in [boa.0, boa.1] {
        let nearest = if (w - exact[0]).abs() <= (w - exact[1]).abs() { exact[0] } else { exact[1] };
        let dev = if nearest > 0.0 { (w - nearest).abs() / nearest } else { f64::INFINITY };
        worst = worst.max(dev);
    }
    worst
}

/// Decide which fast-slow approximation (if any) is valid: the fast/slow
/// frequency ratio must exceed 1 and both lowest-band frequencies must
/// match the quadratic ones to within 5%. Ties go to the larger ratio.
pub fn classify_regime(params: &ModelParams) -> Result<RegimeVerdict, ModelError> {
    let quad = quadratic_frequencies(params)?;

    let (ps_b, ps_f) = pseudospin_ground_frequencies(params);
    let ps_ratio = ps_f / ps_b;
    let ps_dev = pairing_deviation((ps_b, ps_f), &quad);
    let ps_ok = ps_ratio > 1.0 && ps_dev <= FREQ_DEV_THRESHOLD;

    let (fb_b, fb_f) = boson_ground_frequencies(params);
    let fb_ratio = fb_b / fb_f;
    let fb_dev = pairing_deviation((fb_b, fb_f), &quad);
    let fb_ok = fb_ratio > 1.0 && fb_dev <= FREQ_DEV_THRESHOLD;

    let verdict = match (ps_ok, fb_ok) {
        (true, false) => RegimeVerdict { regime: Regime::FastPseudospin, ratio: ps_ratio, max_rel_dev: ps_dev },
        (false, true) => RegimeVerdict { regime: Regime::FastBoson, ratio: fb_ratio, max_rel_dev: fb_dev },
        (true, true) => {
            if ps_ratio >= fb_ratio {
                RegimeVerdict { regime: Regime::FastPseudospin, ratio: ps_ratio, max_rel_dev: ps_dev }
            } else {
                RegimeVerdict { regime: Regime::FastBoson, ratio: fb_ratio, max_rel_dev: fb_dev }
            }
        }
        (false, false) => {
            // report the closer miss
            if ps_dev <= fb_dev {
                RegimeVerdict { regime: Regime::Neither, ratio: ps_ratio, max_rel_dev: ps_dev }
            } else {
                RegimeVerdict { regime: Regime::Neither, ratio: fb_ratio, max_rel_dev: fb_dev }
            }
        }
    };
    Ok(verdict)
}
