//! Run configuration: file-backed defaults overridden by command-line flags.

use std::path::Path;
use std::str::FromStr;

use dicke_core::model::ModelParams;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Inclusive numeric range written as "lo:hi".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
        let lo: f64 = lo.trim().parse().map_err(|_| "bad range start")?;
        let hi: f64 = hi.trim().parse().map_err(|_| "bad range end")?;
        if !(lo < hi) {
            return Err("range start must be below its end".into());
        }
        Ok(Span { lo, hi })
    }
}

impl Span {
    /// n points at cell centers, for grids that must dodge the edges.
    pub fn centers(&self, n: usize) -> Vec<f64> {
        let step = (self.hi - self.lo) / n as f64;
        (0..n).map(|i| self.lo + (i as f64 + 0.5) * step).collect()
    }

    /// n points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        if n < 2 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n).map(|i| self.lo + i as f64 * step).collect()
    }
}

/// Grid dimensions written as "NxM".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (nx, ny) = s.split_once(['x', 'X']).ok_or("expected NxM")?;
        let nx = nx.trim().parse().map_err(|_| "bad grid width")?;
        let ny = ny.trim().parse().map_err(|_| "bad grid height")?;
        if nx == 0 || ny == 0 {
            return Err("grid dimensions must be positive".into());
        }
        Ok(Dims { nx, ny })
    }
}

/// Model parameters as they appear in a config file. The coupling may be
/// given either as gamma or as f = gamma/gamma_c, and the boson frequency
/// either directly or as omega/omega0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub omega: Option<f64>,
    pub omega0: Option<f64>,
    pub omega_ratio: Option<f64>,
    pub gamma: Option<f64>,
    pub f: Option<f64>,
    pub j: Option<f64>,
}

/// Command-line mirror of [`ParamsConfig`]; flags win over the file.
#[derive(Debug, Clone, Copy, Default, clap::Args)]
pub struct ParamFlags {
    /// Boson frequency omega.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Atomic splitting omega0 (default 1).
    #[arg(long)]
    pub omega0: Option<f64>,
    /// omega/omega0, alternative to --omega.
    #[arg(long)]
    pub omega_ratio: Option<f64>,
    /// Coupling strength gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Coupling in critical units, f = gamma/gamma_c.
    #[arg(long)]
    pub f: Option<f64>,
    /// Pseudospin length j = N/2.
    #[arg(long)]
    pub j: Option<f64>,
}

impl ParamFlags {
    pub fn resolve(&self, file: &ParamsConfig) -> Result<ModelParams, CliError> {
        let omega0 = self.omega0.or(file.omega0).unwrap_or(1.0);
        let ratio = self.omega_ratio.or(file.omega_ratio);
        let omega = self
            .omega
            .or(file.omega)
            .or(ratio.map(|r| r * omega0))
            .ok_or_else(|| CliError::Config("omega (or omega-ratio) is required".into()))?;
        let j = self
            .j
            .or(file.j)
            .ok_or_else(|| CliError::Config("j is required".into()))?;
        let gamma = self.gamma.or(file.gamma);
        let f = self.f.or(file.f);
        let params = match (gamma, f) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either gamma or f, not both".into()))
            }
            (Some(g), None) => ModelParams::new(omega, omega0, g, j),
            (None, Some(f)) => ModelParams::from_coupling_ratio(omega, omega0, f, j),
            (None, None) => return Err(CliError::Config("a coupling (gamma or f) is required".into())),
        };
        params.map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidityMapConfig {
    pub f_range: Option<Span>,
    pub omega_ratio_range: Option<Span>,
    pub grid: Option<Dims>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeresConfig {
    pub n_max: Option<usize>,
    pub window: Option<f64>,
    pub observables: Option<Vec<String>>,
    pub overlay: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandsConfig {
    pub f_scan: Option<Span>,
    pub steps: Option<usize>,
    pub levels: Option<usize>,
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemiclassicalConfig {
    pub bands: Option<usize>,
    pub samples: Option<usize>,
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalConfig {
    pub energy: Option<f64>,
    pub t_end: Option<f64>,
    pub dt_out: Option<f64>,
    pub grid: Option<Dims>,
    pub m_range: Option<Span>,
    pub m_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    pub n_max: Option<usize>,
    pub levels: Option<usize>,
}

/// Whole config file. Every block is optional; commands read their own.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub seed: u64,
    pub validity_map: Option<ValidityMapConfig>,
    pub peres: Option<PeresConfig>,
    pub bands: Option<BandsConfig>,
    pub semiclassical: Option<SemiclassicalConfig>,
    pub classical: Option<ClassicalConfig>,
    pub spectrum: Option<SpectrumConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let parsed = match path.extension().and_then(|s| s.to_str()) {
            Some("json") => serde_json::from_str(&text).map_err(|e| e.to_string()),
            Some("toml") => toml::from_str(&text).map_err(|e| e.to_string()),
            _ => toml::from_str(&text)
                .map_err(|e| e.to_string())
                .or_else(|te| serde_json::from_str(&text).map_err(|je| format!("{te}; {je}"))),
        };
        parsed.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn load_opt(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }
}
