//! The six subcommands: dataset generation plus matplotlib script emission.

use std::path::PathBuf;

use clap::Args;
use dicke_core::boa::{boson, pseudospin, BandSpectrum, BoaError, Convention};
use dicke_core::classical;
use dicke_core::model::{classify_regime, ModelParams, Regime};
use dicke_core::numerics::principal_frequency;
use dicke_core::quantum::{
    build_hamiltonian, build_observable, certify, converge_truncation, diagonalize,
    FockSpinBasis, ObservableTag, QuantumError, SpectralDecomposition,
};

use crate::config::{Dims, ParamFlags, RunConfig, Span};
use crate::output::{fmt, write_atomic};
use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Config file (TOML or JSON) supplying defaults for all flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::FastPseudospin => "FastPseudospin",
        Regime::FastBoson => "FastBoson",
        Regime::Neither => "Neither",
    }
}

// ---------------------------------------------------------------- validity

#[derive(Debug, Args)]
pub struct ValidityMapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Atomic splitting omega0.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Coupling range f = gamma/gamma_c, as lo:hi.
    #[arg(long)]
    pub f_range: Option<Span>,
    /// omega/omega0 range, as lo:hi.
    #[arg(long)]
    pub omega_ratio_range: Option<Span>,
    /// Grid resolution NxM (f by omega-ratio).
    #[arg(long)]
    pub grid: Option<Dims>,
}

pub fn run_validity_map(args: &ValidityMapArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let vm = cfg.validity_map.unwrap_or_default();
    let omega0 = args.omega0.or(cfg.params.omega0).unwrap_or(1.0);
    let f_range = args.f_range.or(vm.f_range).unwrap_or(Span { lo: 0.0, hi: 4.0 });
    let ratio_range =
        args.omega_ratio_range.or(vm.omega_ratio_range).unwrap_or(Span { lo: 0.0, hi: 12.0 });
    let grid = args.grid.or(vm.grid).unwrap_or(Dims { nx: 80, ny: 80 });

    let fs = f_range.centers(grid.nx);
    let ratios = ratio_range.centers(grid.ny);
    let mut map = String::from("f,omega_over_omega0,regime,freq_ratio,max_rel_dev\n");
    let mut columns: Vec<Vec<(f64, f64)>> = Vec::with_capacity(fs.len());
    for &f in &fs {
        let mut col = Vec::with_capacity(ratios.len());
        for &r in &ratios {
            let cell = ModelParams::from_coupling_ratio(r * omega0, omega0, f, 10.0)
                .ok()
                .and_then(|p| classify_regime(&p).ok());
            match cell {
                Some(v) => {
                    map.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt(f),
                        fmt(r),
                        regime_name(v.regime),
                        fmt(v.ratio),
                        fmt(v.max_rel_dev)
                    ));
                    col.push((r, v.ratio));
                }
                None => {
                    map.push_str(&format!("{},{},Neither,nan,nan\n", fmt(f), fmt(r)));
                    col.push((r, f64::NAN));
                }
            }
        }
        columns.push(col);
    }

    // level curves of the fast/slow ratio, one crossing list per f column
    let mut curves = String::from("level,f,omega_over_omega0\n");
    for (fi, col) in columns.iter().enumerate() {
        for level in [2.0, 5.0, 10.0] {
            for w in col.windows(2) {
                let (r0, v0) = w[0];
                let (r1, v1) = w[1];
                if v0.is_nan() || v1.is_nan() {
                    continue;
                }
                if (v0 - level) * (v1 - level) < 0.0 {
                    let t = (level - v0) / (v1 - v0);
                    curves.push_str(&format!(
                        "{},{},{}\n",
                        fmt(level),
                        fmt(fs[fi]),
                        fmt(r0 + t * (r1 - r0))
                    ));
                }
            }
        }
    }

    write_atomic(&args.common.out, "validity_map.csv", &map)?;
    write_atomic(&args.common.out, "validity_levels.csv", &curves)?;
    write_atomic(&args.common.out, "validity_map.py", VALIDITY_PLOT)?;
    Ok(())
}

const VALIDITY_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

rows = np.genfromtxt("validity_map.csv", delimiter=",", names=True, dtype=None, encoding=None)
code = {"FastPseudospin": 0, "FastBoson": 1, "Neither": 2}
c = np.array([code[r] for r in rows["regime"]])
plt.scatter(rows["f"], rows["omega_over_omega0"], c=c, s=4, cmap="viridis")
lv = np.genfromtxt("validity_levels.csv", delimiter=",", names=True)
if lv.size:
    plt.scatter(np.atleast_1d(lv["f"]), np.atleast_1d(lv["omega_over_omega0"]),
                s=1, c="k", label="ratio levels 2/5/10")
f = np.linspace(0, rows["f"].max(), 200)
plt.plot(f, np.where(f < 1, 1.0, f**2), "r--", label=r"$\omega_F=\omega_B$")
plt.xlabel(r"$\gamma/\gamma_c$"); plt.ylabel(r"$\omega/\omega_0$")
plt.legend(); plt.ylim(0, rows["omega_over_omega0"].max())
plt.savefig("validity_map.png", dpi=150)
"#;

// ------------------------------------------------------------------- peres

#[derive(Debug, Args)]
pub struct PeresArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Boson truncation; omitted means converge automatically.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Energy window in E/(omega0 j) units.
    #[arg(long)]
    pub window: Option<f64>,
    /// Observables: jz, photons, jzprime, shifted-number.
    #[arg(long = "observable")]
    pub observables: Vec<String>,
    /// Skip the adiabatic overlay curves.
    #[arg(long)]
    pub no_overlay: bool,
}

fn parse_tag(s: &str) -> Result<ObservableTag, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "jz" => Ok(ObservableTag::Jz),
        "photons" | "photon-number" => Ok(ObservableTag::PhotonNumber),
        "jzprime" | "jz-prime" => Ok(ObservableTag::JzPrime),
        "shifted-number" | "btb" => Ok(ObservableTag::ShiftedNumber),
        other => Err(CliError::Config(format!("unknown observable {other:?}"))),
    }
}

fn tag_name(tag: ObservableTag) -> &'static str {
    match tag {
        ObservableTag::Jz => "jz",
        ObservableTag::PhotonNumber => "photons",
        ObservableTag::JzPrime => "jzprime",
        ObservableTag::ShiftedNumber => "shifted_number",
    }
}

/// Diagonalize with either a fixed or an auto-converged truncation.
fn solve_exact(
    params: &ModelParams,
    n_max: Option<usize>,
    window_abs: f64,
) -> Result<(FockSpinBasis, SpectralDecomposition), CliError> {
    let basis = match n_max {
        Some(n) => FockSpinBasis::new(n, params.j).map_err(numeric)?,
        None => match converge_truncation(params, window_abs, 1e-8 * params.omega0) {
            Ok(b) => b,
            Err(QuantumError::BudgetExceeded { best }) => {
                eprintln!("warning: truncation budget hit, using n_max = {}", best.n_max);
                best
            }
            Err(e) => return Err(numeric(e)),
        },
    };
    let h = build_hamiltonian(params, &basis);
    let mut spec = diagonalize(&h, &basis).map_err(numeric)?;
    certify(&mut spec, &basis, 1e-8);
    Ok((basis, spec))
}

pub fn run_peres(args: &PeresArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let pc = cfg.peres.clone().unwrap_or_default();
    let params = args.params.resolve(&cfg.params)?;
    let window = args.window.or(pc.window).unwrap_or(1.0);
    let window_abs = window * params.omega0 * params.j;
    let tags: Vec<ObservableTag> = if !args.observables.is_empty() {
        args.observables.iter().map(|s| parse_tag(s)).collect::<Result<_, _>>()?
    } else if let Some(names) = &pc.observables {
        names.iter().map(|s| parse_tag(s)).collect::<Result<_, _>>()?
    } else {
        vec![ObservableTag::Jz]
    };

    let (basis, spec) = solve_exact(&params, args.n_max.or(pc.n_max), window_abs)?;
    let ej = params.omega0 * params.j;
    for &tag in &tags {
        let o = build_observable(tag, &params, &basis).map_err(numeric)?;
        let lat = dicke_core::quantum::peres_lattice(&spec, &o, tag);
        let mut csv =
            String::from("E_over_w0j,E_over_w0,expval,uncert,parity,state_index,converged\n");
        for (s, row) in lat.rows.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt(row.energy / ej),
                fmt(row.energy / params.omega0),
                fmt(row.expval),
                fmt(row.uncert),
                row.parity,
                s,
                u8::from(s < spec.converged_count)
            ));
        }
        write_atomic(&args.common.out, &format!("peres_{}.csv", tag_name(tag)), &csv)?;
    }

    if !args.no_overlay && !pc.overlay.is_some_and(|v| !v) {
        let overlay = boa_overlay(&params, window_abs)?;
        write_atomic(&args.common.out, "boa_overlay.csv", &overlay)?;
    }
    write_atomic(&args.common.out, "peres.py", PERES_PLOT)?;
    Ok(())
}

/// Adiabatic expectation-value curves per band of the valid approximation.
fn boa_overlay(params: &ModelParams, e_cap: f64) -> Result<String, CliError> {
    let mut csv = String::from("observable,band_label,E_over_w0j,value\n");
    let Ok(verdict) = classify_regime(params) else { return Ok(csv) };
    let ej = params.omega0 * params.j;
    let two_j = params.two_j();
    let mut emit = |name: &str, label: f64, e: f64, v: Result<f64, BoaError>| {
        if let Ok(v) = v {
            csv.push_str(&format!("{name},{},{},{}\n", fmt(label), fmt(e / ej), fmt(v)));
        }
    };
    match verdict.regime {
        Regime::FastPseudospin => {
            for k in 0..=two_j {
                let m = -params.j + k as f64;
                let Ok(band) = pseudospin::band_minimum(m, params) else { continue };
                if band.e_min > e_cap {
                    continue;
                }
                for e in (Span { lo: band.e_min, hi: e_cap }).centers(60) {
                    emit("jz", m, e, pseudospin::expect_jz(e, m, params));
                    emit("photons", m, e, pseudospin::expect_photons(e, m, params));
                }
            }
        }
        Regime::FastBoson => {
            let mut n_prime = 0u32;
            loop {
                let Ok((band, _)) = boson::band_minimum_and_frequency(n_prime, params) else {
                    break;
                };
                if band.e_min > e_cap || n_prime > 10_000 {
                    break;
                }
                let top = band.e_max.min(e_cap);
                for e in (Span { lo: band.e_min, hi: top }).centers(120) {
                    let label = n_prime as f64;
                    emit("jz", label, e, boson::expect_jz(e, n_prime, params));
                    emit("photons", label, e, boson::expect_photons(e, n_prime, params));
                }
                n_prime += 1;
            }
        }
        Regime::Neither => {}
    }
    Ok(csv)
}

const PERES_PLOT: &str = r#"#!/usr/bin/env python3
import glob
import numpy as np
import matplotlib.pyplot as plt

for path in sorted(glob.glob("peres_*.csv")):
    tag = path[len("peres_"):-len(".csv")]
    d = np.genfromtxt(path, delimiter=",", names=True)
    fig, ax = plt.subplots()
    ax.scatter(d["E_over_w0j"], d["expval"], s=6, c=d["parity"], cmap="coolwarm")
    try:
        ov = np.genfromtxt("boa_overlay.csv", delimiter=",", names=True,
                           dtype=None, encoding=None)
        name = {"jz": "jz", "photons": "photons"}.get(tag)
        if ov.size and name is not None:
            sel = ov[ov["observable"] == name]
            for label in np.unique(sel["band_label"]):
                b = sel[sel["band_label"] == label]
                ax.plot(b["E_over_w0j"], b["value"], "k-", lw=0.7)
    except OSError:
        pass
    ax.set_xlabel(r"$E/(\omega_0 j)$"); ax.set_ylabel(tag)
    fig.savefig(f"peres_{tag}.png", dpi=150)
"#;

// ------------------------------------------------------------------- bands

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Coupling scan range in critical units, as lo:hi.
    #[arg(long)]
    pub f_scan: Option<Span>,
    /// Number of scan points.
    #[arg(long)]
    pub steps: Option<usize>,
    /// How many lowest levels to keep.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Boson truncation for the exact diagonalization.
    #[arg(long)]
    pub n_max: Option<usize>,
}

pub fn run_bands(args: &BandsArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let bc = cfg.bands.unwrap_or_default();
    let scan = args.f_scan.or(bc.f_scan).unwrap_or(Span { lo: 0.0, hi: 1.5 });
    let steps = args.steps.or(bc.steps).unwrap_or(31);
    let levels = args.levels.or(bc.levels).unwrap_or(20);
    let n_max = args.n_max.or(bc.n_max).unwrap_or(128);

    let mut exact = String::from("f,gamma,state_index,E_over_w0,excitation_over_w0,E_over_w0j\n");
    let mut semi = String::from(
        "f,gamma,band_label,n,degeneracy,E_over_w0,excitation_over_w0,E_over_w0j\n",
    );
    for f in scan.linspace(steps) {
        // flags carry the frequencies; the scan supplies the coupling
        let flags = ParamFlags { gamma: None, f: Some(f), ..args.params };
        let params = flags.resolve(&cfg.params)?;
        let ej = params.omega0 * params.j;

        let basis = FockSpinBasis::new(n_max, params.j).map_err(numeric)?;
        let spec = diagonalize(&build_hamiltonian(&params, &basis), &basis).map_err(numeric)?;
        let e0 = spec.energies[0];
        for (s, &e) in spec.energies.iter().take(levels).enumerate() {
            exact.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(f),
                fmt(params.gamma),
                s,
                fmt(e / params.omega0),
                fmt((e - e0) / params.omega0),
                fmt(e / ej)
            ));
        }

        for band in requantized_bands(&params, levels) {
            for lvl in &band.levels {
                semi.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt(f),
                    fmt(params.gamma),
                    fmt(band.label),
                    lvl.n,
                    lvl.degeneracy,
                    fmt(lvl.energy / params.omega0),
                    fmt((lvl.energy - e0) / params.omega0),
                    fmt(lvl.energy / ej)
                ));
            }
        }
    }
    write_atomic(&args.common.out, "bands_exact.csv", &exact)?;
    write_atomic(&args.common.out, "bands_semiclassical.csv", &semi)?;
    write_atomic(&args.common.out, "bands.py", BANDS_PLOT)?;
    Ok(())
}

/// Requantize whichever approximation is valid; empty when neither is (or
/// at the critical coupling, where both quadratic frequencies vanish).
fn requantized_bands(params: &ModelParams, levels: usize) -> Vec<BandSpectrum> {
    let Ok(verdict) = classify_regime(params) else { return Vec::new() };
    let mut out = Vec::new();
    match verdict.regime {
        Regime::FastPseudospin => {
            let two_j = params.two_j();
            for k in 0..=two_j {
                let m = -params.j + k as f64;
                if let Ok(band) =
                    pseudospin::bohr_sommerfeld_levels(m, params, levels, Convention::default())
                {
                    out.push(band);
                }
            }
        }
        Regime::FastBoson => {
            for n_prime in 0..levels.max(2) as u32 {
                if let Ok(band) = boson::lmg_requantize(n_prime, params) {
                    out.push(band);
                }
            }
        }
        Regime::Neither => {}
    }
    out
}

const BANDS_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

ex = np.genfromtxt("bands_exact.csv", delimiter=",", names=True)
for s in np.unique(ex["state_index"]):
    d = ex[ex["state_index"] == s]
    plt.plot(d["f"], d["excitation_over_w0"], "b-", lw=0.6)
try:
    sc = np.genfromtxt("bands_semiclassical.csv", delimiter=",", names=True)
    if sc.size:
        plt.plot(np.atleast_1d(sc["f"]), np.atleast_1d(sc["excitation_over_w0"]),
                 "r.", ms=2)
except OSError:
    pass
plt.xlabel(r"$\gamma/\gamma_c$"); plt.ylabel(r"$(E-E_0)/\omega_0$")
plt.savefig("bands.png", dpi=150)
"#;

// ---------------------------------------------------------- semiclassical

#[derive(Debug, Args)]
pub struct SemiclassicalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Number of lowest bands to sample.
    #[arg(long)]
    pub bands: Option<usize>,
    /// Energy samples per band.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Requantized levels per band.
    #[arg(long)]
    pub levels: Option<usize>,
}

pub fn run_semiclassical(args: &SemiclassicalArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let sc = cfg.semiclassical.unwrap_or_default();
    let params = args.params.resolve(&cfg.params)?;
    let n_bands = args.bands.or(sc.bands).unwrap_or(5);
    let samples = args.samples.or(sc.samples).unwrap_or(80);
    let levels = args.levels.or(sc.levels).unwrap_or(10);
    let verdict = classify_regime(&params).map_err(numeric)?;
    let ej = params.omega0 * params.j;

    let mut curves =
        String::from("band_label,E_over_w0,E_over_w0j,dos,expect_jz,expect_photons\n");
    let mut lvls = String::from("band_label,n,degeneracy,E_over_w0,E_over_w0j\n");
    let mut push_curve = |label: f64, e: f64, dos: f64, jz: f64, ph: f64| {
        curves.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(label),
            fmt(e / params.omega0),
            fmt(e / ej),
            fmt(dos),
            fmt(jz),
            fmt(ph)
        ));
    };
    let mut spectra = Vec::new();
    match verdict.regime {
        Regime::FastPseudospin => {
            for k in 0..n_bands.min(params.two_j() as usize + 1) {
                let m = -params.j + k as f64;
                let band = pseudospin::band_minimum(m, &params).map_err(numeric)?;
                let span = Span { lo: band.e_min, hi: ej };
                for e in span.centers(samples) {
                    let dos = pseudospin::dos(e, m, &params).unwrap_or(f64::NAN);
                    let jz = pseudospin::expect_jz(e, m, &params).unwrap_or(f64::NAN);
                    let ph = pseudospin::expect_photons(e, m, &params).unwrap_or(f64::NAN);
                    push_curve(m, e, dos, jz, ph);
                }
                spectra.push(
                    pseudospin::bohr_sommerfeld_levels(m, &params, levels, Convention::default())
                        .map_err(numeric)?,
                );
            }
        }
        Regime::FastBoson | Regime::Neither => {
            for n_prime in 0..n_bands as u32 {
                let (band, _) =
                    boson::band_minimum_and_frequency(n_prime, &params).map_err(numeric)?;
                let span = Span { lo: band.e_min, hi: band.e_max };
                for e in span.centers(samples) {
                    let dos = boson::dos(e, n_prime, &params).unwrap_or(f64::NAN);
                    let jz = boson::expect_jz(e, n_prime, &params).unwrap_or(f64::NAN);
                    let ph = boson::expect_photons(e, n_prime, &params).unwrap_or(f64::NAN);
                    push_curve(n_prime as f64, e, dos, jz, ph);
                }
                spectra.push(boson::lmg_requantize(n_prime, &params).map_err(numeric)?);
            }
        }
    }
    for band in &spectra {
        for lvl in band.levels.iter().take(levels) {
            lvls.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(band.label),
                lvl.n,
                lvl.degeneracy,
                fmt(lvl.energy / params.omega0),
                fmt(lvl.energy / ej)
            ));
        }
    }
    write_atomic(&args.common.out, "semiclassical.csv", &curves)?;
    write_atomic(&args.common.out, "semiclassical_levels.csv", &lvls)?;
    write_atomic(&args.common.out, "semiclassical.py", SEMI_PLOT)?;
    Ok(())
}

const SEMI_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

d = np.genfromtxt("semiclassical.csv", delimiter=",", names=True)
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
for label in np.unique(d["band_label"]):
    b = d[d["band_label"] == label]
    axes[0].plot(b["E_over_w0j"], b["dos"], lw=0.8)
    axes[1].plot(b["E_over_w0j"], b["expect_jz"], lw=0.8)
    axes[2].plot(b["E_over_w0j"], b["expect_photons"], lw=0.8)
for ax, name in zip(axes, [r"$\nu(E)$", r"$\langle J_z\rangle$",
                           r"$\langle a^\dagger a\rangle$"]):
    ax.set_xlabel(r"$E/(\omega_0 j)$"); ax.set_ylabel(name)
fig.tight_layout(); fig.savefig("semiclassical.png", dpi=150)
"#;

// --------------------------------------------------------------- classical

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ClassicalTask {
    Variance,
    Section,
    Frequencies,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long, value_enum, default_value = "variance")]
    pub task: ClassicalTask,
    /// Energy shell in E/(omega0 j) units (variance and section tasks).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Integration time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Output sampling interval.
    #[arg(long)]
    pub dt_out: Option<f64>,
    /// Initial-condition grid NxM over (phi, jz).
    #[arg(long)]
    pub grid: Option<Dims>,
    /// m'/j range for the frequency scan, as lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<Span>,
    /// Points in the frequency scan.
    #[arg(long)]
    pub m_steps: Option<usize>,
}

/// Initial conditions on the shell H = e: p = 0, spin from a (phi, jz)
/// grid, q solved from the remaining quadratic.
fn shell_grid(params: &ModelParams, e: f64, dims: Dims) -> Vec<(f64, f64, classical::ClassicalState)> {
    let mut out = Vec::new();
    // phi = 0 included: the reachable patch of a low shell hugs cos(phi) = +-1
    let phis: Vec<f64> =
        (0..dims.nx).map(|i| i as f64 * std::f64::consts::TAU / dims.nx as f64).collect();
    for phi in phis {
        for jz in (Span { lo: -params.j, hi: params.j }).centers(dims.ny) {
            let jt = (params.j * params.j - jz * jz).max(0.0).sqrt();
            let jx = jt * phi.cos();
            let jy = jt * phi.sin();
            let b = 2.0 * params.gamma / params.j.sqrt() * jx;
            let disc = b * b - 2.0 * params.omega * (params.omega0 * jz - e);
            if disc < 0.0 {
                continue;
            }
            let q = (-b + disc.sqrt()) / params.omega;
            out.push((phi, jz, classical::ClassicalState { q, p: 0.0, jx, jy, jz }));
        }
    }
    out
}

pub fn run_classical(args: &ClassicalArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let cc = cfg.classical.unwrap_or_default();
    let params = args.params.resolve(&cfg.params)?;
    let eps = args.energy.or(cc.energy).unwrap_or(-1.4);
    let e = eps * params.omega0 * params.j;
    let t_end = args.t_end.or(cc.t_end).unwrap_or(1000.0 / params.omega0);
    let dt_out = args.dt_out.or(cc.dt_out).unwrap_or(0.5 / params.omega0.max(params.omega));
    let grid = args.grid.or(cc.grid).unwrap_or(Dims { nx: 12, ny: 12 });

    match args.task {
        ClassicalTask::Variance => {
            let mut csv = String::from(
                "phi0,jz0_over_j,q0,delta_jzprime_over_j,energy_drift,valid\n",
            );
            for (phi, jz, state) in shell_grid(&params, e, grid) {
                let traj = classical::integrate(&state, &params, t_end, dt_out);
                let var = classical::temporal_variance_jzprime(&traj, &params);
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt(phi),
                    fmt(jz / params.j),
                    fmt(state.q),
                    fmt(var.unwrap_or(f64::NAN)),
                    fmt(traj.energy_drift),
                    u8::from(traj.valid)
                ));
            }
            write_atomic(&args.common.out, "variance_map.csv", &csv)?;
            write_atomic(&args.common.out, "variance_map.py", VARIANCE_PLOT)?;
        }
        ClassicalTask::Section => {
            let initials: Vec<_> =
                shell_grid(&params, e, grid).into_iter().map(|(_, _, s)| s).collect();
            let section =
                classical::poincare_section(&initials, &params, e, t_end).map_err(numeric)?;
            let mut csv = String::from("traj_id,phi,jz_over_j\n");
            for pt in &section.points {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    pt.traj_id,
                    fmt(pt.phi),
                    fmt(pt.jz_over_j)
                ));
            }
            write_atomic(&args.common.out, "poincare.csv", &csv)?;
            write_atomic(&args.common.out, "poincare.py", POINCARE_PLOT)?;
        }
        ClassicalTask::Frequencies => {
            let m_range = args
                .m_range
                .or(cc.m_range)
                .unwrap_or(Span { lo: -0.98, hi: -0.5 });
            let m_steps = args.m_steps.or(cc.m_steps).unwrap_or(13);
            let n = 1usize << 15;
            let dt = args.dt_out.or(cc.dt_out).unwrap_or(0.05);
            let mut csv = String::from(
                "m_prime_over_j,omega_slow,omega_slow_pred,omega_fast,omega_fast_pred\n",
            );
            for mu in m_range.linspace(m_steps) {
                let m = mu * params.j;
                let init = classical::band_head_initials(m, &params).map_err(numeric)?;
                let (wb, wf) = pseudospin::band_head_frequencies(m, &params).map_err(numeric)?;
                let traj = classical::integrate(&init, &params, n as f64 * dt, dt);
                let qs: Vec<f64> = traj.states.iter().map(|s| s.q).collect();
                let jzs: Vec<f64> = traj.states.iter().map(|s| s.jz).collect();
                let slow = principal_frequency(&qs[..n], dt, 1).map_err(numeric)?;
                let fast = principal_frequency(&jzs[..n], dt, 1).map_err(numeric)?;
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt(mu),
                    fmt(std::f64::consts::TAU * slow[0].frequency),
                    fmt(wb),
                    fmt(std::f64::consts::TAU * fast[0].frequency),
                    fmt(wf)
                ));
            }
            write_atomic(&args.common.out, "frequencies.csv", &csv)?;
            write_atomic(&args.common.out, "frequencies.py", FREQ_PLOT)?;
        }
    }
    Ok(())
}

const VARIANCE_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

d = np.genfromtxt("variance_map.csv", delimiter=",", names=True)
sc = plt.scatter(d["phi0"], d["jz0_over_j"], c=d["delta_jzprime_over_j"],
                 s=25, cmap="magma")
plt.colorbar(sc, label=r"$\Delta j_z'/j$")
plt.xlabel(r"$\phi_0$"); plt.ylabel(r"$j_{z,0}/j$")
plt.savefig("variance_map.png", dpi=150)
"#;

const POINCARE_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

d = np.genfromtxt("poincare.csv", delimiter=",", names=True)
plt.scatter(d["phi"], d["jz_over_j"], c=d["traj_id"], s=2, cmap="tab20")
plt.xlabel(r"$\phi$"); plt.ylabel(r"$j_z/j$")
plt.savefig("poincare.png", dpi=150)
"#;

const FREQ_PLOT: &str = r#"#!/usr/bin/env python3
import numpy as np
import matplotlib.pyplot as plt

d = np.genfromtxt("frequencies.csv", delimiter=",", names=True)
plt.plot(d["m_prime_over_j"], d["omega_slow"], "bo", label=r"$\omega_B$ numeric")
plt.plot(d["m_prime_over_j"], d["omega_slow_pred"], "b-", label=r"$\omega_B$ formula")
plt.plot(d["m_prime_over_j"], d["omega_fast"], "rs", label=r"$\omega_F$ numeric")
plt.plot(d["m_prime_over_j"], d["omega_fast_pred"], "r-", label=r"$\omega_F$ formula")
plt.xlabel(r"$m'/j$"); plt.ylabel("frequency"); plt.legend()
plt.savefig("frequencies.png", dpi=150)
"#;

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Boson truncation; omitted means converge automatically.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Keep only this many lowest states.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Convergence window in E/(omega0 j) units (auto mode).
    #[arg(long)]
    pub window: Option<f64>,
}

pub fn run_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load_opt(args.common.config.as_deref())?;
    let sc = cfg.spectrum.unwrap_or_default();
    let params = args.params.resolve(&cfg.params)?;
    let window_abs = args.window.unwrap_or(1.0) * params.omega0 * params.j;
    let (_, spec) = solve_exact(&params, args.n_max.or(sc.n_max), window_abs)?;
    let keep = args.levels.or(sc.levels).unwrap_or(spec.energies.len());
    let ej = params.omega0 * params.j;
    let mut csv = String::from("state_index,E_over_w0,E_over_w0j,parity,converged\n");
    for (s, &e) in spec.energies.iter().take(keep).enumerate() {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            s,
            fmt(e / params.omega0),
            fmt(e / ej),
            spec.parity[s],
            u8::from(s < spec.converged_count)
        ));
    }
    write_atomic(&args.common.out, "spectrum.csv", &csv)?;
    Ok(())
}
