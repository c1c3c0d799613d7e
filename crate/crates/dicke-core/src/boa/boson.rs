//! Fast-boson adiabatic bands: displacing the boson to follow the spin
//! leaves an effective Lipkin-Meshkov-Glick Hamiltonian per shifted
//! quantum number n', with slow dynamics on the Bloch sphere.

use super::{BandLevel, BandSpectrum, BoaError};
use crate::model::{derived_scales, ModelParams, Phase};
use crate::numerics::{integrate_singular, symmetric_eigensolve, QuadratureSpec, Singularity};
use crate::spin::{jx_matrix, jz_matrix};

const ESQPT_GUARD: f64 = 1e-9;
const DECOUPLED_F: f64 = 1e-6;

/// Band range and reduced-energy window for label n'.
#[derive(Debug, Clone, Copy)]
pub struct BosonBand {
    pub n_prime: u32,
    pub e_min: f64,
    pub e_max: f64,
    /// Reduced band-head energy (E_min - w n')/(w0 j).
    pub eps_min: f64,
}

/// Effective LMG energy H_n'(j_z, phi) = w n' + w0 j_z - (2 g^2/(w j)) j_x^2.
pub fn effective_energy(jz: f64, phi: f64, n_prime: u32, params: &ModelParams) -> f64 {
    let j = params.j;
    let jx = (j * j - jz * jz).max(0.0).sqrt() * phi.cos();
    params.omega * n_prime as f64 + params.omega0 * jz
        - (2.0 * params.gamma * params.gamma / (params.omega * j)) * jx * jx
}

/// Band head, band top, and the slow/fast frequencies (omega_B = w always).
pub fn band_minimum_and_frequency(
    n_prime: u32,
    params: &ModelParams,
) -> Result<(BosonBand, f64), BoaError> {
    let scales = derived_scales(params);
    let f = scales.f;
    let shift = params.omega * n_prime as f64;
    let (eps_min, omega_f) = match scales.phase {
        Phase::Normal => (-1.0, params.omega0 * (1.0 - f * f).sqrt()),
        Phase::Superradiant => (
            -0.5 * (f * f + 1.0 / (f * f)),
            params.omega0 * (f.powi(4) - 1.0).sqrt(),
        ),
        Phase::Critical => {
            return Err(BoaError::Model(crate::model::ModelError::CriticalCoupling))
        }
    };
    let band = BosonBand {
        n_prime,
        e_min: shift + params.omega0 * params.j * eps_min,
        e_max: shift + params.omega0 * params.j,
        eps_min,
    };
    Ok((band, omega_f))
}

/// Reduced energy of the band: eps = (E - w n')/(w0 j).
pub fn reduced_energy(e: f64, n_prime: u32, params: &ModelParams) -> f64 {
    (e - params.omega * n_prime as f64) / (params.omega0 * params.j)
}

/// Azimuthal turning angle for eps <= -1: cos^2(phi0) = (-eps + sqrt(eps^2-1))/f^2.
pub fn phi_boundary(eps: f64, params: &ModelParams) -> Result<f64, BoaError> {
    if eps > -1.0 {
        return Err(BoaError::PhiDomain(eps));
    }
    let f = derived_scales(params).f;
    let c2 = (-eps + (eps * eps - 1.0).max(0.0).sqrt()) / (f * f);
    if c2 > 1.0 + 1e-12 {
        return Err(BoaError::OutOfBand(eps));
    }
    Ok(c2.min(1.0).sqrt().acos())
}

/// F(cos phi) = 1 + 2 f^2 eps cos^2 + f^4 cos^4, the radicand of the
/// reduced momentum on the sphere.
fn f_of_phi(phi: f64, eps: f64, f: f64) -> f64 {
    let x2 = phi.cos().powi(2);
    1.0 + 2.0 * f * f * eps * x2 + f.powi(4) * x2 * x2
}

fn band_guards(e: f64, n_prime: u32, params: &ModelParams) -> Result<(f64, f64), BoaError> {
    let (band, _) = band_minimum_and_frequency(n_prime, params)?;
    let eps = reduced_energy(e, n_prime, params);
    if eps <= band.eps_min || eps > 1.0 + 1e-12 {
        return Err(BoaError::OutOfBand(eps));
    }
    if (eps + 1.0).abs() <= ESQPT_GUARD {
        return Err(BoaError::EsqptDivergence);
    }
    Ok((eps, derived_scales(params).f))
}

/// Angular integral of g(phi)/sqrt(F) over the allowed azimuth range,
/// with the quarter-period symmetry folded in. Returns the integral over
/// the full range: [0, 2 pi) for eps > -1, the four mirror copies of
/// [0, phi0] for eps <= -1.
fn sphere_integral<G: Fn(f64) -> f64>(
    eps: f64,
    f: f64,
    params: &ModelParams,
    g: G,
) -> Result<f64, BoaError> {
    if eps <= -1.0 {
        let phi0 = phi_boundary(eps, params)?;
        // the closed-form boundary can overshoot the floating-point root
        // of F; pull it inside where F is strictly positive
        let mut hi = phi0;
        if f_of_phi(hi, eps, f) <= 0.0 {
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if f_of_phi(mid, eps, f) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi = lo;
        }
        if !(hi > 0.0) {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_singularity(Singularity::InverseSqrtRight);
        let i = integrate_singular(
            |phi| {
                let fv = f_of_phi(phi, eps, f);
                if fv <= 0.0 {
                    0.0
                } else {
                    g(phi) / fv.sqrt()
                }
            },
            0.0,
            hi,
            &spec,
        )?;
        Ok(4.0 * i)
    } else {
        let spec = QuadratureSpec::default();
        let i = integrate_singular(
            |phi| g(phi) / f_of_phi(phi, eps, f).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            &spec,
        )?;
        Ok(4.0 * i)
    }
}

/// Semiclassical density of states nu(E, n').
pub fn dos(e: f64, n_prime: u32, params: &ModelParams) -> Result<f64, BoaError> {
    let (eps, f) = band_guards(e, n_prime, params)?;
    let base = sphere_integral(eps, f, params, |_| 1.0)?;
    // (8/w0) per quarter-range for eps <= -1, (1/w0) full-range otherwise;
    // sphere_integral already folded the four quarters together.
    let two_pi_nu =
        if eps <= -1.0 { 2.0 * base / params.omega0 } else { base / params.omega0 };
    Ok(two_pi_nu / std::f64::consts::TAU)
}

/// Microcanonical <J_z> on band n' at energy E.
pub fn expect_jz(e: f64, n_prime: u32, params: &ModelParams) -> Result<f64, BoaError> {
    let (eps, f) = band_guards(e, n_prime, params)?;
    if f <= DECOUPLED_F {
        return Ok(params.j * eps);
    }
    let j = params.j;
    let denom = sphere_integral(eps, f, params, |_| 1.0)?;
    if eps <= -1.0 {
        let num = sphere_integral(eps, f, params, |phi| 1.0 / phi.cos().powi(2))?;
        Ok(-(j / (f * f)) * num / denom)
    } else {
        // (sqrt F - 1)/cos^2, written without the 0/0 at phi = pi/2
        let num = sphere_integral(eps, f, params, |phi| {
            let x2 = phi.cos().powi(2);
            let fv = f_of_phi(phi, eps, f);
            (2.0 * f * f * eps + f.powi(4) * x2) / (1.0 + fv.sqrt())
        })?;
        Ok((j / (f * f)) * num / denom)
    }
}

/// Microcanonical <a' a> on band n' at energy E.
pub fn expect_photons(e: f64, n_prime: u32, params: &ModelParams) -> Result<f64, BoaError> {
    let (eps, f) = band_guards(e, n_prime, params)?;
    let np = n_prime as f64;
    if f <= DECOUPLED_F {
        return Ok(np);
    }
    let j = params.j;
    let denom = sphere_integral(eps, f, params, |_| 1.0)?;
    let shift = if eps <= -1.0 {
        let num = sphere_integral(eps, f, params, |phi| {
            let x2 = phi.cos().powi(2);
            (1.0 + eps * f * f * x2) / x2
        })?;
        -(j / (f * f)) * num / denom / params.omega * params.omega0
    } else {
        // (1 + eps f^2 x^2 - sqrt F)/x^2 = f^4 x^2 (eps^2 - 1)/(1 + eps f^2 x^2 + sqrt F)
        let num = sphere_integral(eps, f, params, |phi| {
            let x2 = phi.cos().powi(2);
            let fv = f_of_phi(phi, eps, f);
            f.powi(4) * x2 * (eps * eps - 1.0) / (1.0 + eps * f * f * x2 + fv.sqrt())
        })?;
        -(j / (f * f)) * num / denom / params.omega * params.omega0
    };
    Ok(np + shift)
}

/// Diagonalize the effective LMG Hamiltonian and shift by w n'.
pub fn lmg_requantize(n_prime: u32, params: &ModelParams) -> Result<BandSpectrum, BoaError> {
    let two_j = params.two_j();
    let jx = jx_matrix(two_j);
    let jz = jz_matrix(two_j);
    let c = 2.0 * params.gamma * params.gamma / (params.omega * params.j);
    let h = &jz * params.omega0 - &jx.dot(&jx) * c;
    let eig = symmetric_eigensolve(&h).expect("LMG matrix is symmetric by construction");
    let shift = params.omega * n_prime as f64;
    let levels = eig
        .values
        .iter()
        .enumerate()
        .map(|(n, &e)| BandLevel { n, energy: e + shift, degeneracy: 1 })
        .collect();
    Ok(BandSpectrum { label: n_prime as f64, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use std::f64::consts::PI;

    fn sr(omega: f64, f: f64, j: f64) -> ModelParams {
        ModelParams::from_coupling_ratio(omega, 1.0, f, j).unwrap()
    }

    #[test]
    fn effective_energy_examples() {
        let dec = ModelParams::new(0.7, 1.3, 0.0, 5.0).unwrap();
        assert!((effective_energy(2.0, 0.3, 1, &dec) - (0.7 + 1.3 * 2.0)).abs() < 1e-14);

        let p = sr(1.0, 2.0, 10.0);
        let jz = -10.0 / 4.0;
        let e = effective_energy(jz, 0.0, 0, &p);
        assert!((e / 10.0 + 0.5 * (4.0 + 0.25)).abs() < 1e-12);
        // north pole is gamma independent
        let e = effective_energy(10.0, 1.234, 2, &p);
        assert!((e - (2.0 + 10.0)).abs() < 1e-12);
    }

    #[test]
    fn band_and_frequency_examples() {
        let dec = ModelParams::new(0.7, 1.3, 0.0, 5.0).unwrap();
        let (b, wf) = band_minimum_and_frequency(0, &dec).unwrap();
        assert!((wf - 1.3).abs() < 1e-14);
        assert!((b.e_min + 1.3 * 5.0).abs() < 1e-12);

        let p = sr(20.0, 3.0, 10.0);
        let (_, wf) = band_minimum_and_frequency(0, &p).unwrap();
        assert!((20.0 / wf - 2.236).abs() < 0.01);

        let p = sr(10.0, 0.8, 10.0);
        let (b, wf) = band_minimum_and_frequency(2, &p).unwrap();
        assert!((10.0 / wf - 16.67).abs() < 0.01);
        assert!((b.e_max - (20.0 + 10.0)).abs() < 1e-12);

        assert!(band_minimum_and_frequency(0, &sr(1.0, 1.0, 10.0)).is_err());
    }

    #[test]
    fn phi_boundary_examples() {
        let p = sr(1.0, 2.0, 10.0);
        let eps_min = -0.5 * (4.0 + 0.25);
        assert!(phi_boundary(eps_min, &p).unwrap().abs() < 1e-6);
        assert!((phi_boundary(-1.0, &p).unwrap() - PI / 3.0).abs() < 1e-12);
        let c2 = (1.5 + 1.25_f64.sqrt()) / 4.0;
        assert!((phi_boundary(-1.5, &p).unwrap() - c2.sqrt().acos()).abs() < 1e-12);
        assert!(matches!(phi_boundary(-0.5, &p), Err(BoaError::PhiDomain(_))));
    }

    #[test]
    fn dos_decoupled_and_band_head() {
        let dec = ModelParams::new(0.7, 1.3, 1e-9, 5.0).unwrap();
        let nu = dos(0.7 + 1.3 * 2.0, 1, &dec).unwrap();
        assert!((nu * 1.3 - 1.0).abs() < 1e-8);

        // superradiant band head: two symmetric lobes double the count
        let p = sr(1.0, 2.0, 10.0);
        let (b, wf) = band_minimum_and_frequency(0, &p).unwrap();
        let nu = dos(b.e_min + 1e-7, 0, &p).unwrap();
        assert!((nu * wf - 2.0).abs() < 1e-3, "nu wf = {}", nu * wf);

        let normal = sr(1.0, 0.5, 10.0);
        let (b, wf) = band_minimum_and_frequency(0, &normal).unwrap();
        let nu = dos(b.e_min + 1e-7, 0, &normal).unwrap();
        assert!((nu * wf - 1.0).abs() < 1e-3);
    }

    #[test]
    fn dos_diverges_at_esqpt() {
        let p = sr(1.0, 2.0, 10.0);
        let mut below = 0.0;
        let mut above = 0.0;
        for k in 2..=6 {
            let d = 10.0_f64.powi(-k);
            let nu_b = dos(10.0 * (-1.0 - d), 0, &p).unwrap();
            let nu_a = dos(10.0 * (-1.0 + d), 0, &p).unwrap();
            assert!(nu_b > below && nu_a > above, "not monotone at k={k}");
            // each diverges like log(1/d); their ratio stays bounded
            assert!(nu_a / nu_b < 10.0 && nu_b / nu_a < 10.0);
            below = nu_b;
            above = nu_a;
        }
        assert!(matches!(dos(-10.0, 0, &p), Err(BoaError::EsqptDivergence)));
    }

    #[test]
    fn jz_decoupled_and_band_head() {
        let dec = ModelParams::new(0.7, 1.3, 1e-12, 5.0).unwrap();
        let e = 2.0 * 0.7 + 1.3 * (-2.5);
        let jz = expect_jz(e, 2, &dec).unwrap();
        assert!((jz + 2.5).abs() < 1e-8);

        let p = sr(1.0, 2.0, 10.0);
        let (b, _) = band_minimum_and_frequency(0, &p).unwrap();
        let jz = expect_jz(b.e_min + 1e-6, 0, &p).unwrap();
        assert!((jz + 2.5).abs() < 1e-2, "jz = {jz}");
    }

    #[test]
    fn photons_decoupled_and_band_head() {
        let dec = ModelParams::new(0.7, 1.3, 1e-12, 5.0).unwrap();
        let n = expect_photons(0.7 * 3.0 + 1.3 * 0.5, 3, &dec).unwrap();
        assert!((n - 3.0).abs() < 1e-8);

        let p = sr(1.0, 2.0, 10.0);
        let (b, _) = band_minimum_and_frequency(1, &p).unwrap();
        let n = expect_photons(b.e_min + 1e-6, 1, &p).unwrap();
        let g2 = p.gamma * p.gamma;
        let expect = 1.0 + 2.0 * g2 * 10.0 * (1.0 - 1.0 / 16.0) / (p.omega * p.omega);
        assert!((n - expect).abs() < 1e-2, "n = {n}, expect = {expect}");
    }

    #[test]
    fn jz_monotone_above_esqpt() {
        // above eps = -1 the average climbs from near the south pole to 0
        // at the equator-covered top; below -1 the separatrix pulls it the
        // other way, so monotonicity only holds on (-1, 1]
        let p = sr(10.0, 2.0, 20.0);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..12 {
            let eps = -0.9 + 0.157 * k as f64;
            let jz = expect_jz(eps * 20.0, 0, &p).unwrap();
            assert!(jz > prev, "eps={eps} jz={jz} prev={prev}");
            prev = jz;
        }
        // the band top is the north pole, a point orbit
        let top = expect_jz(0.9999 * 20.0, 0, &p).unwrap();
        assert!(top > 0.95 * 20.0, "top of band jz = {top}");
        // head value sits at the mean-field minimum, -j/f^2
        let (b, _) = band_minimum_and_frequency(0, &p).unwrap();
        let head = expect_jz(b.e_min + 1e-6 * 20.0, 0, &p).unwrap();
        assert!((head + 5.0).abs() < 1e-2);
    }

    #[test]
    fn lmg_requantize_examples() {
        let dec = ModelParams::new(0.7, 1.3, 0.0, 5.0).unwrap();
        let spec = lmg_requantize(2, &dec).unwrap();
        for (k, lvl) in spec.levels.iter().enumerate() {
            let expect = 0.7 * 2.0 + 1.3 * (k as f64 - 5.0);
            assert!((lvl.energy - expect).abs() < 1e-10);
        }

        // n' shift is an additive constant
        let p = sr(10.0, 2.0, 20.0);
        let s0 = lmg_requantize(0, &p).unwrap();
        let s3 = lmg_requantize(3, &p).unwrap();
        for (a, b) in s0.levels.iter().zip(&s3.levels) {
            assert!((b.energy - a.energy - 30.0).abs() < 1e-9);
        }
        // band top bounded by w n' + w0 j
        let (band, _) = band_minimum_and_frequency(0, &p).unwrap();
        let top = s0.levels.last().unwrap().energy;
        assert!(top <= band.e_max + 1e-10);
        // band head close to the mean-field minimum at large j (the
        // quantum ground state may dip slightly below it)
        let head = s0.levels[0].energy;
        assert!((head - band.e_min).abs() < 0.1 * band.e_min.abs());
    }

    #[test]
    fn quarter_period_equals_full() {
        let p = sr(1.0, 2.0, 10.0);
        for eps in [-0.4, 0.5] {
            let f = 2.0;
            let quarter = sphere_integral(eps, f, &p, |_| 1.0).unwrap();
            let spec = QuadratureSpec::default();
            let full = integrate_singular(
                |phi| 1.0 / f_of_phi(phi, eps, f).sqrt(),
                0.0,
                2.0 * PI,
                &spec,
            )
            .unwrap();
            assert!((quarter - full).abs() <= 1e-9 * full);
        }
    }

    #[test]
    fn state_count_normalization() {
        // integral of nu over the band counts one state per Planck cell
        let p = sr(10.0, 2.0, 20.0);
        let (band, _) = band_minimum_and_frequency(0, &p).unwrap();
        let n = 4000;
        let mut total = 0.0;
        let lo = band.e_min;
        let hi = band.e_max;
        let de = (hi - lo) / n as f64;
        for k in 0..n {
            let e = lo + (k as f64 + 0.5) * de;
            let eps = reduced_energy(e, 0, &p);
            if (eps + 1.0).abs() < 1e-4 || eps <= band.eps_min || eps >= 1.0 {
                continue;
            }
            total += dos(e, 0, &p).unwrap() * de;
        }
        assert!((total - 2.0 * p.j).abs() <= 0.02 * 2.0 * p.j, "count = {total}");
    }
}
