//! Fast-pseudospin adiabatic bands: the spin precesses quickly around a
//! q-dependent axis, leaving a classical particle in the effective
//! potential V_m'(q) = (w/2) q^2 + m' w_P(q).

use super::{BandLevel, BandSpectrum, BoaError, Convention};
use crate::model::{derived_scales, ModelParams};
use crate::numerics::{find_root, integrate_singular, QuadratureSpec, Singularity};

/// Precession frequency w_P(q) = sqrt(w0^2 + (2 gamma q / sqrt j)^2).
pub fn omega_p(q: f64, params: &ModelParams) -> f64 {
    let s = 2.0 * params.gamma * q / params.j.sqrt();
    (params.omega0 * params.omega0 + s * s).sqrt()
}

/// Effective potential for the band labeled m'.
pub fn potential(q: f64, m_prime: f64, params: &ModelParams) -> f64 {
    0.5 * params.omega * q * q + m_prime * omega_p(q, params)
}

/// Band head data: minimum energy and minimizing coordinate(s).
#[derive(Debug, Clone, Copy)]
pub struct PseudospinBand {
    pub m_prime: f64,
    pub e_min: f64,
    /// Non-negative minimizer; the double well has minima at +-q_min.
    pub q_min: f64,
    pub double_well: bool,
}

/// Classically allowed q-region at energy E within band m'.
#[derive(Debug, Clone)]
pub struct AllowedRegion {
    /// One interval, or two mirror-symmetric intervals (negative-q first).
    pub intervals: Vec<(f64, f64)>,
}

fn check_m_prime(m_prime: f64, params: &ModelParams) -> Result<(), BoaError> {
    if m_prime.abs() <= params.j + 1e-12 {
        Ok(())
    } else {
        Err(BoaError::OutOfRange)
    }
}

/// Minimum of V_m' per the two phase branches.
pub fn band_minimum(m_prime: f64, params: &ModelParams) -> Result<PseudospinBand, BoaError> {
    check_m_prime(m_prime, params)?;
    let f = derived_scales(params).f;
    let mu = m_prime / params.j;
    let double_well = f > 1.0 && mu <= -1.0 / (f * f);
    if double_well {
        let e_min = -(params.j * params.omega0 / 2.0) * (1.0 / (f * f) + mu * mu * f * f);
        let q_min = (params.omega0 * params.j.sqrt() / (2.0 * params.gamma))
            * (mu * mu * f.powi(4) - 1.0).max(0.0).sqrt();
        Ok(PseudospinBand { m_prime, e_min, q_min, double_well })
    } else {
        Ok(PseudospinBand { m_prime, e_min: params.omega0 * m_prime, q_min: 0.0, double_well })
    }
}

/// Slow (boson) and fast (precession) frequencies at the band head.
pub fn band_head_frequencies(m_prime: f64, params: &ModelParams) -> Result<(f64, f64), BoaError> {
    check_m_prime(m_prime, params)?;
    let f = derived_scales(params).f;
    let mu = m_prime / params.j;
    if (1.0 + mu * f * f).abs() <= 1e-12 {
        return Err(BoaError::FlatMinimum);
    }
    let band = band_minimum(m_prime, params)?;
    if band.double_well {
        let omega_b = params.omega * (1.0 - 1.0 / (mu * mu * f.powi(4))).sqrt();
        let omega_f = params.omega0 * mu.abs() * f * f;
        Ok((omega_b, omega_f))
    } else {
        let omega_b = params.omega * (1.0 + mu * f * f).sqrt();
        Ok((omega_b, params.omega0))
    }
}

/// Turning points and interval topology at energy E.
pub fn allowed_region(e: f64, m_prime: f64, params: &ModelParams) -> Result<AllowedRegion, BoaError> {
    let band = band_minimum(m_prime, params)?;
    if e < band.e_min - 1e-12 * params.omega0 * params.j.max(1.0) {
        return Err(BoaError::BelowBandMinimum { e, e_min: band.e_min });
    }
    let f = derived_scales(params).f;
    let mu = m_prime / params.j;
    let eps = e / (params.omega0 * params.j);
    let scale = 2.0 * params.j * params.omega0 / params.omega;
    let disc = (1.0 + 2.0 * eps * f * f + mu * mu * f.powi(4)).max(0.0).sqrt();
    let q_out = (scale * (eps + mu * mu * f * f - mu * disc)).max(0.0).sqrt();
    let barrier = params.omega0 * m_prime;
    if band.double_well && e < barrier {
        let q_in = (scale * (eps + mu * mu * f * f + mu * disc)).max(0.0).sqrt();
        Ok(AllowedRegion { intervals: vec![(-q_out, -q_in), (q_in, q_out)] })
    } else {
        Ok(AllowedRegion { intervals: vec![(-q_out, q_out)] })
    }
}

/// Both roots u = q^2 of the quartic (E - V)(E - Vtilde), where Vtilde is
/// the opposite-sign branch (w/2)q^2 - m' w_P(q). Returned as (other, outer);
/// the outer root is the physical outer turning point squared.
fn u_roots(e: f64, m_prime: f64, params: &ModelParams) -> (f64, f64) {
    let f = derived_scales(params).f;
    let mu = m_prime / params.j;
    let eps = e / (params.omega0 * params.j);
    let scale = 2.0 * params.j * params.omega0 / params.omega;
    let disc = (1.0 + 2.0 * eps * f * f + mu * mu * f.powi(4)).max(0.0).sqrt();
    let u_a = scale * (eps + mu * mu * f * f + mu * disc);
    let u_b = scale * (eps + mu * mu * f * f - mu * disc);
    (u_a, u_b)
}

/// E - V_m'(q) through the factored quartic. Near a turning point the
/// direct difference loses all significant digits when the well is
/// shallow; the factored form keeps the roots exact.
fn dv_clean(q: f64, e: f64, m_prime: f64, u_a: f64, u_b: f64, params: &ModelParams) -> f64 {
    if m_prime == 0.0 {
        return e - 0.5 * params.omega * q * q;
    }
    let u = q * q;
    let w = params.omega;
    // E - Vtilde never vanishes on the allowed region for m' != 0
    let evt = e - (0.5 * w * u - m_prime * omega_p(q, params));
    0.25 * w * w * (u - u_a) * (u - u_b) / evt
}

/// Smallest move from a closed-form turning point toward the interior
/// where the computed E - V is strictly positive. The analytic endpoint
/// can overshoot the floating-point root of E - V by a few ulps of the
/// energy scale, which would leave a clamped gap and an unresolvable
/// interior singularity.
fn nudge_inside<F: Fn(f64) -> f64>(dv: &F, endpoint: f64, interior: f64) -> f64 {
    if dv(endpoint) > 0.0 {
        return endpoint;
    }
    let mut lo = endpoint;
    let mut hi = interior;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if dv(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Integral of g(q)/sqrt(E - V) over the allowed region, exploiting the
/// q -> -q symmetry of V and of every integrand used here.
fn singular_integral<G: Fn(f64) -> f64>(
    e: f64,
    m_prime: f64,
    params: &ModelParams,
    g: G,
) -> Result<f64, BoaError> {
    let region = allowed_region(e, m_prime, params)?;
    let (u_a, u_b) = u_roots(e, m_prime, params);
    let dv = |q: f64| dv_clean(q, e, m_prime, u_a, u_b, params);
    let integrand = |q: f64| {
        let d = dv(q);
        if d <= 0.0 {
            0.0
        } else {
            g(q) / d.sqrt()
        }
    };
    if region.intervals.len() == 2 {
        let (q_in, q_out) = region.intervals[1];
        let mid = 0.5 * (q_in + q_out);
        let a = nudge_inside(&dv, q_in, mid);
        let b = nudge_inside(&dv, q_out, mid);
        if !(a < b) {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_singularity(Singularity::InverseSqrtBoth);
        Ok(2.0 * integrate_singular(integrand, a, b, &spec)?)
    } else {
        let (_, q_out) = region.intervals[0];
        let b = nudge_inside(&dv, q_out, 0.0);
        if !(b > 0.0) {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_singularity(Singularity::InverseSqrtRight);
        Ok(2.0 * integrate_singular(integrand, 0.0, b, &spec)?)
    }
}

fn dos_guards(e: f64, m_prime: f64, params: &ModelParams) -> Result<PseudospinBand, BoaError> {
    let band = band_minimum(m_prime, params)?;
    if e <= band.e_min {
        return Err(BoaError::BelowBandMinimum { e, e_min: band.e_min });
    }
    if band.double_well && (e - params.omega0 * m_prime).abs() <= 1e-9 * params.omega0 {
        return Err(BoaError::BarrierTop);
    }
    Ok(band)
}

/// Semiclassical density of states nu(E, m').
pub fn dos(e: f64, m_prime: f64, params: &ModelParams) -> Result<f64, BoaError> {
    dos_guards(e, m_prime, params)?;
    let two_pi_nu = (2.0 / params.omega).sqrt() * singular_integral(e, m_prime, params, |_| 1.0)?;
    Ok(two_pi_nu / std::f64::consts::TAU)
}

/// Microcanonical <a' a> on the band at energy E.
pub fn expect_photons(e: f64, m_prime: f64, params: &ModelParams) -> Result<f64, BoaError> {
    dos_guards(e, m_prime, params)?;
    let denom = singular_integral(e, m_prime, params, |_| 1.0)?;
    let num =
        singular_integral(e, m_prime, params, |q| (e - m_prime * omega_p(q, params)) / params.omega)?;
    Ok(num / denom)
}

/// Microcanonical <J_z> on the band at energy E.
pub fn expect_jz(e: f64, m_prime: f64, params: &ModelParams) -> Result<f64, BoaError> {
    dos_guards(e, m_prime, params)?;
    let denom = singular_integral(e, m_prime, params, |_| 1.0)?;
    let num = singular_integral(e, m_prime, params, |q| {
        params.omega0 * m_prime / omega_p(q, params)
    })?;
    Ok(num / denom)
}

/// Total phase-space area S(E) = contour integral of p dq over the whole
/// allowed region; in the double-well range this is the sum of both wells.
pub fn action(e: f64, m_prime: f64, params: &ModelParams) -> Result<f64, BoaError> {
    let region = allowed_region(e, m_prime, params)?;
    let (u_a, u_b) = u_roots(e, m_prime, params);
    let pref = 2.0 * (2.0 / params.omega).sqrt();
    let integrand = |q: f64| dv_clean(q, e, m_prime, u_a, u_b, params).max(0.0).sqrt();
    if region.intervals.len() == 2 {
        let (q_in, q_out) = region.intervals[1];
        if q_out - q_in <= 0.0 {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_singularity(Singularity::None);
        Ok(2.0 * pref * integrate_singular(integrand, q_in, q_out, &spec)?)
    } else {
        let (_, q_out) = region.intervals[0];
        if q_out <= 0.0 {
            return Ok(0.0);
        }
        let spec = QuadratureSpec::with_singularity(Singularity::None);
        Ok(2.0 * pref * integrate_singular(integrand, 0.0, q_out, &spec)?)
    }
}

fn quantized_action(n: usize, convention: Convention) -> f64 {
    match convention {
        Convention::HalfInteger => std::f64::consts::TAU * (n as f64 + 0.5),
        Convention::Integer => std::f64::consts::TAU * n as f64,
    }
}

/// Energy solving well_action(E) = target, with well_action monotone.
fn solve_level<A: Fn(f64) -> Result<f64, BoaError>>(
    well_action: &A,
    e_lo: f64,
    target: f64,
    e_scale: f64,
) -> Result<f64, BoaError> {
    if target <= 0.0 {
        return Ok(e_lo);
    }
    let mut hi = e_lo + e_scale;
    for _ in 0..200 {
        if well_action(hi)? >= target {
            break;
        }
        hi = e_lo + 2.0 * (hi - e_lo);
    }
    // the closure caches no state, so errors inside the bracket search
    // surface through a probe before the root iteration
    well_action(hi)?;
    let g = |e: f64| well_action(e).map(|s| s - target).unwrap_or(f64::NAN);
    let root = find_root(g, e_lo, hi, 1e-11 * e_scale)?;
    if !root.is_finite() {
        return Err(BoaError::NonMonotoneAction);
    }
    Ok(root)
}

/// Bohr-Sommerfeld requantization of band m'. Below the double-well
/// barrier each well is quantized separately and the level is doubled;
/// tunneling splittings are ignored.
pub fn bohr_sommerfeld_levels(
    m_prime: f64,
    params: &ModelParams,
    count: usize,
    convention: Convention,
) -> Result<BandSpectrum, BoaError> {
    let band = band_minimum(m_prime, params)?;
    let e_scale = params.omega0 * params.j.max(1.0);
    let mut levels: Vec<BandLevel> = Vec::new();

    if band.double_well {
        let barrier = params.omega0 * m_prime;
        // per-well action is half the total area by mirror symmetry
        let well = |e: f64| action(e, m_prime, params).map(|s| 0.5 * s);
        let s_barrier = 0.5 * action(barrier, m_prime, params)?;
        let mut n = 0usize;
        let mut have = 0usize;
        while have < count {
            let target = quantized_action(n, convention);
            if target >= s_barrier {
                break;
            }
            let e = solve_level(&well, band.e_min, target, e_scale)?;
            levels.push(BandLevel { n, energy: e, degeneracy: 2 });
            have += 2;
            n += 1;
        }
        // above the barrier the full region is one connected interval
        let e_above = barrier + 1e-8 * params.omega0;
        let full = |e: f64| action(e.max(e_above), m_prime, params);
        let s_above = full(e_above)?;
        let shift = match convention {
            Convention::HalfInteger => 0.5,
            Convention::Integer => 0.0,
        };
        let mut n_full = (s_above / std::f64::consts::TAU - shift).ceil().max(0.0) as usize;
        while have < count {
            let target = quantized_action(n_full, convention);
            let e = solve_level(&full, e_above, target.max(s_above), e_scale)?;
            levels.push(BandLevel { n: n_full, energy: e, degeneracy: 1 });
            have += 1;
            n_full += 1;
        }
    } else {
        let full = |e: f64| action(e, m_prime, params);
        for n in 0..count {
            let target = quantized_action(n, convention);
            let e = solve_level(&full, band.e_min, target, e_scale)?;
            levels.push(BandLevel { n, energy: e, degeneracy: 1 });
        }
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for w in levels.windows(2) {
        if w[1].energy < w[0].energy - 1e-9 * e_scale {
            return Err(BoaError::NonMonotoneAction);
        }
    }
    Ok(BandSpectrum { label: m_prime, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use proptest::prelude::*;

    fn sr_params() -> ModelParams {
        ModelParams::from_coupling_ratio(1.0, 1.0, 2.0, 10.0).unwrap()
    }

    #[test]
    fn potential_examples() {
        let p = ModelParams::new(0.7, 1.3, 0.0, 5.0).unwrap();
        assert!((potential(2.0, -3.0, &p) - (0.5 * 0.7 * 4.0 - 3.0 * 1.3)).abs() < 1e-14);
        let p2 = sr_params();
        assert!((potential(0.0, -4.0, &p2) + 4.0).abs() < 1e-14);
        let v = potential(37.5_f64.sqrt(), -10.0, &p2);
        assert!((v / 10.0 + 2.125).abs() < 1e-12);
    }

    #[test]
    fn band_minimum_branches() {
        let normal = ModelParams::from_coupling_ratio(1.0, 1.0, 0.6, 10.0).unwrap();
        let b = band_minimum(-10.0, &normal).unwrap();
        assert!(!b.double_well);
        assert!((b.e_min + 10.0).abs() < 1e-12);
        assert_eq!(b.q_min, 0.0);

        let b2 = band_minimum(-10.0, &sr_params()).unwrap();
        assert!(b2.double_well);
        assert!((b2.e_min / 10.0 + 2.125).abs() < 1e-12);
        assert!((b2.q_min - 6.123724356957945).abs() < 1e-10);
        // e_min = V(q_min) closes the loop
        let v = potential(b2.q_min, -10.0, &sr_params());
        assert!((v - b2.e_min).abs() <= 1e-12 * b2.e_min.abs());

        // branch boundary m' = -j/f^2
        let b3 = band_minimum(-2.5, &sr_params()).unwrap();
        assert!(b3.q_min.abs() < 1e-12);
        assert!((b3.e_min + 2.5).abs() < 1e-12);
    }

    #[test]
    fn band_head_frequency_examples() {
        let dec = ModelParams::new(0.7, 1.3, 0.0, 5.0).unwrap();
        let (wb, wf) = band_head_frequencies(-5.0, &dec).unwrap();
        assert!((wb - 0.7).abs() < 1e-14 && (wf - 1.3).abs() < 1e-14);

        let (wb, wf) = band_head_frequencies(-10.0, &sr_params()).unwrap();
        assert!((wb - 15.0_f64.sqrt() / 4.0).abs() < 1e-12);
        assert!((wf - 4.0).abs() < 1e-12);
        assert!((wf / wb - 4.13).abs() < 0.01);

        let p = ModelParams::from_coupling_ratio(0.2, 1.0, 3.0, 10.0).unwrap();
        let (wb, wf) = band_head_frequencies(-10.0, &p).unwrap();
        assert!((wf / wb - 45.28).abs() < 0.01);

        assert!(matches!(band_head_frequencies(-2.5, &sr_params()), Err(BoaError::FlatMinimum)));
    }

    #[test]
    fn allowed_region_examples() {
        let p = sr_params();
        let b = band_minimum(-10.0, &p).unwrap();
        // at the band head the turning points coincide with the minimum
        let r = allowed_region(b.e_min, -10.0, &p).unwrap();
        assert_eq!(r.intervals.len(), 2);
        let (q_in, q_out) = r.intervals[1];
        assert!((q_in * q_in - 37.5).abs() < 1e-8);
        assert!((q_out * q_out - 37.5).abs() < 1e-8);

        // harmonic turning points at gamma = 0
        let dec = ModelParams::new(0.5, 1.0, 0.0, 5.0).unwrap();
        let e_b = 1.7;
        let r = allowed_region(-3.0 + e_b, -3.0, &dec).unwrap();
        assert_eq!(r.intervals.len(), 1);
        let qt = (2.0 * e_b / 0.5_f64).sqrt();
        assert!((r.intervals[0].1 - qt).abs() < 1e-10);
        assert!((r.intervals[0].0 + qt).abs() < 1e-10);

        assert!(matches!(
            allowed_region(b.e_min - 1.0, -10.0, &p),
            Err(BoaError::BelowBandMinimum { .. })
        ));
        // turning points are roots of V = E
        let e = -15.0;
        let r = allowed_region(e, -10.0, &p).unwrap();
        for (a, b) in &r.intervals {
            for q in [a, b] {
                assert!((potential(*q, -10.0, &p) - e).abs() <= 1e-10 * e.abs());
            }
        }
    }

    #[test]
    fn dos_decoupled_is_inverse_omega() {
        let p = ModelParams::new(0.5, 1.0, 0.0, 5.0).unwrap();
        for e_b in [0.3, 1.0, 4.7] {
            let nu = dos(-5.0 + e_b, -5.0, &p).unwrap();
            assert!((nu - 2.0).abs() < 1e-8, "nu = {nu}");
        }
    }

    #[test]
    fn dos_band_head_limit() {
        let p = ModelParams::from_coupling_ratio(1.0, 1.0, 0.8, 10.0).unwrap();
        let b = band_minimum(-10.0, &p).unwrap();
        let (wb, _) = band_head_frequencies(-10.0, &p).unwrap();
        let nu = dos(b.e_min + 1e-7, -10.0, &p).unwrap();
        assert!((nu * wb - 1.0).abs() < 1e-3, "nu wb = {}", nu * wb);
    }

    #[test]
    fn dos_diverges_at_barrier() {
        let p = sr_params();
        let barrier = -10.0;
        let mut prev = 0.0;
        for k in 2..=6 {
            let nu = dos(barrier - 10.0_f64.powi(-k), -10.0, &p).unwrap();
            assert!(nu > prev, "not monotone at k={k}");
            prev = nu;
        }
        assert!(matches!(dos(barrier, -10.0, &p), Err(BoaError::BarrierTop)));
    }

    #[test]
    fn photons_decoupled_and_band_head() {
        let p = ModelParams::new(0.5, 1.0, 0.0, 5.0).unwrap();
        let e = -5.0 + 2.3;
        let n = expect_photons(e, -5.0, &p).unwrap();
        assert!((n - 2.3 / 0.5).abs() < 1e-8 * (2.3 / 0.5));

        // delta support at the double-well head: <a'a> -> q_min^2 / 2
        let sr = sr_params();
        let b = band_minimum(-10.0, &sr).unwrap();
        let n = expect_photons(b.e_min + 1e-6, -10.0, &sr).unwrap();
        assert!((n - b.q_min * b.q_min / 2.0).abs() < 1e-2, "n = {n}");
    }

    #[test]
    fn jz_decoupled_and_band_head() {
        let p = ModelParams::new(0.5, 1.0, 0.0, 5.0).unwrap();
        let jz = expect_jz(-5.0 + 1.1, -5.0, &p).unwrap();
        assert!((jz + 5.0).abs() < 1e-8);

        let sr = sr_params();
        let b = band_minimum(-10.0, &sr).unwrap();
        let jz = expect_jz(b.e_min + 1e-6, -10.0, &sr).unwrap();
        assert!((jz + 10.0 / 4.0).abs() < 1e-2, "jz = {jz}");
    }

    #[test]
    fn bohr_sommerfeld_harmonic_ladder() {
        let p = ModelParams::new(0.5, 1.0, 0.0, 5.0).unwrap();
        let spec = bohr_sommerfeld_levels(-5.0, &p, 10, Convention::HalfInteger).unwrap();
        for lvl in &spec.levels {
            let expect = -5.0 + 0.5 * (lvl.n as f64 + 0.5);
            assert!(
                (lvl.energy - expect).abs() <= 1e-8 * expect.abs().max(1.0),
                "n={} e={} expect={expect}",
                lvl.n,
                lvl.energy
            );
            assert_eq!(lvl.degeneracy, 1);
        }
        let int = bohr_sommerfeld_levels(-5.0, &p, 4, Convention::Integer).unwrap();
        assert!((int.levels[1].energy - (-5.0 + 0.5)).abs() < 1e-8);
    }

    #[test]
    fn bohr_sommerfeld_double_well_doublets() {
        let spec = bohr_sommerfeld_levels(-10.0, &sr_params(), 12, Convention::HalfInteger).unwrap();
        let barrier = -10.0;
        for lvl in &spec.levels {
            if lvl.energy < barrier {
                assert_eq!(lvl.degeneracy, 2);
            }
        }
        assert!(spec.levels.iter().any(|l| l.degeneracy == 2));
        let es = spec.energies();
        assert!(es.len() >= 12);
        assert!(es.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn action_derivative_matches_dos() {
        let cases = [
            (sr_params(), -10.0, -18.0),
            (sr_params(), -10.0, -7.0),
            (ModelParams::from_coupling_ratio(1.0, 1.0, 0.8, 10.0).unwrap(), -10.0, -6.0),
        ];
        for (p, mp, e) in cases {
            let h = 1e-6;
            let ds =
                (action(e + h, mp, &p).unwrap() - action(e - h, mp, &p).unwrap()) / (2.0 * h);
            let two_pi_nu = std::f64::consts::TAU * dos(e, mp, &p).unwrap();
            assert!(
                (ds - two_pi_nu).abs() <= 1e-4 * two_pi_nu,
                "ds={ds} 2pinu={two_pi_nu} at e={e}"
            );
        }
    }

    #[test]
    fn symmetric_well_halves() {
        // full-interval integral equals twice the half-interval one
        let p = ModelParams::from_coupling_ratio(1.0, 1.0, 0.8, 10.0).unwrap();
        let e = -6.0;
        let r = allowed_region(e, -10.0, &p).unwrap();
        let (qa, qb) = r.intervals[0];
        let spec = QuadratureSpec::with_singularity(Singularity::InverseSqrtBoth);
        let full = integrate_singular(
            |q| 1.0 / (e - potential(q, -10.0, &p)).max(0.0).sqrt(),
            qa,
            qb,
            &spec,
        )
        .unwrap();
        let half = singular_integral(e, -10.0, &p, |_| 1.0).unwrap();
        assert!((full - half).abs() <= 1e-8 * full);
    }

    #[test]
    fn frequencies_match_second_derivative() {
        for (p, mp) in [
            (sr_params(), -10.0),
            (sr_params(), -7.0),
            (ModelParams::from_coupling_ratio(1.0, 1.0, 0.8, 10.0).unwrap(), -10.0),
            (ModelParams::from_coupling_ratio(0.2, 1.0, 3.0, 10.0).unwrap(), -4.0),
        ] {
            let b = band_minimum(mp, &p).unwrap();
            let (wb, wf) = band_head_frequencies(mp, &p).unwrap();
            let h = 1e-3;
            let v = |q: f64| potential(q, mp, &p);
            let q0 = b.q_min;
            // 5-point stencil second derivative
            let vpp = (-v(q0 + 2.0 * h) + 16.0 * v(q0 + h) - 30.0 * v(q0) + 16.0 * v(q0 - h)
                - v(q0 - 2.0 * h))
                / (12.0 * h * h);
            let wb_num = (p.omega * vpp).sqrt();
            assert!((wb_num - wb).abs() <= 1e-6 * wb, "wb={wb} num={wb_num}");
            assert!((omega_p(q0, &p) - wf).abs() <= 1e-12 * wf);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn band_heads_increase_with_m_prime(f in 0.1_f64..3.0, wr in 0.2_f64..5.0) {
            prop_assume!((f - 1.0).abs() > 1e-6);
            let p = ModelParams::from_coupling_ratio(wr, 1.0, f, 10.0).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for k in 0..21 {
                let mp = -10.0 + k as f64;
                let e = band_minimum(mp, &p).unwrap().e_min;
                prop_assert!(e > prev);
                prev = e;
            }
        }

        #[test]
        fn jz_bounded_by_m_prime(f in 0.2_f64..2.5, de in 0.05_f64..3.0) {
            prop_assume!((f - 1.0).abs() > 1e-3);
            let p = ModelParams::from_coupling_ratio(1.0, 1.0, f, 10.0).unwrap();
            let mp = -10.0;
            let b = band_minimum(mp, &p).unwrap();
            let barrier = p.omega0 * mp;
            let e = b.e_min + de * (b.e_min.abs() / 4.0);
            if (e - barrier).abs() > 1e-6 && e > b.e_min {
                let jz = expect_jz(e, mp, &p).unwrap();
                prop_assert!(jz.abs() <= mp.abs() + 1e-9);
            }
        }
    }
}
