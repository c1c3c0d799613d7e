//! Classical Dicke dynamics from the coherent-state Hamiltonian:
//! trajectory integration, Poincare sections, and the temporal variance
//! of the adiabatic invariant j_z'.

use crate::boa::pseudospin::{band_minimum, omega_p};
use crate::boa::BoaError;
use crate::model::ModelParams;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("band label out of range")]
    OutOfRange,
    #[error("trajectory failed its conservation checks")]
    InvalidTrajectory,
    #[error("initial condition off the requested energy shell")]
    OffShell,
    #[error(transparent)]
    Boa(#[from] BoaError),
}

/// Phase-space point: boson quadratures and Cartesian spin components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl ClassicalState {
    pub fn spin_norm(&self) -> f64 {
        (self.jx * self.jx + self.jy * self.jy + self.jz * self.jz).sqrt()
    }
}

/// Dense-output trajectory with conservation diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ClassicalState>,
    /// max |E(t) - E(0)| / |E(0)| over the output grid.
    pub energy_drift: f64,
    /// max relative spin-norm drift before renormalization.
    pub spin_drift: f64,
    /// false when the energy drift exceeded 1e-6.
    pub valid: bool,
}

/// One Poincare crossing, on the surface p = 0 with dp/dt > 0.
#[derive(Debug, Clone, Copy)]
pub struct SectionPoint {
    /// Spin azimuth atan2(jy, jx) in (-pi, pi].
    pub phi: f64,
    pub jz_over_j: f64,
    pub traj_id: usize,
}

#[derive(Debug, Clone)]
pub struct PoincareSection {
    pub points: Vec<SectionPoint>,
}

/// H_cl = (w/2)(p^2 + q^2) + w0 jz + (2 gamma/sqrt j) q jx.
pub fn hamiltonian(s: &ClassicalState, params: &ModelParams) -> f64 {
    0.5 * params.omega * (s.p * s.p + s.q * s.q)
        + params.omega0 * s.jz
        + (2.0 * params.gamma / params.j.sqrt()) * s.q * s.jx
}

/// Hamiltonian flow: boson part canonical, spin part as precession
/// dj/dt = j x B with B = ((2 gamma/sqrt j) q, 0, w0), which avoids the
/// polar chart singularities at jz = +-j.
pub fn eom_rhs(s: &ClassicalState, params: &ModelParams) -> [f64; 5] {
    let c = 2.0 * params.gamma / params.j.sqrt();
    let bx = c * s.q;
    let bz = params.omega0;
    [
        params.omega * s.p,
        -params.omega * s.q - c * s.jx,
        s.jy * bz,
        s.jz * bx - s.jx * bz,
        -s.jy * bx,
    ]
}

fn add_scaled(y: &[f64; 5], k: &[[f64; 5]; 7], coeff: &[f64], h: f64) -> [f64; 5] {
    let mut out = *y;
    for (c, kk) in coeff.iter().zip(k.iter()) {
        if *c != 0.0 {
            for i in 0..5 {
                out[i] += h * c * kk[i];
            }
        }
    }
    out
}

fn to_state(y: &[f64; 5]) -> ClassicalState {
    ClassicalState { q: y[0], p: y[1], jx: y[2], jy: y[3], jz: y[4] }
}

// Dormand-Prince 5(4) tableau
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] =
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B5: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

// Per-step tolerance. Kept well below the 1e-10 trajectory target so that
// phase error accumulated over ~1e3 time units stays under 1e-8.
const REL_TOL: f64 = 1e-13;

struct Stepper<'a> {
    params: &'a ModelParams,
    h: f64,
}

impl<'a> Stepper<'a> {
    fn new(params: &'a ModelParams) -> Self {
        Self { params, h: 1e-3 / params.omega.max(params.omega0) }
    }

    /// One accepted adaptive step from (t, y), not exceeding t_max.
    fn step(&mut self, t: f64, y: &[f64; 5], t_max: f64) -> (f64, [f64; 5]) {
        let mut h = self.h.min(t_max - t).max(1e-14);
        loop {
            let mut k = [[0.0; 5]; 7];
            k[0] = eom_rhs(&to_state(y), self.params);
            k[1] = eom_rhs(&to_state(&add_scaled(y, &k, &A2, h)), self.params);
            k[2] = eom_rhs(&to_state(&add_scaled(y, &k, &A3, h)), self.params);
            k[3] = eom_rhs(&to_state(&add_scaled(y, &k, &A4, h)), self.params);
            k[4] = eom_rhs(&to_state(&add_scaled(y, &k, &A5, h)), self.params);
            k[5] = eom_rhs(&to_state(&add_scaled(y, &k, &A6, h)), self.params);
            let y5 = add_scaled(y, &k, &B5, h);
            k[6] = eom_rhs(&to_state(&y5), self.params);
            let y4 = add_scaled(y, &k, &B4, h);
            let mut err: f64 = 0.0;
            for i in 0..5 {
                let scale = REL_TOL * (y[i].abs().max(y5[i].abs()) + self.params.j);
                err = err.max((y5[i] - y4[i]).abs() / scale);
            }
            if err <= 1.0 {
                let grow = (0.9 * err.max(1e-10).powf(-0.2)).min(5.0);
                self.h = (h * grow).min(1.0 / self.params.omega.min(self.params.omega0));
                return (t + h, y5);
            }
            h *= (0.9 * err.powf(-0.2)).max(0.1);
        }
    }
}

/// Integrate from `initial` over [0, t_end] with dense output every
/// `dt_out`. The spin is renormalized to |j| = j at each output point.
pub fn integrate(
    initial: &ClassicalState,
    params: &ModelParams,
    t_end: f64,
    dt_out: f64,
) -> Trajectory {
    let n_out = (t_end / dt_out).round() as usize;
    let e0 = hamiltonian(initial, params);
    let e_scale = e0.abs().max(params.omega0 * params.j);
    let mut y = [initial.q, initial.p, initial.jx, initial.jy, initial.jz];
    let mut times = Vec::with_capacity(n_out + 1);
    let mut states = Vec::with_capacity(n_out + 1);
    times.push(0.0);
    states.push(*initial);
    let mut energy_drift: f64 = 0.0;
    let mut spin_drift: f64 = 0.0;
    let mut stepper = Stepper::new(params);
    let mut t = 0.0;
    for k in 1..=n_out {
        let t_target = k as f64 * dt_out;
        while t < t_target - 1e-12 * t_target.max(1.0) {
            let (tn, yn) = stepper.step(t, &y, t_target);
            t = tn;
            y = yn;
        }
        let norm = (y[2] * y[2] + y[3] * y[3] + y[4] * y[4]).sqrt();
        spin_drift = spin_drift.max((norm / params.j - 1.0).abs());
        if norm > 0.0 {
            let fix = params.j / norm;
            y[2] *= fix;
            y[3] *= fix;
            y[4] *= fix;
        }
        let s = to_state(&y);
        energy_drift = energy_drift.max((hamiltonian(&s, params) - e0).abs() / e_scale);
        times.push(t_target);
        states.push(s);
    }
    let valid = energy_drift <= 1e-6;
    Trajectory { times, states, energy_drift, spin_drift, valid }
}

/// Projection of the spin on the local precession axis:
/// j_z' = (w0 jz + (2 gamma q/sqrt j) jx) / w_P(q).
pub fn jzprime_classical(s: &ClassicalState, params: &ModelParams) -> f64 {
    let c = 2.0 * params.gamma * s.q / params.j.sqrt();
    (params.omega0 * s.jz + c * s.jx) / omega_p(s.q, params)
}

/// Temporal standard deviation of j_z'(t)/j over the trajectory,
/// computed by trapezoid rule on the dense output.
pub fn temporal_variance_jzprime(
    traj: &Trajectory,
    params: &ModelParams,
) -> Result<f64, ClassicalError> {
    if !traj.valid || traj.times.len() < 2 {
        return Err(ClassicalError::InvalidTrajectory);
    }
    let total = traj.times.last().unwrap() - traj.times[0];
    // Center on the initial value to avoid cancellation when the signal
    // barely varies.
    let x0 = jzprime_classical(&traj.states[0], params);
    let mut mean = 0.0;
    let mut mean_sq = 0.0;
    for w in 0..traj.times.len() - 1 {
        let dt = traj.times[w + 1] - traj.times[w];
        let a = jzprime_classical(&traj.states[w], params) - x0;
        let b = jzprime_classical(&traj.states[w + 1], params) - x0;
        mean += 0.5 * (a + b) * dt;
        mean_sq += 0.5 * (a * a + b * b) * dt;
    }
    mean /= total;
    mean_sq /= total;
    Ok((mean_sq - mean * mean).max(0.0).sqrt() / params.j)
}

/// Poincare section on the surface p = 0 with crossing direction
/// dp/dt > 0, collected from trajectories started at `initials` on the
/// energy shell E.
pub fn poincare_section(
    initials: &[ClassicalState],
    params: &ModelParams,
    e: f64,
    t_end: f64,
) -> Result<PoincareSection, ClassicalError> {
    let mut points = Vec::new();
    for (id, init) in initials.iter().enumerate() {
        if (hamiltonian(init, params) - e).abs() > 1e-10 * e.abs().max(1.0) {
            return Err(ClassicalError::OffShell);
        }
        let dt_out = 0.02 / params.omega.max(params.omega0);
        let traj = integrate(init, params, t_end, dt_out);
        for w in 0..traj.states.len() - 1 {
            let (s0, s1) = (traj.states[w], traj.states[w + 1]);
            if s0.p < 0.0 && s1.p >= 0.0 {
                if let Some(s) = refine_crossing(&s0, params, dt_out) {
                    points.push(SectionPoint {
                        phi: s.jy.atan2(s.jx),
                        jz_over_j: s.jz / params.j,
                        traj_id: id,
                    });
                }
            }
        }
    }
    Ok(PoincareSection { points })
}

/// Secant iteration in time for the p = 0 crossing inside one output step.
fn refine_crossing(
    s0: &ClassicalState,
    params: &ModelParams,
    dt: f64,
) -> Option<ClassicalState> {
    let eval = |tau: f64| -> ClassicalState {
        if tau <= 0.0 {
            return *s0;
        }
        let traj = integrate(s0, params, tau, tau);
        *traj.states.last().unwrap()
    };
    let mut t0 = 0.0;
    let mut t1 = dt;
    let mut p0 = s0.p;
    let mut s1 = eval(t1);
    let mut p1 = s1.p;
    for _ in 0..60 {
        if p1.abs() <= 1e-8 {
            return Some(s1);
        }
        let denom = p1 - p0;
        let mut tn = if denom.abs() > 1e-300 { t1 - p1 * (t1 - t0) / denom } else { 0.5 * (t0 + t1) };
        if !tn.is_finite() || tn < 0.0 || tn > dt {
            tn = 0.5 * (t0 + t1);
        }
        let sn = eval(tn);
        t0 = t1;
        p0 = p1;
        t1 = tn;
        s1 = sn;
        p1 = s1.p;
    }
    None
}

/// Initial condition at the head of band m': the spin is tilted by the
/// local precession angle beta(q_min) so that j_z' = m', with the
/// transverse component placed at phase zero in the rotated frame.
pub fn band_head_initials(
    m_prime: f64,
    params: &ModelParams,
) -> Result<ClassicalState, ClassicalError> {
    if m_prime.abs() > params.j + 1e-12 {
        return Err(ClassicalError::OutOfRange);
    }
    let band = band_minimum(m_prime, params)?;
    let q = band.q_min;
    let wp = omega_p(q, params);
    let sin_b = (2.0 * params.gamma * q / params.j.sqrt()) / wp;
    let cos_b = params.omega0 / wp;
    let t = (params.j * params.j - m_prime * m_prime).max(0.0).sqrt();
    Ok(ClassicalState {
        q,
        p: 0.0,
        jx: m_prime * sin_b + t * cos_b,
        jy: 0.0,
        jz: m_prime * cos_b - t * sin_b,
    })
}
