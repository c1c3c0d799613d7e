//! Bracketed scalar root finding (bisection with secant acceleration).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("endpoints do not bracket a root")]
    NoBracket,
}

/// Find a root of `f` in [lo, hi] with |dx| <= tol. The bracket must
/// satisfy f(lo) * f(hi) <= 0.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(RootError::NoBracket);
    }
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        // secant candidate, clamped into the open bracket
        let mut x = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = mid;
        }
        // keep the step from stagnating near an endpoint
        let min_step = 0.01 * (b - a).abs();
        if (x - a).abs() < min_step || (x - b).abs() < min_step {
            x = mid;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    Ok(0.5 * (a + b))
}
