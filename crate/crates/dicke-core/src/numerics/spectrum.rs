//! Principal-frequency extraction from uniformly sampled signals.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

const MIN_SAMPLES: usize = 1 << 12;
const ZERO_PAD_FACTOR: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample spacing must be positive")]
    InvalidSpacing,
}

/// One spectral peak: frequency in cycles per unit time and linear amplitude.
#[derive(Debug, Clone, Copy)]
pub struct SpectralPeak {
    pub frequency: f64,
    pub amplitude: f64,
}

/// Dominant frequencies of a real signal sampled at spacing `dt`.
///
/// Applies a Hann window, zero-pads by a fixed factor, and refines each
/// local spectral maximum by parabolic interpolation of log amplitude.
/// Peaks are returned sorted by amplitude, strongest first, at most
/// `max_peaks` of them. The DC bin is excluded.
pub fn principal_frequency(
    samples: &[f64],
    dt: f64,
    max_peaks: usize,
) -> Result<Vec<SpectralPeak>, SpectrumError> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(SpectrumError::TooFewSamples(n));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(SpectrumError::InvalidSpacing);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;

    let m = (n * ZERO_PAD_FACTOR).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (i, &x) in samples.iter().enumerate() {
        let w = 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos());
        buf[i] = Complex64::new((x - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let half = m / 2;
    let amp: Vec<f64> = buf[..half].iter().map(|c| c.norm()).collect();
    let df = 1.0 / (m as f64 * dt);

    // local maxima, skipping the DC neighborhood
    let mut peaks: Vec<SpectralPeak> = Vec::new();
    for k in 1..half - 1 {
        if amp[k] > amp[k - 1] && amp[k] >= amp[k + 1] && amp[k] > 0.0 {
            let (a, b, c) = (amp[k - 1].max(1e-300), amp[k], amp[k + 1].max(1e-300));
            let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
            let denom = la - 2.0 * lb + lc;
            let delta = if denom.abs() > 1e-30 {
                (0.5 * (la - lc) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            };
            let freq = (k as f64 + delta) * df;
            let peak_amp = (lb - 0.25 * (la - lc) * delta).exp();
            peaks.push(SpectralPeak { frequency: freq, amplitude: peak_amp });
        }
    }
    peaks.sort_by(|p, q| q.amplitude.total_cmp(&p.amplitude));
    peaks.truncate(max_peaks);
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_tone() {
        let n = 8192;
        let dt = 0.01;
        let f0 = 0.3;
        let x: Vec<f64> = (0..n).map(|i| (2.0 * PI * f0 * i as f64 * dt).cos()).collect();
        let peaks = principal_frequency(&x, dt, 3).unwrap();
        assert!((peaks[0].frequency - f0).abs() < 1e-4, "got {}", peaks[0].frequency);
    }

    #[test]
    fn two_tones_ordered_by_amplitude() {
        let n = 8192;
        let dt = 0.02;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                2.0 * (2.0 * PI * 1.1 * t).cos() + 0.7 * (2.0 * PI * 3.7 * t).sin()
            })
            .collect();
        let peaks = principal_frequency(&x, dt, 2).unwrap();
        assert!((peaks[0].frequency - 1.1).abs() < 1e-3);
        assert!((peaks[1].frequency - 3.7).abs() < 1e-3);
        assert!(peaks[0].amplitude > peaks[1].amplitude);
    }

    #[test]
    fn time_scaling() {
        let n = 4096;
        let f0 = 0.25;
        for dt in [0.05, 0.1] {
            let x: Vec<f64> = (0..n).map(|i| (2.0 * PI * f0 * i as f64 * dt).cos()).collect();
            let peaks = principal_frequency(&x, dt, 1).unwrap();
            assert!((peaks[0].frequency - f0).abs() < 5e-4);
        }
    }

    #[test]
    fn rejects_short_signals() {
        let x = vec![0.0; 100];
        assert!(matches!(
            principal_frequency(&x, 0.1, 1),
            Err(SpectrumError::TooFewSamples(100))
        ));
    }
}
