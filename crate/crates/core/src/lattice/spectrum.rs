//! Frequency estimation: Hann window, 8× zero padding, FFT peak refined by a
//! parabola through the log-power of the three top bins.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

/// Minimum number of periods of the dominant frequency in the record.
pub const MIN_PERIODS: f64 = 32.0;
const PADDING: usize = 8;

/// Dominant angular frequency with the powers of its first harmonics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapMeasurement {
    pub omega: f64,
    pub periods: f64,
    /// Windowed power at `j·ω` for `j = 1..=6`.
    pub harmonic_power: Vec<f64>,
}

impl GapMeasurement {
    /// Largest even-harmonic power relative to the fundamental.
    pub fn even_ratio(&self) -> f64 {
        let p1 = self.harmonic_power[0];
        self.harmonic_power.iter().skip(1).step_by(2).fold(0.0f64, |m, p| m.max(p / p1))
    }

    /// Odd-harmonic powers strictly decrease: `P(ω) > P(3ω) > P(5ω)`.
    pub fn odd_powers_decreasing(&self) -> bool {
        let odd: Vec<f64> = self.harmonic_power.iter().step_by(2).copied().collect();
        odd.windows(2).all(|w| w[0] > w[1])
    }
}

fn hann(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()).collect()
}

fn demeaned(series: &TimeSeries) -> Vec<f64> {
    let v = series.values();
    let mean = v.iter().copied().collect::<CompensatedSum>().value() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

/// Windowed power `|Σ wₙ xₙ e^{−iωnΔt}|²` of the de-meaned series at `omega`.
pub fn power_at(series: &TimeSeries, omega: f64) -> f64 {
    let x = demeaned(series);
    let w = hann(x.len());
    let dt = series.sample_dt();
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for (i, (xi, wi)) in x.iter().zip(&w).enumerate() {
        let (s, c) = (omega * dt * i as f64).sin_cos();
        re.add(wi * xi * c);
        im.add(-wi * xi * s);
    }
    re.value().powi(2) + im.value().powi(2)
}

/// Dominant angular frequency of the series (the mass gap for a rest-frame
/// oscillation record).
pub fn measure_mass_gap(series: &TimeSeries) -> Result<GapMeasurement> {
    let n = series.len();
    if n < 16 {
        return Err(Error::SeriesTooShort { periods: 0.0, required: MIN_PERIODS });
    }
    let x = demeaned(series);
    let w = hann(n);
    let m = (PADDING * n).next_power_of_two();
    let mut buf: Vec<Complex64> = x.iter().zip(&w).map(|(a, b)| Complex64::new(a * b, 0.0)).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let power: Vec<f64> = buf[..m / 2].iter().map(|c| c.norm_sqr()).collect();

    // skip the window's DC lobe
    let start = 2 * m / n + 1;
    let k = (start..power.len() - 1)
        .max_by(|&a, &b| power[a].total_cmp(&power[b]))
        .ok_or_else(|| Error::Numeric("spectrum has no interior bins".into()))?;
    if power[k] == 0.0 {
        return Err(Error::Numeric("series has no oscillating component".into()));
    }
    let (a, b, c) = (power[k - 1].ln(), power[k].ln(), power[k + 1].ln());
    let denom = a - 2.0 * b + c;
    let delta = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    let omega = 2.0 * PI * (k as f64 + delta) / (m as f64 * series.sample_dt());

    let periods = series.duration() * omega / (2.0 * PI);
    if periods < MIN_PERIODS {
        return Err(Error::SeriesTooShort { periods, required: MIN_PERIODS });
    }
    let harmonic_power = (1..=6).map(|j| power_at(series, j as f64 * omega)).collect();
    Ok(GapMeasurement { omega, periods, harmonic_power })
}
