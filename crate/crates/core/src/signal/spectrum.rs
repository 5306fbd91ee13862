//! One-sided discrete spectrum and peak-frequency estimation.

use crate::error::{CoreError, Result};
use crate::timeseries::TimeSeries;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// One-sided DFT of a real trace: bin k holds the raw (unnormalized) DFT
/// coefficient at frequency `f0 + k * df`, k = 0..=N/2.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub f0: f64,
    pub df: f64,
    pub bins: Vec<Complex64>,
}

/// Full complex DFT used by both the one-sided spectrum and the
/// cross-spectrum. Mean is removed first: the traces carry a large DC
/// operating point that is never the quantity of interest.
pub(crate) fn dft_detrended(ts: &TimeSeries) -> Vec<Complex64> {
    let mean = ts.mean();
    let mut buf: Vec<Complex64> = ts
        .values
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

impl Spectrum {
    /// Spectrum of `ts` with mean removal; resolution df = 1/(N dt).
    pub fn from_series(ts: &TimeSeries) -> Result<Spectrum> {
        if ts.len() < 4 {
            return Err(CoreError::Analysis(format!(
                "trace of {} samples is too short for spectral analysis",
                ts.len()
            )));
        }
        let full = dft_detrended(ts);
        let half = full.len() / 2 + 1;
        Ok(Spectrum {
            f0: 0.0,
            df: 1.0 / (ts.dt * ts.len() as f64),
            bins: full.into_iter().take(half).collect(),
        })
    }

    pub fn frequency_at(&self, bin: usize) -> f64 {
        self.f0 + self.df * bin as f64
    }

    /// Index of the bin nearest `f`, clamped to the valid range.
    pub fn nearest_bin(&self, f: f64) -> usize {
        (((f - self.f0) / self.df).round().max(0.0) as usize).min(self.bins.len() - 1)
    }
}

/// Frequency of the strongest non-DC component.
///
/// Takes the max-power bin (DC excluded) and refines it by fitting a
/// parabola through the log magnitudes of the three bins around the peak,
/// giving a sub-bin estimate. Errors when the peak does not stand out:
/// max power below 10x the median bin power reads as no oscillation.
pub fn dominant_frequency(s: &Spectrum) -> Result<f64> {
    if s.bins.len() < 4 {
        return Err(CoreError::Analysis("spectrum has too few bins".into()));
    }
    let power: Vec<f64> = s.bins.iter().map(|c| c.norm_sqr()).collect();
    let (mut k_max, mut p_max) = (1, power[1]);
    for (k, &p) in power.iter().enumerate().skip(2) {
        if p > p_max {
            k_max = k;
            p_max = p;
        }
    }
    let mut sorted: Vec<f64> = power[1..].to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = sorted[sorted.len() / 2];
    // A flat (for example constant-trace) spectrum has no peak at all.
    if p_max <= 0.0 || p_max < 10.0 * median {
        return Err(CoreError::Analysis(format!(
            "no dominant peak: max power {p_max:.3e} vs median {median:.3e}"
        )));
    }
    // Log-magnitude parabolic refinement; only valid with two neighbors.
    let delta = if k_max > 0 && k_max + 1 < power.len() {
        let (a, b, c) = (
            power[k_max - 1].max(f64::MIN_POSITIVE).ln(),
            power[k_max].max(f64::MIN_POSITIVE).ln(),
            power[k_max + 1].max(f64::MIN_POSITIVE).ln(),
        );
        let denom = a - 2.0 * b + c;
        if denom.abs() > 0.0 {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    } else {
        0.0
    };
    Ok(s.f0 + s.df * (k_max as f64 + delta))
}
