//! Cross-correlation and cross-spectral phase, the synchrony yardsticks.
//!
//! Sign convention: the cross-spectrum is S_xy(f) = X(f) * conj(Y(f)), so a
//! pair y lagging x by 60 degrees reports +60 at the tone bin. Swapping the
//! arguments negates every phase.

use crate::error::{CoreError, Result};
use crate::signal::spectrum::dft_detrended;
use crate::signal::wrap_deg;
use crate::timeseries::TimeSeries;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

/// One-sided cross-spectral density of two traces on a shared grid.
#[derive(Debug, Clone)]
pub struct CrossSpectrum {
    /// Bin center frequencies, Hz.
    pub frequencies: Vec<f64>,
    /// Raw cross-periodogram values X * conj(Y).
    pub values: Vec<Complex64>,
    /// Argument of each value in degrees, wrapped to (-180, 180].
    pub phase_deg: Vec<f64>,
}

impl CrossSpectrum {
    pub fn nearest_bin(&self, f: f64) -> usize {
        if self.frequencies.len() < 2 {
            return 0;
        }
        let df = self.frequencies[1] - self.frequencies[0];
        ((f / df).round().max(0.0) as usize).min(self.frequencies.len() - 1)
    }

    pub fn phase_at(&self, f: f64) -> f64 {
        self.phase_deg[self.nearest_bin(f)]
    }
}

/// Linear cross-correlation R_xy(tau) = sum_t x[t - tau] * y[t] * dt over the
/// valid overlap, lags -(N-1)..=(N-1). Means are removed first; the result is
/// a TimeSeries over lag with t0 = -(N-1) dt.
pub fn cross_correlation(x: &TimeSeries, y: &TimeSeries) -> Result<TimeSeries> {
    x.check_same_grid(y)?;
    let n = x.len();
    if n < 2 {
        return Err(CoreError::Analysis("need at least 2 samples".into()));
    }
    // FFT of both, zero padded past 2N-1 so the circular product is linear.
    let m = (2 * n).next_power_of_two();
    let mean_x = x.mean();
    let mean_y = y.mean();
    let mut fx: Vec<Complex64> = Vec::with_capacity(m);
    let mut fy: Vec<Complex64> = Vec::with_capacity(m);
    fx.extend(x.values.iter().map(|&v| Complex64::new(v - mean_x, 0.0)));
    fy.extend(y.values.iter().map(|&v| Complex64::new(v - mean_y, 0.0)));
    fx.resize(m, Complex64::new(0.0, 0.0));
    fy.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(m);
    fwd.process(&mut fx);
    fwd.process(&mut fy);
    // IFFT(conj(X) Y)[tau] = sum_t x[t - tau] y[t] for tau >= 0, with
    // negative lags wrapped to the top of the buffer.
    let mut prod: Vec<Complex64> = fx
        .iter()
        .zip(&fy)
        .map(|(a, b)| a.conj() * b / m as f64)
        .collect();
    planner.plan_fft_inverse(m).process(&mut prod);
    let mut out = Vec::with_capacity(2 * n - 1);
    for lag in -(n as i64 - 1)..=(n as i64 - 1) {
        let idx = lag.rem_euclid(m as i64) as usize;
        out.push(prod[idx].re * x.dt);
    }
    let mut ts = TimeSeries::new(-(x.dt * (n as f64 - 1.0)), x.dt, out)?;
    ts.label = format!("xcorr({},{})", x.label, y.label);
    Ok(ts)
}

/// Cross-periodogram of two traces: one FFT each (mean removed, rectangular
/// window, no segment averaging) multiplied bin by bin.
pub fn cross_spectrum(x: &TimeSeries, y: &TimeSeries) -> Result<CrossSpectrum> {
    x.check_same_grid(y)?;
    let n = x.len();
    if n < 4 {
        return Err(CoreError::Analysis("need at least 4 samples".into()));
    }
    let fx = dft_detrended(x);
    let fy = dft_detrended(y);
    let df = 1.0 / (x.dt * n as f64);
    let half = n / 2 + 1;
    let mut frequencies = Vec::with_capacity(half);
    let mut values = Vec::with_capacity(half);
    let mut phase_deg = Vec::with_capacity(half);
    for k in 0..half {
        let s = fx[k] * fy[k].conj();
        frequencies.push(df * k as f64);
        phase_deg.push(wrap_deg(s.arg().to_degrees()));
        values.push(s);
    }
    Ok(CrossSpectrum {
        frequencies,
        values,
        phase_deg,
    })
}

/// How per-run phases are averaged into one number per bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseStatistic {
    /// Mean of |phase| per run. Synchronized bins read near 0, unrelated
    /// bins near 90. The default presentation.
    MeanAbs,
    /// Magnitude of the circular mean angle, robust to wraparound.
    Circular,
}

impl PhaseStatistic {
    fn combine(self, phases_deg: &[f64]) -> f64 {
        match self {
            PhaseStatistic::MeanAbs => {
                phases_deg.iter().map(|p| p.abs()).sum::<f64>() / phases_deg.len() as f64
            }
            PhaseStatistic::Circular => {
                let (mut s, mut c) = (0.0, 0.0);
                for p in phases_deg {
                    let r = p.to_radians();
                    s += r.sin();
                    c += r.cos();
                }
                wrap_deg(s.atan2(c).to_degrees()).abs()
            }
        }
    }
}

/// Ensemble phase summary across repeated stochastic runs of a pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsemblePhase {
    /// Center of the bin actually read (nearest to the requested target).
    pub target_frequency_hz: f64,
    /// Combined phase statistic at the target bin, degrees.
    pub value_at_target_deg: f64,
    /// Per-run phase at the target bin, degrees.
    pub per_run_deg: Vec<f64>,
    /// Bin centers of the averaged curve.
    pub frequencies: Vec<f64>,
    /// Combined phase statistic per bin, degrees.
    pub curve_deg: Vec<f64>,
}

/// Averages cross-spectral phase over an ensemble of runs of the same pair.
///
/// All runs must share the sampling grid; the target must lie within the
/// Nyquist range. A synchronized ensemble shows a sharp dip at the injection
/// frequency against a ~90 degree background.
pub fn ensemble_phase(
    pairs: &[(TimeSeries, TimeSeries)],
    f_target: f64,
    statistic: PhaseStatistic,
) -> Result<EnsemblePhase> {
    if pairs.len() < 2 {
        return Err(CoreError::Analysis(format!(
            "ensemble needs at least 2 runs, got {}",
            pairs.len()
        )));
    }
    let grid = &pairs[0].0;
    let nyquist = 0.5 / grid.dt;
    if !(0.0..=nyquist).contains(&f_target) {
        return Err(CoreError::invalid(
            "f_target",
            format!("{f_target} Hz outside [0, {nyquist}] Hz"),
        ));
    }
    let mut per_bin: Vec<Vec<f64>> = Vec::new();
    let mut frequencies = Vec::new();
    let mut per_run = Vec::with_capacity(pairs.len());
    let mut target_bin = 0;
    for (i, (x, y)) in pairs.iter().enumerate() {
        grid.check_same_grid(x)?;
        grid.check_same_grid(y)?;
        let cs = cross_spectrum(x, y)?;
        if i == 0 {
            frequencies = cs.frequencies.clone();
            per_bin = vec![Vec::with_capacity(pairs.len()); cs.phase_deg.len()];
            target_bin = cs.nearest_bin(f_target);
        }
        for (bin, &p) in cs.phase_deg.iter().enumerate() {
            per_bin[bin].push(p);
        }
        per_run.push(cs.phase_deg[target_bin]);
    }
    let curve_deg: Vec<f64> = per_bin.iter().map(|ps| statistic.combine(ps)).collect();
    Ok(EnsemblePhase {
        target_frequency_hz: frequencies[target_bin],
        value_at_target_deg: curve_deg[target_bin],
        per_run_deg: per_run,
        frequencies,
        curve_deg,
    })
}
