//! Uniformly sampled scalar time series.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// A scalar signal on a uniform time grid: `values[i]` is the sample at
/// `t0 + i * dt` seconds. Carries a free-form label naming the quantity
/// ("mr_ohms", "hm_current_a", ...).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t0: f64,
    pub dt: f64,
    pub values: Vec<f64>,
    pub label: String,
}

impl TimeSeries {
    /// Validates the grid: positive dt, at least two samples, all finite.
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(CoreError::invalid("dt", format!("must be positive, got {dt}")));
        }
        if values.len() < 2 {
            return Err(CoreError::invalid(
                "values",
                format!("need at least 2 samples, got {}", values.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CoreError::invalid(
                "values",
                format!("non-finite sample at index {i}"),
            ));
        }
        Ok(TimeSeries {
            t0,
            dt,
            values,
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sampling rate in Hz.
    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    /// Total spanned time in seconds (N samples span N*dt).
    pub fn duration(&self) -> f64 {
        self.dt * self.values.len() as f64
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Returns a copy with the mean subtracted.
    pub fn detrended(&self) -> TimeSeries {
        let m = self.mean();
        TimeSeries {
            t0: self.t0,
            dt: self.dt,
            values: self.values.iter().map(|v| v - m).collect(),
            label: self.label.clone(),
        }
    }

    /// Keeps samples from time `from` (inclusive, relative to t0) onward.
    pub fn tail_from(&self, from: f64) -> Result<TimeSeries> {
        let start = ((from / self.dt).ceil() as usize).min(self.values.len());
        if self.values.len() - start < 2 {
            return Err(CoreError::Analysis(format!(
                "tail from {from} s leaves fewer than 2 of {} samples",
                self.values.len()
            )));
        }
        Ok(TimeSeries {
            t0: self.t0 + start as f64 * self.dt,
            dt: self.dt,
            values: self.values[start..].to_vec(),
            label: self.label.clone(),
        })
    }

    /// Subtracts a trailing moving average of width `window` samples from each
    /// point, leaving only content faster than the window. The first `window`
    /// samples use the average of what is available so far.
    ///
    /// This is the software stand-in for a bias tee: with `window` equal to
    /// one oscillation period the DC operating point is stripped and the RF
    /// component survives.
    pub fn high_passed(&self, window: usize) -> Result<TimeSeries> {
        if window == 0 {
            return Err(CoreError::invalid("window", "must be at least 1 sample"));
        }
        let mut out = Vec::with_capacity(self.values.len());
        let mut running = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            running += v;
            if i >= window {
                running -= self.values[i - window];
            }
            let n = window.min(i + 1) as f64;
            out.push(v - running / n);
        }
        let mut ts = TimeSeries::new(self.t0, self.dt, out)?;
        ts.label = self.label.clone();
        Ok(ts)
    }

    /// Checks that `other` shares this grid (dt and length), as required by
    /// every pairwise analysis op.
    pub fn check_same_grid(&self, other: &TimeSeries) -> Result<()> {
        if self.len() != other.len() {
            return Err(CoreError::Mismatch(format!(
                "lengths differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let tol = 1e-12 * self.dt.max(other.dt);
        if (self.dt - other.dt).abs() > tol {
            return Err(CoreError::Mismatch(format!(
                "sample intervals differ: {} vs {}",
                self.dt, other.dt
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeSeries::new(0.0, 0.0, vec![0.0, 1.0]).is_err());
        assert!(TimeSeries::new(0.0, -1e-12, vec![0.0, 1.0]).is_err());
        assert!(TimeSeries::new(0.0, 1e-12, vec![0.0]).is_err());
        assert!(TimeSeries::new(0.0, 1e-12, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn detrend_zeroes_mean() {
        let ts = TimeSeries::new(0.0, 1e-12, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let d = ts.detrended();
        assert_relative_eq!(d.mean(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(d.values[0], -1.5);
    }

    #[test]
    fn tail_keeps_grid_alignment() {
        let ts = TimeSeries::new(0.0, 0.5, vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let tail = ts.tail_from(1.2).unwrap();
        assert_eq!(tail.values, vec![3.0, 4.0]);
        assert_relative_eq!(tail.t0, 1.5);
    }

    #[test]
    fn high_pass_removes_constant_offset() {
        // Offset sinusoid: after the warmup the offset is gone and the
        // oscillation amplitude survives to within the window ripple.
        let n = 2048;
        let dt = 1e-12;
        let period = 100; // samples
        let vals: Vec<f64> = (0..n)
            .map(|i| 5.0 + (2.0 * std::f64::consts::PI * i as f64 / period as f64).sin())
            .collect();
        let ts = TimeSeries::new(0.0, dt, vals).unwrap();
        let hp = ts.high_passed(period).unwrap();
        // Tail spans whole periods so the sinusoid itself averages out.
        let tail = &hp.values[period * 2..period * 2 + 18 * period];
        let mean: f64 = tail.iter().sum::<f64>() / tail.len() as f64;
        let max = tail.iter().cloned().fold(f64::MIN, f64::max);
        assert!(mean.abs() < 1e-3, "residual offset {mean}");
        assert!((max - 1.0).abs() < 0.05, "peak {max}");
    }

    #[test]
    fn grid_check_catches_mismatch() {
        let a = TimeSeries::new(0.0, 1e-12, vec![0.0; 8]).unwrap();
        let b = TimeSeries::new(0.0, 2e-12, vec![0.0; 8]).unwrap();
        let c = TimeSeries::new(0.0, 1e-12, vec![0.0; 9]).unwrap();
        assert!(a.check_same_grid(&b).is_err());
        assert!(a.check_same_grid(&c).is_err());
        assert!(a.check_same_grid(&a.clone()).is_ok());
    }
}
