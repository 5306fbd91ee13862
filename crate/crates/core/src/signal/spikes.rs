//! Spike extraction from magnetoresistance traces.

use crate::error::{CoreError, Result};
use crate::timeseries::TimeSeries;
use serde::{Deserialize, Serialize};

/// Times of threshold crossings, strictly increasing, in absolute seconds of
/// the source trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpikeTrain {
    pub times: Vec<f64>,
    pub label: String,
}

impl SpikeTrain {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Latest spike at or before `t`, if any.
    pub fn last_at_or_before(&self, t: f64) -> Option<f64> {
        match self.times.partition_point(|&s| s <= t) {
            0 => None,
            i => Some(self.times[i - 1]),
        }
    }
}

/// Marks a spike at each upward crossing of `threshold`, with crossings
/// inside the refractory window after an accepted spike suppressed so noise
/// chatter around the threshold does not double-count. Crossing instants are
/// linearly interpolated between samples.
pub fn extract_spikes(mr: &TimeSeries, threshold: f64, refractory: f64) -> Result<SpikeTrain> {
    if mr.len() < 2 {
        return Err(CoreError::Analysis("trace too short for spikes".into()));
    }
    if refractory < 0.0 || !refractory.is_finite() {
        return Err(CoreError::invalid(
            "refractory",
            format!("must be finite and >= 0, got {refractory}"),
        ));
    }
    let mut times = Vec::new();
    let mut last: f64 = f64::NEG_INFINITY;
    for i in 1..mr.len() {
        let (a, b) = (mr.values[i - 1], mr.values[i]);
        if a < threshold && b >= threshold {
            let frac = (threshold - a) / (b - a);
            let t = mr.time_at(i - 1) + frac * mr.dt;
            if t - last >= refractory {
                times.push(t);
                last = t;
            }
        }
    }
    Ok(SpikeTrain {
        times,
        label: mr.label.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::NoiseStream;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    fn mr_tone(f: f64, n: usize, dt: f64) -> TimeSeries {
        let v: Vec<f64> = (0..n).map(|i| 2000.0 + 500.0 * (TAU * f * i as f64 * dt).sin()).collect();
        TimeSeries::new(0.0, dt, v).unwrap()
    }

    #[test]
    fn sinusoid_spike_count_matches_period_count() {
        // 7.05 GHz for 10 ns is 70.5 periods: 70 or 71 upward crossings.
        let f = 7.05e9;
        let dt = 1e-12;
        let mr = mr_tone(f, 10_000, dt);
        let period = 1.0 / f;
        let train = extract_spikes(&mr, 2000.0, 0.25 * period).unwrap();
        assert!(
            train.len() == 70 || train.len() == 71,
            "got {} spikes",
            train.len()
        );
        // Uniform spacing within 2%.
        for w in train.times.windows(2) {
            let gap = w[1] - w[0];
            assert!((gap - period).abs() < 0.02 * period, "gap {gap}");
        }
    }

    #[test]
    fn constant_trace_has_no_spikes() {
        let mr = TimeSeries::new(0.0, 1e-12, vec![2000.0; 100]).unwrap();
        assert!(extract_spikes(&mr, 2000.0, 0.0).unwrap().is_empty());
    }

    #[test]
    fn noise_chatter_is_suppressed_by_refractory() {
        // 1% amplitude noise: same count as the clean trace within one.
        let f = 5.0e9;
        let dt = 1e-12;
        let n = 10_000;
        let clean = mr_tone(f, n, dt);
        let mut rng = NoiseStream::for_device(3, 0);
        let noisy_vals: Vec<f64> = clean
            .values
            .iter()
            .map(|&v| v + 5.0 * rng.standard_normal())
            .collect();
        let noisy = TimeSeries::new(0.0, dt, noisy_vals).unwrap();
        let period = 1.0 / f;
        let c = extract_spikes(&clean, 2000.0, 0.25 * period).unwrap().len() as i64;
        let d = extract_spikes(&noisy, 2000.0, 0.25 * period).unwrap().len() as i64;
        assert!((c - d).abs() <= 1, "clean {c} noisy {d}");
    }

    #[test]
    fn spike_times_strictly_increase_with_refractory_gaps() {
        let f = 6.0e9;
        let mr = mr_tone(f, 20_000, 1e-12);
        let refractory = 0.25 / f;
        let train = extract_spikes(&mr, 2100.0, refractory).unwrap();
        assert!(!train.is_empty());
        for w in train.times.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] >= refractory);
        }
        // All inside the trace window.
        assert!(train.times[0] >= 0.0);
        assert!(*train.times.last().unwrap() <= mr.duration());
    }

    #[test]
    fn lookup_of_preceding_spike() {
        let train = SpikeTrain {
            times: vec![1.0, 2.0, 3.0],
            label: String::new(),
        };
        assert_eq!(train.last_at_or_before(0.5), None);
        assert_eq!(train.last_at_or_before(2.0), Some(2.0));
        assert_eq!(train.last_at_or_before(2.7), Some(2.0));
        assert_eq!(train.last_at_or_before(9.0), Some(3.0));
    }
}
