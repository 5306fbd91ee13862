//! Charge-current drive flowing through the heavy-metal channel.

use crate::error::{CoreError, Result};
use crate::timeseries::TimeSeries;
use serde::{Deserialize, Serialize};

/// One sinusoidal component of the drive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AcComponent {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

/// DC bias plus sinusoidal components plus an optional sampled addend:
///
///   i(t) = i_dc + sum amp * sin(2 pi f t + phi) + addend(t)
///
/// The sampled addend covers drives that have no closed form (for example a
/// crossbar-coupled injection recorded from another simulation); it is
/// linearly interpolated and reads zero outside its span.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DriveSignal {
    pub i_dc: f64,
    pub ac_components: Vec<AcComponent>,
    pub sampled_addend: Option<TimeSeries>,
}

impl DriveSignal {
    pub fn dc(i_dc: f64) -> Self {
        DriveSignal {
            i_dc,
            ac_components: Vec::new(),
            sampled_addend: None,
        }
    }

    pub fn with_ac(mut self, amplitude: f64, frequency: f64, phase: f64) -> Self {
        self.ac_components.push(AcComponent {
            amplitude,
            frequency,
            phase,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.i_dc.is_finite() {
            return Err(CoreError::invalid("i_dc", "must be finite".to_string()));
        }
        for (i, c) in self.ac_components.iter().enumerate() {
            if !(c.amplitude.is_finite() && c.frequency.is_finite() && c.phase.is_finite()) {
                return Err(CoreError::invalid(
                    "ac_components",
                    format!("component {i} has non-finite fields"),
                ));
            }
            if c.frequency < 0.0 {
                return Err(CoreError::invalid(
                    "ac_components",
                    format!("component {i} has negative frequency {}", c.frequency),
                ));
            }
        }
        if let Some(ts) = &self.sampled_addend {
            if ts.len() < 2 {
                return Err(CoreError::invalid(
                    "sampled_addend",
                    format!("needs at least 2 samples, got {}", ts.len()),
                ));
            }
        }
        Ok(())
    }

    /// Net charge current at time `t`, amperes.
    #[inline]
    pub fn current_at(&self, t: f64) -> f64 {
        let mut i = self.i_dc;
        for c in &self.ac_components {
            i += c.amplitude * (2.0 * std::f64::consts::PI * c.frequency * t + c.phase).sin();
        }
        if let Some(ts) = &self.sampled_addend {
            i += sample_interpolated(ts, t);
        }
        i
    }
}

/// Linear interpolation into a sampled trace; zero outside its window.
fn sample_interpolated(ts: &TimeSeries, t: f64) -> f64 {
    let pos = (t - ts.t0) / ts.dt;
    if pos < 0.0 {
        return 0.0;
    }
    let i = pos.floor() as usize;
    if i + 1 >= ts.len() {
        return if pos <= (ts.len() - 1) as f64 {
            ts.values[ts.len() - 1]
        } else {
            0.0
        };
    }
    let frac = pos - i as f64;
    ts.values[i] * (1.0 - frac) + ts.values[i + 1] * frac
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dc_plus_sine_evaluation() {
        let d = DriveSignal::dc(1.0e-4).with_ac(5.0e-5, 1.0e9, 0.0);
        assert_relative_eq!(d.current_at(0.0), 1.0e-4);
        // Quarter period: sine at its crest.
        assert_relative_eq!(d.current_at(0.25e-9), 1.5e-4, max_relative = 1e-9);
    }

    #[test]
    fn phase_shifts_the_crest() {
        let d = DriveSignal::dc(0.0).with_ac(1.0, 1.0e9, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(d.current_at(0.0), 1.0);
    }

    #[test]
    fn addend_interpolates_and_vanishes_outside() {
        let ts = TimeSeries::new(1.0e-9, 1.0e-9, vec![2.0, 4.0, 6.0]).unwrap();
        let d = DriveSignal {
            i_dc: 0.0,
            ac_components: vec![],
            sampled_addend: Some(ts),
        };
        assert_eq!(d.current_at(0.5e-9), 0.0);
        assert_relative_eq!(d.current_at(1.5e-9), 3.0);
        assert_relative_eq!(d.current_at(3.0e-9), 6.0);
        assert_eq!(d.current_at(3.1e-9), 0.0);
    }

    #[test]
    fn validation_rejects_bad_components() {
        let mut d = DriveSignal::dc(f64::NAN);
        assert!(d.validate().is_err());
        d = DriveSignal::dc(0.0).with_ac(1.0, -1.0e9, 0.0);
        assert!(d.validate().is_err());
        d = DriveSignal::dc(0.0);
        d.sampled_addend = Some(TimeSeries::new(0.0, 1e-9, vec![1.0, 2.0]).unwrap());
        d.validate().unwrap();
    }
}
