//! RF current source driving a shared heavy-metal line.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Sinusoidal voltage source behind an effective series resistance, coupled
/// into one heavy-metal line:
///
///   i(t) = (amplitude / resistance) * sin(2 pi f t + phase)
///
/// This is the synchrony modulator of the network: every device on the line
/// sees the injected current on top of its DC bias. The reference source
/// (250 mV behind 1 kohm) injects a 250 uA peak.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AstrocyteInjector {
    /// Open-circuit amplitude, volts.
    pub amplitude_v: f64,
    pub frequency_hz: f64,
    pub phase_rad: f64,
    /// Effective source resistance seen by the line, ohms.
    pub source_resistance_ohms: f64,
}

impl AstrocyteInjector {
    pub fn new(amplitude_v: f64, frequency_hz: f64, phase_rad: f64) -> Self {
        AstrocyteInjector {
            amplitude_v,
            frequency_hz,
            phase_rad,
            source_resistance_ohms: 1.0e3,
        }
    }

    /// Reference source: 250 mV behind 1 kohm at the given carrier.
    pub fn reference(frequency_hz: f64, phase_rad: f64) -> Self {
        Self::new(0.25, frequency_hz, phase_rad)
    }

    /// A source that injects nothing (control runs).
    pub fn silent(frequency_hz: f64) -> Self {
        Self::new(0.0, frequency_hz, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude_v >= 0.0) || !self.amplitude_v.is_finite() {
            return Err(CoreError::invalid(
                "amplitude_v",
                format!("must be >= 0, got {}", self.amplitude_v),
            ));
        }
        if !(self.frequency_hz >= 0.0) || !self.frequency_hz.is_finite() {
            return Err(CoreError::invalid(
                "frequency_hz",
                format!("must be >= 0, got {}", self.frequency_hz),
            ));
        }
        if !(self.source_resistance_ohms > 0.0) || !self.source_resistance_ohms.is_finite() {
            return Err(CoreError::invalid(
                "source_resistance_ohms",
                format!("must be > 0, got {}", self.source_resistance_ohms),
            ));
        }
        if !self.phase_rad.is_finite() {
            return Err(CoreError::invalid("phase_rad", "must be finite".to_string()));
        }
        Ok(())
    }

    /// Peak injected current, amperes.
    #[inline]
    pub fn peak_current_a(&self) -> f64 {
        self.amplitude_v / self.source_resistance_ohms
    }

    /// Injected current at time `t` seconds.
    #[inline]
    pub fn current_at(&self, t: f64) -> f64 {
        self.peak_current_a()
            * (2.0 * std::f64::consts::PI * self.frequency_hz * t + self.phase_rad).sin()
    }
}
