use crate::error::{CoreError, Result};

/// Online second-order bandpass section, the discrete model of a resonant
/// pickup tuned to the carrier. Peak gain is unity at the center frequency;
/// content a few bandwidths away is strongly attenuated. State is two
/// samples deep, so the filter is causal and cheap enough to run inside the
/// integration loop.
///
/// Coefficients follow the standard constant-peak-gain bandpass biquad:
/// with `w = 2*pi*f0*dt` and `a = sin(w)/(2q)`,
/// `y[n] = (a*(x[n]-x[n-2]) - b1*y[n-1] - b2*y[n-2]) / (1+a)`.
#[derive(Debug, Clone)]
pub struct Resonator {
    b0: f64,
    b2: f64,
    a1: f64,
    a2: f64,
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
}

impl Resonator {
    /// Builds a section centered on `f0_hz` with quality factor `q`,
    /// sampled at `dt_s`. The center must sit below the Nyquist rate.
    pub fn new(f0_hz: f64, q: f64, dt_s: f64) -> Result<Self> {
        if !(f0_hz > 0.0) || !f0_hz.is_finite() {
            return Err(CoreError::invalid("f0_hz", format!("must be > 0, got {f0_hz}")));
        }
        if !(q > 0.0) || !q.is_finite() {
            return Err(CoreError::invalid("q", format!("must be > 0, got {q}")));
        }
        if !(dt_s > 0.0) || !dt_s.is_finite() {
            return Err(CoreError::invalid("dt_s", format!("must be > 0, got {dt_s}")));
        }
        if f0_hz * dt_s >= 0.5 {
            return Err(CoreError::invalid(
                "f0_hz",
                format!("center {f0_hz} Hz at dt {dt_s} s is at or above Nyquist"),
            ));
        }
        let w = std::f64::consts::TAU * f0_hz * dt_s;
        let alpha = w.sin() / (2.0 * q);
        let a0 = 1.0 + alpha;
        Ok(Self {
            b0: alpha / a0,
            b2: -alpha / a0,
            a1: -2.0 * w.cos() / a0,
            a2: (1.0 - alpha) / a0,
            x1: 0.0,
            x2: 0.0,
            y1: 0.0,
            y2: 0.0,
        })
    }

    /// Advances the filter by one sample and returns the output.
    pub fn process(&mut self, x: f64) -> f64 {
        let y = self.b0 * x + self.b2 * self.x2 - self.a1 * self.y1 - self.a2 * self.y2;
        self.x2 = self.x1;
        self.x1 = x;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }

    /// Runs the filter over a whole slice, returning the filtered copy.
    pub fn filtered(mut self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.process(x)).collect()
    }
}
