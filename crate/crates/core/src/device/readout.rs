//! Magnetoresistance readout of the free layer against the fixed layer.

use crate::error::{CoreError, Result};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Two-terminal MTJ resistance model, linear in the angle cosine so the
/// perpendicular state sits exactly at the midpoint resistance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MtjReadout {
    pub r_parallel: f64,
    pub r_antiparallel: f64,
}

impl MtjReadout {
    /// Builds from the parallel resistance and TMR ratio:
    /// r_AP = r_P * (1 + TMR).
    pub fn from_tmr(r_parallel: f64, tmr: f64) -> Self {
        MtjReadout {
            r_parallel,
            r_antiparallel: r_parallel * (1.0 + tmr),
        }
    }

    /// The standard junction: 1 kOhm parallel, TMR 200%, midpoint 2 kOhm.
    pub fn reference() -> Self {
        Self::from_tmr(1000.0, 2.0)
    }

    pub fn tmr(&self) -> f64 {
        (self.r_antiparallel - self.r_parallel) / self.r_parallel
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_parallel > 0.0) {
            return Err(CoreError::invalid(
                "r_parallel",
                format!("must be > 0, got {}", self.r_parallel),
            ));
        }
        if !(self.r_antiparallel > self.r_parallel) {
            return Err(CoreError::invalid(
                "r_antiparallel",
                format!(
                    "must exceed r_parallel ({} vs {})",
                    self.r_antiparallel, self.r_parallel
                ),
            ));
        }
        Ok(())
    }

    /// Midpoint between the parallel and antiparallel states.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.r_parallel + self.r_antiparallel)
    }

    /// Resistance at magnetization `m` against the fixed-layer axis:
    /// R = r_P + (r_AP - r_P) * (1 - cos(theta)) / 2.
    #[inline]
    pub fn resistance(&self, m: Vec3, pinned_axis: Vec3) -> f64 {
        let cos = m.dot(pinned_axis);
        self.r_parallel + (self.r_antiparallel - self.r_parallel) * 0.5 * (1.0 - cos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::NoiseStream;
    use approx::assert_relative_eq;

    #[test]
    fn cardinal_points() {
        let r = MtjReadout::reference();
        let z = Vec3::new(0.0, 0.0, 1.0);
        assert_relative_eq!(r.resistance(z, z), 1000.0);
        assert_relative_eq!(r.resistance(-z, z), 3000.0);
        assert_relative_eq!(r.resistance(Vec3::new(1.0, 0.0, 0.0), z), 2000.0);
        assert_relative_eq!(r.midpoint(), 2000.0);
    }

    #[test]
    fn tmr_round_trip_is_exact() {
        let r = MtjReadout::from_tmr(1000.0, 2.0);
        assert!((r.tmr() - 2.0).abs() < 1e-12);
        r.validate().unwrap();
    }

    #[test]
    fn resistance_stays_bounded() {
        let r = MtjReadout::reference();
        let z = Vec3::new(0.0, 0.0, 1.0);
        let mut rng = NoiseStream::for_device(8, 0);
        for _ in 0..10_000 {
            let m = Vec3::new(
                rng.standard_normal(),
                rng.standard_normal(),
                rng.standard_normal(),
            )
            .normalized();
            let val = r.resistance(m, z);
            assert!((r.r_parallel..=r.r_antiparallel).contains(&val), "{val}");
        }
    }

    #[test]
    fn validation_rejects_inverted_resistances() {
        let r = MtjReadout {
            r_parallel: 3000.0,
            r_antiparallel: 1000.0,
        };
        assert!(r.validate().is_err());
        let r = MtjReadout {
            r_parallel: 0.0,
            r_antiparallel: 1000.0,
        };
        assert!(r.validate().is_err());
    }
}
