//! Material and energetic parameters of the free layer.

use crate::constants::{GAMMA, K_B, MU_B, MU_0};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Everything the LLGS right-hand side needs to know about the magnet.
///
/// The spin count is never stored: it is always `Ms * volume / mu_B` of the
/// current fields, so the two cannot drift apart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Saturation magnetization, A/m.
    pub ms: f64,
    /// Gilbert damping. Zero is accepted for conservative-precession checks
    /// even though a physical magnet always damps.
    pub alpha: f64,
    /// Gyromagnetic ratio, rad/(s T).
    pub gamma: f64,
    /// Free-layer volume, m^3.
    pub volume: f64,
    /// Easy-axis energy barrier in multiples of kB*T at `temperature`.
    pub eb_kt: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Demagnetization factors (Nx, Ny, Nz), each in [0,1], summing to 1.
    pub demag_factors: (f64, f64, f64),
    /// Uniaxial anisotropy field, A/m. Easy axis is x by convention.
    pub hk: f64,
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.ms > 0.0) {
            return Err(CoreError::invalid("ms", format!("must be > 0, got {}", self.ms)));
        }
        if !(self.volume > 0.0) {
            return Err(CoreError::invalid(
                "volume",
                format!("must be > 0, got {}", self.volume),
            ));
        }
        if !(self.alpha >= 0.0 && self.alpha < 1.0) {
            return Err(CoreError::invalid(
                "alpha",
                format!("must be in [0,1), got {}", self.alpha),
            ));
        }
        if !(self.temperature >= 0.0) {
            return Err(CoreError::invalid(
                "temperature",
                format!("must be >= 0, got {}", self.temperature),
            ));
        }
        if !(self.gamma > 0.0) {
            return Err(CoreError::invalid("gamma", "must be > 0".to_string()));
        }
        let (nx, ny, nz) = self.demag_factors;
        for (name, n) in [("Nx", nx), ("Ny", ny), ("Nz", nz)] {
            if !(0.0..=1.0).contains(&n) {
                return Err(CoreError::invalid(
                    "demag_factors",
                    format!("{name} = {n} outside [0,1]"),
                ));
            }
        }
        if (nx + ny + nz - 1.0).abs() > 1e-9 {
            return Err(CoreError::invalid(
                "demag_factors",
                format!("sum {} != 1", nx + ny + nz),
            ));
        }
        if self.hk < 0.0 {
            return Err(CoreError::invalid("hk", format!("must be >= 0, got {}", self.hk)));
        }
        Ok(())
    }

    /// Number of spins in the free layer, Ms * V / mu_B. Recomputed on demand.
    pub fn spin_count(&self) -> f64 {
        self.ms * self.volume / MU_B
    }

    /// Energy barrier in joules. The barrier is quoted in multiples of kB*T
    /// at room temperature regardless of the simulated bath temperature.
    pub fn barrier_joules(&self) -> f64 {
        self.eb_kt * K_B * 300.0
    }

    /// Anisotropy field implied by a barrier of `eb_kt` multiples of kB*300K:
    /// Hk = 2 Eb / (mu_0 Ms V).
    pub fn hk_from_barrier(eb_kt: f64, ms: f64, volume: f64) -> f64 {
        let eb = eb_kt * K_B * 300.0;
        2.0 * eb / (MU_0 * ms * volume)
    }

    /// Room-temperature defaults for the reference device at a given volume
    /// and demag tensor. `gamma` is the free-electron value.
    pub fn reference(volume: f64, demag_factors: (f64, f64, f64)) -> Self {
        let ms = 1e7 / (4.0 * std::f64::consts::PI);
        let eb_kt = 62.76;
        MaterialParams {
            ms,
            alpha: 0.03,
            gamma: GAMMA,
            volume,
            eb_kt,
            temperature: 300.0,
            demag_factors,
            hk: Self::hk_from_barrier(eb_kt, ms, volume),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference() -> MaterialParams {
        MaterialParams::reference(4e-24, (0.0057, 0.0224, 0.9719))
    }

    #[test]
    fn reference_passes_validation() {
        reference().validate().unwrap();
    }

    #[test]
    fn spin_count_is_recomputed() {
        // Ms V / mu_B with Ms = 1e7/(4 pi), V = 4e-24 m^3.
        let p = reference();
        assert_relative_eq!(p.spin_count(), 3.432e5, max_relative = 1e-3);
        let mut half = p.clone();
        half.volume /= 2.0;
        assert_relative_eq!(half.spin_count(), p.spin_count() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn barrier_pins_anisotropy_field() {
        // Hk = 2 Eb/(mu_0 Ms V); Eb = 62.76 kT300 and mu_0 Ms = 1 T give
        // 1.29975e5 A/m at V = 4e-24 m^3.
        let p = reference();
        assert_relative_eq!(p.hk, 1.29975e5, max_relative = 1e-4);
    }

    #[test]
    fn validation_rejects_out_of_domain() {
        let mut p = reference();
        p.alpha = 1.0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.alpha = -0.01;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.temperature = -1.0;
        assert!(p.validate().is_err());
        let mut p = reference();
        p.demag_factors = (0.5, 0.5, 0.5);
        assert!(p.validate().is_err());
        let mut p = reference();
        p.demag_factors = (-0.1, 0.4, 0.7);
        assert!(p.validate().is_err());
    }

    #[test]
    fn zero_alpha_is_accepted() {
        // Needed by the conservative Larmor check; physical runs use 0.03.
        let mut p = reference();
        p.alpha = 0.0;
        p.validate().unwrap();
    }
}
