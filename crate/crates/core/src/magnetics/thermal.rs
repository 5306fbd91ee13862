//! Thermal fluctuation field (Brown's model).

use crate::constants::{K_B, MU_0};
use crate::magnetics::params::MaterialParams;
use crate::rng::NoiseStream;
use crate::vec3::Vec3;

/// Per-component standard deviation of the fluctuation field in A/m for a
/// step of length `dt`:
///
///   sigma = sqrt(2 alpha kB T / (gamma mu_0^2 Ms V dt))
///
/// Scales as 1/sqrt(dt) so the integrated kick has the right variance.
pub fn thermal_sigma(p: &MaterialParams, dt: f64) -> f64 {
    if p.temperature == 0.0 {
        return 0.0;
    }
    (2.0 * p.alpha * K_B * p.temperature / (p.gamma * MU_0 * MU_0 * p.ms * p.volume * dt)).sqrt()
}

/// One field sample, each component an independent zero-mean Gaussian of the
/// standard deviation above. Exactly zero at T = 0 (no wasted draws).
pub fn thermal_field_sample(p: &MaterialParams, dt: f64, rng: &mut NoiseStream) -> Vec3 {
    let sigma = thermal_sigma(p, dt);
    if sigma == 0.0 {
        return crate::vec3::ZERO;
    }
    Vec3::new(
        sigma * rng.standard_normal(),
        sigma * rng.standard_normal(),
        sigma * rng.standard_normal(),
    )
}
