//! Effective-field composition for the free layer.

use crate::magnetics::params::MaterialParams;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// One evaluation of the effective field, with the contributions kept
/// separate for inspection. `h_eff` is always their exact sum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FieldSample {
    pub h_ext: Vec3,
    pub h_demag: Vec3,
    pub h_anis: Vec3,
    pub h_thermal: Vec3,
    pub h_eff: Vec3,
}

/// Composes the effective field at magnetization `m`:
/// demag −Ms·(Nx mx, Ny my, Nz mz), uniaxial anisotropy Hk·mx along the
/// easy axis x, plus the applied and thermal fields. All in A/m.
pub fn effective_field(m: Vec3, p: &MaterialParams, h_ext: Vec3, h_thermal: Vec3) -> FieldSample {
    debug_assert!((m.norm() - 1.0).abs() < 1e-6, "non-unit magnetization");
    let (nx, ny, nz) = p.demag_factors;
    let h_demag = Vec3::new(-p.ms * nx * m.x, -p.ms * ny * m.y, -p.ms * nz * m.z);
    let h_anis = Vec3::new(p.hk * m.x, 0.0, 0.0);
    let h_eff = h_ext + h_demag + h_anis + h_thermal;
    FieldSample {
        h_ext,
        h_demag,
        h_anis,
        h_thermal,
        h_eff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::GAMMA;
    use approx::assert_relative_eq;

    fn params(ms: f64, hk: f64, demag: (f64, f64, f64)) -> MaterialParams {
        MaterialParams {
            ms,
            alpha: 0.03,
            gamma: GAMMA,
            volume: 4e-24,
            eb_kt: 62.76,
            temperature: 300.0,
            demag_factors: demag,
            hk,
        }
    }

    #[test]
    fn out_of_plane_demag_only() {
        let p = params(7.9577e5, 0.0, (0.0, 0.0, 1.0));
        let m = Vec3::new(0.0, 0.0, 1.0);
        let f = effective_field(m, &p, crate::vec3::ZERO, crate::vec3::ZERO);
        assert_relative_eq!(f.h_eff.z, -p.ms, max_relative = 1e-12);
        assert_eq!(f.h_eff.x, 0.0);
        assert_eq!(f.h_eff.y, 0.0);
    }

    #[test]
    fn external_field_passes_through() {
        let p = params(7.9577e5, 0.0, (0.0, 0.5, 0.5));
        let m = Vec3::new(1.0, 0.0, 0.0);
        let h = Vec3::new(5.9683e4, 0.0, 0.0);
        let f = effective_field(m, &p, h, crate::vec3::ZERO);
        assert_relative_eq!(f.h_eff.x, h.x);
        assert_eq!(f.h_eff.y, 0.0);
        assert_eq!(f.h_eff.z, 0.0);
    }

    #[test]
    fn demag_hand_evaluation() {
        // m along the in-plane diagonal with a film-like tensor.
        let p = params(7.9577e5, 0.0, (0.01, 0.02, 0.97));
        let s = 1.0 / 2.0_f64.sqrt();
        let f = effective_field(Vec3::new(s, s, 0.0), &p, crate::vec3::ZERO, crate::vec3::ZERO);
        assert_relative_eq!(f.h_demag.x, -5627.0, max_relative = 1e-3);
        assert_relative_eq!(f.h_demag.y, -11255.0, max_relative = 1e-3);
        assert_eq!(f.h_demag.z, 0.0);
    }

    #[test]
    fn sum_is_exact() {
        let p = params(7.9577e5, 1.3e5, (0.006, 0.022, 0.972));
        let m = Vec3::new(0.6, 0.8, 0.0);
        let h_ext = Vec3::new(1.0e4, 2.0e4, -3.0e3);
        let h_th = Vec3::new(-500.0, 250.0, 125.0);
        let f = effective_field(m, &p, h_ext, h_th);
        let manual = f.h_ext + f.h_demag + f.h_anis + f.h_thermal;
        assert_eq!(f.h_eff, manual);
    }
}
