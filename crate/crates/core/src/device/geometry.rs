//! Device geometry and the charge-to-spin conversion it fixes.

use crate::error::{CoreError, Result};
use crate::magnetics::demag::ellipsoid_demag_factors;
use serde::{Deserialize, Serialize};

/// How the free-layer footprint area is computed from length x width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FmShape {
    /// A_FM = length * width. The stated area is a plain product, so this
    /// is the default.
    Rectangular,
    /// A_FM = pi/4 * length * width.
    Elliptical,
}

/// Stack geometry: free-layer element on a heavy-metal channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviceGeometry {
    pub fm_length_nm: f64,
    pub fm_width_nm: f64,
    pub fm_thickness_nm: f64,
    pub hm_thickness_nm: f64,
    /// HM channel width; its product with hm_thickness is the charge
    /// cross-section A_HM.
    pub hm_width_nm: f64,
    pub lambda_sf_nm: f64,
    pub theta_sh: f64,
    pub fm_shape: FmShape,
}

impl DeviceGeometry {
    /// The standard element: 100 x 40 nm footprint, 1 nm free layer, 3 nm HM
    /// matched to the footprint length.
    pub fn reference() -> Self {
        DeviceGeometry {
            fm_length_nm: 100.0,
            fm_width_nm: 40.0,
            fm_thickness_nm: 1.0,
            hm_thickness_nm: 3.0,
            hm_width_nm: 100.0,
            lambda_sf_nm: 1.4,
            theta_sh: 0.3,
            fm_shape: FmShape::Rectangular,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("fm_length_nm", self.fm_length_nm),
            ("fm_width_nm", self.fm_width_nm),
            ("fm_thickness_nm", self.fm_thickness_nm),
            ("hm_thickness_nm", self.hm_thickness_nm),
            ("hm_width_nm", self.hm_width_nm),
            ("lambda_sf_nm", self.lambda_sf_nm),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::invalid(
                    "geometry",
                    format!("{name} must be > 0, got {v}"),
                ));
            }
        }
        if !(self.theta_sh > 0.0) || !self.theta_sh.is_finite() {
            return Err(CoreError::invalid(
                "geometry",
                format!("theta_sh must be > 0, got {}", self.theta_sh),
            ));
        }
        Ok(())
    }

    /// Free-layer footprint area, m^2, per the shape flag.
    pub fn a_fm_m2(&self) -> f64 {
        let raw = self.fm_length_nm * self.fm_width_nm * 1e-18;
        match self.fm_shape {
            FmShape::Rectangular => raw,
            FmShape::Elliptical => raw * std::f64::consts::FRAC_PI_4,
        }
    }

    /// HM charge-current cross-section, m^2.
    pub fn a_hm_m2(&self) -> f64 {
        self.hm_width_nm * self.hm_thickness_nm * 1e-18
    }

    /// Free-layer volume, m^3.
    pub fn fm_volume_m3(&self) -> f64 {
        self.a_fm_m2() * self.fm_thickness_nm * 1e-9
    }

    /// Dimensionless spin gain: Is = gain * Ic, with
    /// gain = theta_SH * (A_FM / A_HM) * (1 - sech(t_HM / lambda_sf)).
    pub fn spin_gain(&self) -> f64 {
        let sech = 1.0 / (self.hm_thickness_nm / self.lambda_sf_nm).cosh();
        self.theta_sh * (self.a_fm_m2() / self.a_hm_m2()) * (1.0 - sech)
    }

    /// Spin current injected into the free layer by HM charge current `i_c`.
    pub fn spin_current_from_charge(&self, i_c: f64) -> f64 {
        self.spin_gain() * i_c
    }

    /// Demagnetization factors of the element, from the inscribed ellipsoid
    /// with semi-axes (length/2, width/2, thickness/2).
    pub fn demag_factors(&self) -> Result<(f64, f64, f64)> {
        ellipsoid_demag_factors(
            self.fm_length_nm / 2.0,
            self.fm_width_nm / 2.0,
            self.fm_thickness_nm / 2.0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_current_zero_spin() {
        assert_eq!(DeviceGeometry::reference().spin_current_from_charge(0.0), 0.0);
    }

    #[test]
    fn reference_gain_hand_value() {
        // theta 0.3, area ratio 4000/300, sech(3/1.4): gain = 3.074, so
        // 420 uA of charge current makes about 1.291 mA of spin current.
        let g = DeviceGeometry::reference();
        assert_relative_eq!(g.spin_gain(), 3.074, max_relative = 1e-3);
        assert_relative_eq!(g.spin_current_from_charge(420e-6), 1.291e-3, max_relative = 1e-3);
    }

    #[test]
    fn thick_hm_limit() {
        let mut g = DeviceGeometry::reference();
        g.hm_thickness_nm = 1e4;
        // Keep A_HM fixed while t_HM grows so only the sech factor moves.
        g.hm_width_nm = 100.0 * 3.0 / 1e4;
        let limit = g.theta_sh * g.a_fm_m2() / g.a_hm_m2();
        assert_relative_eq!(g.spin_gain(), limit, max_relative = 1e-12);
    }

    #[test]
    fn linearity_is_exact() {
        let g = DeviceGeometry::reference();
        // Power-of-two scaling commutes exactly in floating point.
        for a in [2.0, 0.5, 4.0] {
            assert_eq!(
                g.spin_current_from_charge(a * 3.1e-4),
                a * g.spin_current_from_charge(3.1e-4)
            );
        }
        let a = 1.7;
        assert_relative_eq!(
            g.spin_current_from_charge(a * 3.1e-4),
            a * g.spin_current_from_charge(3.1e-4),
            max_relative = 1e-15
        );
    }

    #[test]
    fn elliptical_flag_scales_area() {
        let mut g = DeviceGeometry::reference();
        let rect = g.a_fm_m2();
        g.fm_shape = FmShape::Elliptical;
        assert_relative_eq!(g.a_fm_m2(), rect * std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn reference_volume() {
        assert_relative_eq!(DeviceGeometry::reference().fm_volume_m3(), 4e-24, max_relative = 1e-12);
    }

    #[test]
    fn validation_rejects_nonpositive_dimensions() {
        let mut g = DeviceGeometry::reference();
        g.fm_thickness_nm = 0.0;
        assert!(g.validate().is_err());
        let mut g = DeviceGeometry::reference();
        g.theta_sh = -0.3;
        assert!(g.validate().is_err());
    }
}
