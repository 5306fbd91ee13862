//! The complete oscillator device: geometry, charge-to-spin transduction,
//! MR readout, trace simulation, and frequency characterization.

pub mod characterize;
pub mod drive;
pub mod geometry;
pub mod readout;
pub mod sim;

use crate::constants::oe_to_a_per_m;
use crate::vec3::Vec3;

/// Default operating geometry of the oscillator, chosen once for the whole
/// suite.
///
/// The applied in-plane field is canted 60 degrees away from the easy axis
/// (x). A field exactly along or exactly transverse to the easy axis yields
/// an orbit so symmetric that a 1:1 injected tone couples to nothing; the
/// cant breaks that symmetry, which is what makes injection locking and
/// phase readout work at all. The spin polarization axis is in-plane,
/// transverse to the HM charge-current flow; the fixed layer reads out of
/// plane, so MR tracks mz and swings evenly about the midpoint resistance.
pub mod defaults {
    use super::*;

    /// Applied field magnitude, Oe.
    pub const FIELD_OE: f64 = 750.0;

    /// Unit direction of the applied field: in plane, 60 degrees from x.
    pub fn field_direction() -> Vec3 {
        Vec3::new(0.5, 0.75_f64.sqrt(), 0.0)
    }

    /// Applied field vector in A/m.
    pub fn applied_field() -> Vec3 {
        field_direction() * oe_to_a_per_m(FIELD_OE)
    }

    /// Spin polarization axis fixed by the HM geometry.
    pub fn spin_polarization() -> Vec3 {
        Vec3::new(0.0, -1.0, 0.0)
    }

    /// Fixed-layer axis used for MR readout.
    pub fn pinned_axis() -> Vec3 {
        Vec3::new(0.0, 0.0, 1.0)
    }

    /// Initial magnetization, placed inside the basin of the precessing
    /// orbit (near the spin polarization axis, slightly tipped).
    pub fn initial_magnetization() -> Vec3 {
        Vec3::new(0.1, -0.99, 0.1).normalized()
    }

    /// Integration step, s.
    pub const DT: f64 = 1e-13;

    /// Decimation from integration step to recorded sample (1 ps grid).
    pub const DECIMATE: usize = 10;
}
