//! The LLGS right-hand side in explicit form.
//!
//! The implicit equation (Gilbert form plus a Slonczewski-style in-plane
//! torque from the injected spin current) is
//!
//!   dm/dt = -g (m x H) + alpha (m x dm/dt) + b m x (s x m)
//!
//! with g = gamma mu_0 (field in A/m), b = Is/(q Ns), s the spin
//! polarization axis. Crossing with m and substituting back removes the
//! implicit term:
//!
//!   dm/dt = (tau + alpha m x tau) / (1 + alpha^2),
//!   tau   = -g (m x H) + b (s - m (m . s))
//!
//! using m x (s x m) = s - m (m . s) for unit m.

use crate::constants::{MU_0, Q_E};
use crate::magnetics::params::MaterialParams;
use crate::vec3::Vec3;

/// dm/dt in 1/s for magnetization `m`, effective field `h_eff` (A/m), and
/// spin current `i_s` amperes polarized along unit vector `sigma_hat`.
#[inline]
pub fn llgs_rhs(m: Vec3, h_eff: Vec3, i_s: f64, sigma_hat: Vec3, p: &MaterialParams) -> Vec3 {
    debug_assert!((m.norm() - 1.0).abs() < 1e-6, "non-unit magnetization");
    let g = p.gamma * MU_0;
    let b = i_s / (Q_E * p.spin_count());
    let tau = m.cross(h_eff) * (-g) + (sigma_hat - m * m.dot(sigma_hat)) * b;
    (tau + m.cross(tau) * p.alpha) * (1.0 / (1.0 + p.alpha * p.alpha))
}

/// Residual of the implicit equation at a proposed derivative `d`:
/// d - [-g (m x H) + alpha (m x d) + b m x (s x m)]. Zero iff `d` solves it.
/// Kept public for the conversion contract test.
pub fn implicit_residual(
    m: Vec3,
    h_eff: Vec3,
    i_s: f64,
    sigma_hat: Vec3,
    p: &MaterialParams,
    d: Vec3,
) -> Vec3 {
    let g = p.gamma * MU_0;
    let b = i_s / (Q_E * p.spin_count());
    let rhs = m.cross(h_eff) * (-g) + m.cross(d) * p.alpha + m.cross(sigma_hat.cross(m)) * b;
    d - rhs
}
