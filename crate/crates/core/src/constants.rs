//! Physical constants (2019 SI exact values where defined) and unit helpers.

/// Vacuum permeability, T m / A.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Gyromagnetic ratio of the free electron, rad / (s T).
pub const GAMMA: f64 = 1.760_859_630_23e11;

///gamma * mu_0, rad / s per A/m. Precession rate per unit field in A/m.
pub const GAMMA_MU_0: f64 = GAMMA * MU_0;

/// Boltzmann constant, J / K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Elementary charge, C (exact).
pub const Q_E: f64 = 1.602_176_634e-19;

/// Bohr magneton, J / T.
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// Converts oersted to A/m: 1 Oe = 1000/(4 pi) A/m.
pub fn oe_to_a_per_m(h_oe: f64) -> f64 {
    h_oe * 1000.0 / (4.0 * std::f64::consts::PI)
}

/// Converts emu/cc to A/m: 1 emu/cc = 1000 A/m.
pub fn emu_cc_to_a_per_m(ms_emu_cc: f64) -> f64 {
    ms_emu_cc * 1000.0
}
