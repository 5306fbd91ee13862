//! Stochastic macrospin dynamics: field composition and LLGS integration.

pub mod demag;
pub mod field;
pub mod heun;
pub mod llgs;
pub mod params;
pub mod thermal;
