//! Macrospin simulation of spin-orbit-torque MTJ oscillator neurons and the
//! analysis machinery for measuring their phase synchrony.
//!
//! The crate is organized bottom-up:
//!
//! * [`magnetics`] - stochastic LLGS dynamics of a single free layer
//!   (effective field, thermal noise, Heun integration)
//! * [`device`] - the full oscillator device: geometry, charge-to-spin
//!   conversion, MR readout, trace simulation, calibration
//! * [`signal`] - spectral and spike-domain synchrony measurement
//! * [`network`] - the crossbar-coupled binding network with RF injectors
//!   and timing-driven plasticity
//!
//! All physical quantities are SI unless a name says otherwise.

pub mod constants;
pub mod device;
pub mod error;
pub mod magnetics;
pub mod network;
pub mod rng;
pub mod signal;
pub mod timeseries;
pub mod vec3;

pub use error::{CoreError, Result};
pub use timeseries::TimeSeries;
pub use vec3::Vec3;

pub use magnetics::field::FieldSample;
pub use magnetics::params::MaterialParams;

pub use device::drive::DriveSignal;
pub use device::geometry::DeviceGeometry;
pub use device::readout::MtjReadout;
pub use device::sim::{DeviceState, SimGrid, TraceOutput};

pub use signal::cross::CrossSpectrum;
pub use signal::spectrum::Spectrum;
pub use signal::spikes::SpikeTrain;

pub use network::binding::{
    simulate_binding, revoke_synchronization, BindingConfig, BindingResult, ConfigurationLabel,
};
pub use network::crossbar::{Crossbar, LearningParams};
pub use network::history::SpikeHistory;
pub use network::injector::AstrocyteInjector;
pub use network::topology::NetworkTopology;
