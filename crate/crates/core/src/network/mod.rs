//! Crossbar-coupled oscillator network: injector-driven pre groups, a
//! plastic conductance array, post neurons, and the binding run that ties
//! them together.

pub mod binding;
pub mod crossbar;
pub mod history;
pub mod injector;
pub mod topology;
