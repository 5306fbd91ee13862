//! Network wiring: which devices share a heavy-metal line, who drives whom.

use crate::error::{CoreError, Result};
use crate::network::injector::AstrocyteInjector;

/// Pre-neuron group: devices fabricated on one heavy-metal line, so they all
/// see the same charge current (DC bias plus the assigned injector).
#[derive(Debug, Clone)]
pub struct PreGroup {
    /// Indices into the run's device array. The first entry is the group's
    /// representative: its readout supplies the crossbar row voltage and its
    /// spikes stand in for the group in learning events.
    pub devices: Vec<usize>,
    pub injector: AstrocyteInjector,
    /// DC bias on the shared line, amperes.
    pub i_dc: f64,
}

/// Post-neuron: one device on a private line, driven by its DC bias plus the
/// crossbar-coupled AC from the pre rows.
#[derive(Debug, Clone)]
pub struct PostNeuron {
    pub device: usize,
    pub i_dc: f64,
}

/// The whole wiring plan. Group order fixes crossbar row order; post order
/// fixes column order. Group 0 carries the zero-phase injector.
#[derive(Debug, Clone)]
pub struct NetworkTopology {
    pub groups: Vec<PreGroup>,
    pub posts: Vec<PostNeuron>,
}

impl NetworkTopology {
    /// The standard binding layout: two groups of two devices sharing a line
    /// each, opposite-phase injectors at the operating frequency, and two
    /// post neurons. Devices 0..4 are the pres (group-major), 4 and 5 the
    /// posts. All lines share one DC bias.
    ///
    /// The injectors run at 175 mV (175 uA peak), not the 250 mV reference
    /// source: at room temperature the stronger drive swings the bias out
    /// of the oscillation window each cycle and the devices detune instead
    /// of locking, while 175 uA holds them on the carrier.
    pub fn binding_reference(operating_frequency: f64, i_dc: f64) -> Self {
        NetworkTopology {
            groups: vec![
                PreGroup {
                    devices: vec![0, 1],
                    injector: AstrocyteInjector::new(0.175, operating_frequency, 0.0),
                    i_dc,
                },
                PreGroup {
                    devices: vec![2, 3],
                    injector: AstrocyteInjector::new(
                        0.175,
                        operating_frequency,
                        std::f64::consts::PI,
                    ),
                    i_dc,
                },
            ],
            posts: vec![
                PostNeuron { device: 4, i_dc },
                PostNeuron { device: 5, i_dc },
            ],
        }
    }

    /// Total devices the plan references; indices must tile 0..count.
    pub fn device_count(&self) -> usize {
        self.groups.iter().map(|g| g.devices.len()).sum::<usize>() + self.posts.len()
    }

    pub fn representative(&self, group: usize) -> usize {
        self.groups[group].devices[0]
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(CoreError::invalid("groups", "need at least one".to_string()));
        }
        if self.posts.is_empty() {
            return Err(CoreError::invalid("posts", "need at least one".to_string()));
        }
        let n = self.device_count();
        let mut seen = vec![false; n];
        let mut claim = |idx: usize| -> Result<()> {
            if idx >= n {
                return Err(CoreError::invalid(
                    "device",
                    format!("index {idx} outside 0..{n}"),
                ));
            }
            if seen[idx] {
                return Err(CoreError::invalid(
                    "device",
                    format!("index {idx} assigned twice"),
                ));
            }
            seen[idx] = true;
            Ok(())
        };
        for (gi, g) in self.groups.iter().enumerate() {
            if g.devices.is_empty() {
                return Err(CoreError::invalid(
                    "groups",
                    format!("group {gi} has no devices"),
                ));
            }
            if !g.i_dc.is_finite() {
                return Err(CoreError::invalid("i_dc", format!("group {gi} bias not finite")));
            }
            g.injector.validate()?;
            for &d in &g.devices {
                claim(d)?;
            }
        }
        for (pi, p) in self.posts.iter().enumerate() {
            if !p.i_dc.is_finite() {
                return Err(CoreError::invalid("i_dc", format!("post {pi} bias not finite")));
            }
            claim(p.device)?;
        }
        Ok(())
    }
}
