//! Recent spike times per neuron, for timing-gap lookups.

use crate::error::{CoreError, Result};
use std::collections::VecDeque;

/// Bounded per-neuron spike memory.
///
/// Slots are plain indices fixed by the caller; the learning rule uses the
/// convention that pre-row slots come first, post-column slots after them.
/// Each slot keeps the most recent `capacity` spike times, strictly
/// increasing.
#[derive(Debug, Clone)]
pub struct SpikeHistory {
    buffers: Vec<VecDeque<f64>>,
    capacity: usize,
}

impl SpikeHistory {
    pub fn new(slots: usize, capacity: usize) -> Result<Self> {
        if slots == 0 {
            return Err(CoreError::invalid("slots", "need at least 1".to_string()));
        }
        if capacity == 0 {
            return Err(CoreError::invalid("capacity", "need at least 1".to_string()));
        }
        Ok(SpikeHistory {
            buffers: vec![VecDeque::with_capacity(capacity); slots],
            capacity,
        })
    }

    pub fn slots(&self) -> usize {
        self.buffers.len()
    }

    pub fn len(&self, slot: usize) -> usize {
        self.buffers.get(slot).map_or(0, VecDeque::len)
    }

    pub fn is_empty(&self, slot: usize) -> bool {
        self.len(slot) == 0
    }

    /// Appends a spike. Times must be strictly increasing within a slot; the
    /// oldest entry is evicted once the slot is full.
    pub fn record(&mut self, slot: usize, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(CoreError::invalid("t", "spike time must be finite".to_string()));
        }
        let cap = self.capacity;
        let buf = self.buffers.get_mut(slot).ok_or_else(|| {
            CoreError::invalid("slot", format!("index {slot} out of range"))
        })?;
        if let Some(&last) = buf.back() {
            if t <= last {
                return Err(CoreError::invalid(
                    "t",
                    format!("spike times must increase: {t} after {last}"),
                ));
            }
        }
        if buf.len() == cap {
            buf.pop_front();
        }
        buf.push_back(t);
        Ok(())
    }

    /// Most recent spike at or before `t`, if any survives in the buffer.
    pub fn nearest_at_or_before(&self, slot: usize, t: f64) -> Option<f64> {
        let buf = self.buffers.get(slot)?;
        buf.iter().rev().find(|&&s| s <= t).copied()
    }

    pub fn last(&self, slot: usize) -> Option<f64> {
        self.buffers.get(slot)?.back().copied()
    }
}
