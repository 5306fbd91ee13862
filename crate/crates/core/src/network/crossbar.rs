//! Programmable conductance array and its timing-based learning rule.

use crate::error::{CoreError, Result};
use crate::network::history::SpikeHistory;
use serde::{Deserialize, Serialize};

/// Crossbar rows: one per pre-neuron group (shared heavy-metal line).
pub const ROWS: usize = 2;
/// Crossbar columns: one per post-neuron.
pub const COLS: usize = 2;

/// History slot of a pre row's representative device.
#[inline]
pub fn pre_slot(row: usize) -> usize {
    row
}

/// History slot of a post column's device.
#[inline]
pub fn post_slot(col: usize) -> usize {
    ROWS + col
}

/// Learning-rule constants. Timing gaps are measured in reduced units (the
/// caller fixes one unit; the network uses a tenth of the operating period)
/// and rates act per event in normalized weight space.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LearningParams {
    /// Potentiation rate per event.
    pub eta_plus: f64,
    /// Potentiation decay constant, reduced units.
    pub tau_plus: f64,
    /// Lateral-inhibition rate per event.
    pub eta_minus: f64,
    /// Inhibition decay constant, reduced units.
    pub tau_minus: f64,
    /// Updates fire on every k-th spike of a given neuron; intermediate
    /// spikes only land in the history.
    pub cadence: u32,
}

impl LearningParams {
    pub fn reference() -> Self {
        LearningParams {
            eta_plus: 0.25,
            tau_plus: 5.0,
            eta_minus: 0.15,
            tau_minus: 5.0,
            cadence: 10,
        }
    }

    /// Rates zeroed: spikes accumulate but no weight ever moves.
    pub fn frozen() -> Self {
        LearningParams {
            eta_plus: 0.0,
            eta_minus: 0.0,
            ..Self::reference()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eta_plus", self.eta_plus), ("eta_minus", self.eta_minus)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(CoreError::invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        for (name, v) in [("tau_plus", self.tau_plus), ("tau_minus", self.tau_minus)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if self.cadence == 0 {
            return Err(CoreError::invalid("cadence", "must be >= 1".to_string()));
        }
        Ok(())
    }
}

/// Potentiation for a pre/post pair separated by `delta_units` in time.
/// Symmetric in the gap sign (both orderings potentiate), multiplicative in
/// the current normalized weight.
#[inline]
pub fn stdp_delta(w: f64, delta_units: f64, p: &LearningParams) -> f64 {
    p.eta_plus * w * (-delta_units.abs() / p.tau_plus).exp()
}

/// Depression applied to the non-selected synapses of the firing neuron's
/// row or column: same timing kernel, opposite sign, its own rate.
#[inline]
pub fn inhibition_delta(w: f64, delta_units: f64, p: &LearningParams) -> f64 {
    -p.eta_minus * w * (-delta_units.abs() / p.tau_minus).exp()
}

/// One carrier period in reduced units, fixed by the unit choice (a tenth
/// of the operating period).
const PERIOD_UNITS: f64 = 10.0;

/// Nearest-spike gap on the carrier circle. The history only holds past
/// spikes, so a partner just *after* the event shows up as a raw gap of
/// almost one period; folding takes the shorter way around. Gaps staler
/// than a period are left alone rather than aliased into coherence.
#[inline]
fn fold_gap(gap_units: f64) -> f64 {
    if gap_units <= PERIOD_UNITS {
        gap_units.min(PERIOD_UNITS - gap_units)
    } else {
        gap_units
    }
}

/// A spike that may trigger a weight update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Spike of the representative device of pre row `.0`.
    PreRow(usize),
    /// Spike of the post neuron on column `.0`.
    PostColumn(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct LearningEvent {
    pub time_s: f64,
    pub kind: EventKind,
}

/// 2x2 conductance array coupling pre-row AC voltages into post-neuron drive
/// currents. Conductances live in [g_min, g_max] siemens; learning acts on
/// the normalized weight w = (g - g_min) / (g_max - g_min), clamped to
/// [0, 1], so the physical bounds can never be escaped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Crossbar {
    g: [[f64; COLS]; ROWS],
    pub g_min: f64,
    pub g_max: f64,
    pub params: LearningParams,
    event_counts: [u64; ROWS + COLS],
}

impl Crossbar {
    /// All weights start mid-range; thermal noise in the run breaks the tie.
    pub fn new(g_min: f64, g_max: f64, params: LearningParams) -> Result<Self> {
        if !(g_min > 0.0) || !g_min.is_finite() {
            return Err(CoreError::invalid("g_min", format!("must be > 0, got {g_min}")));
        }
        if !(g_max > g_min) || !g_max.is_finite() {
            return Err(CoreError::invalid(
                "g_max",
                format!("must exceed g_min {g_min}, got {g_max}"),
            ));
        }
        params.validate()?;
        let mid = 0.5 * (g_min + g_max);
        Ok(Crossbar {
            g: [[mid; COLS]; ROWS],
            g_min,
            g_max,
            params,
            event_counts: [0; ROWS + COLS],
        })
    }

    /// Reference array: 25 kohm OFF, 2.5 kohm ON (ratio 10).
    pub fn reference() -> Self {
        Self::new(4.0e-5, 4.0e-4, LearningParams::reference()).expect("reference bounds are valid")
    }

    /// Reference array with untuned starting weights: each synapse drawn
    /// uniformly from the middle half of the normalized range. A perfectly
    /// degenerate start leaves the columns nothing to commit to; fabrication
    /// spread is what the learning rule amplifies into an assignment.
    pub fn untuned(seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5e1f_0c4a_11b8_d3e6);
        let mut xb = Self::reference();
        for r in 0..ROWS {
            for c in 0..COLS {
                xb.set_normalized(r, c, rng.gen_range(0.25..0.75));
            }
        }
        xb
    }

    #[inline]
    pub fn g(&self, row: usize, col: usize) -> f64 {
        self.g[row][col]
    }

    pub fn resistance_ohms(&self, row: usize, col: usize) -> f64 {
        1.0 / self.g[row][col]
    }

    /// Normalized weight in [0, 1].
    #[inline]
    pub fn normalized(&self, row: usize, col: usize) -> f64 {
        (self.g[row][col] - self.g_min) / (self.g_max - self.g_min)
    }

    /// Sets a weight in normalized space, clamping into [0, 1].
    pub fn set_normalized(&mut self, row: usize, col: usize, w: f64) {
        let w = w.clamp(0.0, 1.0);
        self.g[row][col] = self.g_min + w * (self.g_max - self.g_min);
    }

    /// Drive current delivered to post column `col` for the given pre-row AC
    /// voltages: i_j = sum_i g[i][j] * v[i]. Linear in both arguments.
    #[inline]
    pub fn post_ac_current(&self, v_rows: &[f64; ROWS], col: usize) -> f64 {
        let mut i = 0.0;
        for (r, &v) in v_rows.iter().enumerate() {
            i += self.g[r][col] * v;
        }
        i
    }

    /// Processes one spike. Every call bumps the neuron's event counter; only
    /// every `cadence`-th call moves weights. A firing post potentiates its
    /// column entry in each row (gap measured to that row's nearest pre
    /// spike on the carrier circle, see `fold_gap`) and depresses the same
    /// row's other columns with the same gap; a firing pre row does the
    /// transpose. Rows or columns with no partner spike in the history are
    /// skipped. Returns the number of synapses potentiated.
    pub fn apply_learning_event(
        &mut self,
        event: &LearningEvent,
        history: &SpikeHistory,
        unit_s: f64,
    ) -> Result<usize> {
        if !(unit_s > 0.0) || !unit_s.is_finite() {
            return Err(CoreError::invalid("unit_s", format!("must be > 0, got {unit_s}")));
        }
        let slot = match event.kind {
            EventKind::PreRow(r) if r < ROWS => pre_slot(r),
            EventKind::PostColumn(c) if c < COLS => post_slot(c),
            _ => {
                return Err(CoreError::invalid(
                    "event",
                    format!("index out of range in {:?}", event.kind),
                ))
            }
        };
        self.event_counts[slot] += 1;
        if self.event_counts[slot] % u64::from(self.params.cadence) != 0 {
            return Ok(0);
        }
        let p = self.params;
        let mut potentiated = 0;
        match event.kind {
            EventKind::PostColumn(c) => {
                for r in 0..ROWS {
                    let Some(t_pre) = history.nearest_at_or_before(pre_slot(r), event.time_s)
                    else {
                        continue;
                    };
                    let gap = fold_gap((event.time_s - t_pre) / unit_s);
                    let w = self.normalized(r, c);
                    self.set_normalized(r, c, w + stdp_delta(w, gap, &p));
                    potentiated += 1;
                    for c2 in 0..COLS {
                        if c2 != c {
                            let w2 = self.normalized(r, c2);
                            self.set_normalized(r, c2, w2 + inhibition_delta(w2, gap, &p));
                        }
                    }
                }
            }
            EventKind::PreRow(r) => {
                for c in 0..COLS {
                    let Some(t_post) = history.nearest_at_or_before(post_slot(c), event.time_s)
                    else {
                        continue;
                    };
                    let gap = fold_gap((event.time_s - t_post) / unit_s);
                    let w = self.normalized(r, c);
                    self.set_normalized(r, c, w + stdp_delta(w, gap, &p));
                    potentiated += 1;
                    for r2 in 0..ROWS {
                        if r2 != r {
                            let w2 = self.normalized(r2, c);
                            self.set_normalized(r2, c, w2 + inhibition_delta(w2, gap, &p));
                        }
                    }
                }
            }
        }
        Ok(potentiated)
    }
}
