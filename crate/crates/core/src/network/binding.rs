//! The coupled network run: two injector-driven pre groups, a learned
//! crossbar, two post neurons.
//!
//! Everything advances in one step-locked loop. Within a step the pre
//! devices integrate first (their drive is closed-form), then the post
//! drives are assembled from the crossbar and the pre readouts at both stage
//! times, then the posts integrate. The crossbar only changes between steps,
//! so no device ever sees a mid-step weight move and the result is
//! independent of evaluation order within each class.

use crate::device::sim::DeviceState;
use crate::error::{CoreError, Result};
use crate::network::crossbar::{Crossbar, EventKind, LearningEvent, COLS, ROWS};
use crate::network::history::SpikeHistory;
use crate::network::topology::NetworkTopology;
use crate::rng::NoiseStream;
use crate::signal::cross::cross_spectrum;
use crate::signal::resonator::Resonator;
use crate::signal::spikes::SpikeTrain;
use crate::signal::wrap_deg;
use crate::timeseries::TimeSeries;
use crate::vec3::Vec3;

/// Run plan for `simulate_binding`. Times in seconds, currents in amperes.
#[derive(Debug, Clone)]
pub struct BindingConfig {
    pub duration: f64,
    /// Learning events are honored up to this time; the crossbar is frozen
    /// afterwards so the phase measurement sees a fixed network.
    pub learning_window: f64,
    /// Phases are measured over the trailing window of this length.
    pub phase_window: f64,
    pub dt: f64,
    /// Trace recording stride, integration steps per sample.
    pub decimate: usize,
    /// Shared carrier of the experiment. Sets the injector analysis bin, the
    /// learning time unit (a tenth of this period), the bias-tee window and
    /// the refractory interval.
    pub operating_frequency: f64,
    /// Transimpedance of the row pickup: read bias times the row buffer
    /// gain, amperes. Scales the per-row voltage handed to the limiter.
    pub i_read: f64,
    /// Quality factor of the resonant row pickup centered on the operating
    /// frequency. The raw MR waveform at room temperature is mostly
    /// broadband; the resonator keeps the carrier-band content a post can
    /// actually follow.
    pub row_q: f64,
    /// Output swing of the saturating row buffer, volts. The buffer clips
    /// the picked-up carrier to a constant envelope, so a row's authority
    /// over a post depends on its synaptic weight, not on the thermal
    /// amplitude of the moment, and the net drive on a post scales with the
    /// weight difference between its rows.
    pub row_limit_v: f64,
    /// Quality factor of the output tank after the buffer. The clipped
    /// waveform is harmonic-rich, and a post locks to a distorted carrier at
    /// a different equilibrium angle than to a sine; the tank hands the
    /// crossbar the fundamental alone.
    pub row_tank_q: f64,
    /// Phase trim of the row chain at the carrier, degrees, realized as a
    /// line delay. A driven device answers its drive with a fixed response
    /// lag, so a post naturally settles that far behind the pre carrier it
    /// follows; advancing the chain by the same angle drops the post onto
    /// the pre's own phase, which both tightens the in-group spread and
    /// keeps coincident pre and post spikes coincident for the learning
    /// rule.
    pub row_phase_deg: f64,
    /// MR level whose upward crossings count as spikes, ohms.
    pub spike_threshold_ohms: f64,
    /// Refractory interval as a fraction of the operating period.
    pub refractory_fraction: f64,
    pub learning_enabled: bool,
    /// When set, both injectors turn off for stage times after this instant.
    pub revoke_at: Option<f64>,
    /// A configuration resolves when one assignment's mean in-group |phase|
    /// is below this...
    pub resolve_within_deg: f64,
    /// ...while the opposite assignment's mean exceeds this.
    pub resolve_cross_deg: f64,
}

impl BindingConfig {
    /// Desk-scale defaults: 240 ns run, 120 ns learning, trailing 100 ns
    /// phase window on the frozen crossbar, 0.1 ps steps decimated to 1 ps,
    /// a narrowband pickup into a saturating buffer with a 250 mV swing and
    /// an output tank, midpoint spike threshold. The pickup bandwidth sits
    /// well under the post locking range, so the drive phase a post sees is
    /// the averaged row phase rather than the instantaneous thermal wander.
    pub fn reference(operating_frequency: f64) -> Self {
        BindingConfig {
            duration: 240e-9,
            learning_window: 120e-9,
            phase_window: 100e-9,
            dt: 1e-13,
            decimate: 10,
            operating_frequency,
            i_read: 1.0e-2,
            row_q: 600.0,
            row_limit_v: 0.25,
            row_tank_q: 10.0,
            row_phase_deg: 78.0,
            spike_threshold_ohms: 2000.0,
            refractory_fraction: 0.25,
            learning_enabled: true,
            revoke_at: None,
            resolve_within_deg: 45.0,
            resolve_cross_deg: 135.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(CoreError::invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.decimate == 0 {
            return Err(CoreError::invalid("decimate", "must be >= 1".to_string()));
        }
        if !(self.operating_frequency > 0.0) || !self.operating_frequency.is_finite() {
            return Err(CoreError::invalid(
                "operating_frequency",
                format!("must be > 0, got {}", self.operating_frequency),
            ));
        }
        let period_steps = 1.0 / (self.operating_frequency * self.dt);
        if period_steps < 20.0 {
            return Err(CoreError::invalid(
                "dt",
                format!("only {period_steps:.1} steps per operating period, need >= 20"),
            ));
        }
        if self.operating_frequency * self.dt * self.decimate as f64 >= 0.5 {
            return Err(CoreError::invalid(
                "decimate",
                "operating frequency above the recorded Nyquist rate".to_string(),
            ));
        }
        if !(self.duration > 0.0) || self.learning_window < 0.0 {
            return Err(CoreError::invalid(
                "duration",
                "duration must be > 0 and learning_window >= 0".to_string(),
            ));
        }
        if self.learning_window > self.duration {
            return Err(CoreError::invalid(
                "learning_window",
                "cannot outlast the run".to_string(),
            ));
        }
        if !(self.phase_window > 0.0) {
            return Err(CoreError::invalid("phase_window", "must be > 0".to_string()));
        }
        // The measurement window must sit entirely on the frozen crossbar.
        if self.duration - self.phase_window < self.learning_window {
            return Err(CoreError::invalid(
                "phase_window",
                "overlaps the learning window".to_string(),
            ));
        }
        if let Some(r) = self.revoke_at {
            if !r.is_finite() || r < self.learning_window {
                return Err(CoreError::invalid(
                    "revoke_at",
                    format!("must be finite and at or after the learning window, got {r}"),
                ));
            }
        }
        if !(self.i_read > 0.0) || !self.i_read.is_finite() {
            return Err(CoreError::invalid("i_read", format!("must be > 0, got {}", self.i_read)));
        }
        if !(self.row_q > 0.0) || !self.row_q.is_finite() {
            return Err(CoreError::invalid("row_q", format!("must be > 0, got {}", self.row_q)));
        }
        if !(self.row_limit_v > 0.0) || !self.row_limit_v.is_finite() {
            return Err(CoreError::invalid(
                "row_limit_v",
                format!("must be > 0, got {}", self.row_limit_v),
            ));
        }
        if !(self.row_tank_q > 0.0) || !self.row_tank_q.is_finite() {
            return Err(CoreError::invalid(
                "row_tank_q",
                format!("must be > 0, got {}", self.row_tank_q),
            ));
        }
        if !self.row_phase_deg.is_finite() {
            return Err(CoreError::invalid(
                "row_phase_deg",
                format!("must be finite, got {}", self.row_phase_deg),
            ));
        }
        if !self.spike_threshold_ohms.is_finite() {
            return Err(CoreError::invalid("spike_threshold_ohms", "must be finite".to_string()));
        }
        if !(self.refractory_fraction > 0.0 && self.refractory_fraction < 1.0) {
            return Err(CoreError::invalid(
                "refractory_fraction",
                format!("must be in (0, 1), got {}", self.refractory_fraction),
            ));
        }
        if !(self.resolve_within_deg > 0.0
            && self.resolve_within_deg < self.resolve_cross_deg
            && self.resolve_cross_deg < 180.0)
        {
            return Err(CoreError::invalid(
                "resolve_within_deg",
                "need 0 < within < cross < 180".to_string(),
            ));
        }
        Ok(())
    }
}

/// Which post neuron bound to the zero-phase group (group 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigurationLabel {
    PostA,
    PostB,
    Unresolved,
}

impl ConfigurationLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConfigurationLabel::PostA => "post_a",
            ConfigurationLabel::PostB => "post_b",
            ConfigurationLabel::Unresolved => "unresolved",
        }
    }
}

/// Crossbar state over the run, sampled on the trace grid.
#[derive(Debug, Clone)]
pub struct WeightTrajectory {
    pub t: Vec<f64>,
    /// Row-major resistances [r00, r01, r10, r11], ohms.
    pub r_ohms: Vec<[f64; ROWS * COLS]>,
}

/// Everything one binding run produces.
#[derive(Debug, Clone)]
pub struct BindingResult {
    /// MR trace per device, topology index order.
    pub mr: Vec<TimeSeries>,
    /// Net HM drive current per post neuron.
    pub post_drive: Vec<TimeSeries>,
    pub weights: WeightTrajectory,
    /// Spike trains in history-slot order: group representatives, then
    /// posts.
    pub spikes: Vec<SpikeTrain>,
    /// Signed pairwise phase at the operating bin over the trailing window,
    /// degrees; [i][j] is the phase of j relative to i, [j][i] its negative.
    pub phase_deg: Vec<Vec<f64>>,
    pub label: ConfigurationLabel,
    /// Mean in-group |phase| of the winning assignment (or the closer
    /// hypothesis when unresolved).
    pub within_mean_deg: f64,
    /// Mean |phase| of the opposite assignment's pairs.
    pub cross_mean_deg: f64,
    /// Learning events that moved at least one weight.
    pub updates_applied: usize,
    pub final_crossbar: Crossbar,
    pub final_m: Vec<Vec3>,
}

/// Read-bias voltage seen by a crossbar row: the MR trace scaled by the read
/// current, DC-blocked by a trailing one-window moving average. With
/// `window` covering one oscillation period the operating point is stripped
/// and the RF component survives. A lone characterization read uses a 50 uA
/// bias; the network run applies its configured bias.
pub fn pre_voltage(mr: &TimeSeries, i_read_a: f64, window: usize) -> Result<TimeSeries> {
    if !(i_read_a > 0.0) || !i_read_a.is_finite() {
        return Err(CoreError::invalid(
            "i_read_a",
            format!("must be > 0, got {i_read_a}"),
        ));
    }
    let hp = mr.high_passed(window)?;
    let values = hp.values.iter().map(|v| i_read_a * v).collect();
    Ok(TimeSeries::new(hp.t0, hp.dt, values)?.with_label("v_pre"))
}

/// Peak-to-peak amplitude over consecutive non-overlapping chunks of
/// `window` samples. A beating signal shows a wandering envelope; a locked
/// one flattens, so the variance of this series dropping over a run is the
/// signature of entrainment.
pub fn envelope_series(ts: &TimeSeries, window: usize) -> Result<TimeSeries> {
    if window < 2 {
        return Err(CoreError::invalid("window", "need >= 2 samples".to_string()));
    }
    let chunks = ts.len() / window;
    if chunks < 2 {
        return Err(CoreError::Analysis(format!(
            "{} samples give {chunks} envelope chunks, need >= 2",
            ts.len()
        )));
    }
    let mut out = Vec::with_capacity(chunks);
    for c in 0..chunks {
        let chunk = &ts.values[c * window..(c + 1) * window];
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for &v in chunk {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        out.push(hi - lo);
    }
    Ok(TimeSeries::new(ts.t0, ts.dt * window as f64, out)?.with_label("envelope_p2p"))
}

/// Trailing moving average with the same warmup behavior as
/// `TimeSeries::high_passed`: the mean spans what has arrived until the
/// window fills.
struct TrailingMean {
    buf: Vec<f64>,
    sum: f64,
    filled: usize,
    pos: usize,
}

impl TrailingMean {
    fn new(window: usize) -> Self {
        TrailingMean {
            buf: vec![0.0; window],
            sum: 0.0,
            filled: 0,
            pos: 0,
        }
    }

    /// Pushes a sample and returns the mean including it.
    fn push(&mut self, v: f64) -> f64 {
        if self.filled == self.buf.len() {
            self.sum -= self.buf[self.pos];
        } else {
            self.filled += 1;
        }
        self.buf[self.pos] = v;
        self.pos = (self.pos + 1) % self.buf.len();
        self.sum += v;
        self.sum / self.filled as f64
    }
}

/// Fixed line delay, zero-primed. A zero-length line passes through.
struct DelayLine {
    buf: Vec<f64>,
    pos: usize,
}

impl DelayLine {
    /// Delay realizing a carrier phase advance of `phase_deg`: the line is
    /// `(1 - phase_deg/360) mod 1` of a period long, rounded to whole steps.
    fn for_phase(phase_deg: f64, period_steps: usize) -> Self {
        let frac = (-phase_deg / 360.0).rem_euclid(1.0);
        let steps = (frac * period_steps as f64).round() as usize % period_steps.max(1);
        DelayLine { buf: vec![0.0; steps], pos: 0 }
    }

    fn push(&mut self, v: f64) -> f64 {
        if self.buf.is_empty() {
            return v;
        }
        let out = self.buf[self.pos];
        self.buf[self.pos] = v;
        self.pos = (self.pos + 1) % self.buf.len();
        out
    }
}

/// Online upward-crossing detector matching `extract_spikes` semantics:
/// linear interpolation, refractory suppression that does not reset the
/// clock.
struct SpikeDetector {
    prev: f64,
    last: f64,
    times: Vec<f64>,
}

impl SpikeDetector {
    fn new(first_sample: f64) -> Self {
        SpikeDetector {
            prev: first_sample,
            last: f64::NEG_INFINITY,
            times: Vec::new(),
        }
    }

    /// Feeds the sample at `t_new`; returns the crossing instant if this
    /// transition fired.
    fn feed(&mut self, v: f64, t_new: f64, dt: f64, threshold: f64, refractory: f64) -> Option<f64> {
        let fired = if self.prev < threshold && v >= threshold {
            let frac = (threshold - self.prev) / (v - self.prev);
            let t = t_new - dt + frac * dt;
            if t - self.last >= refractory {
                self.last = t;
                self.times.push(t);
                Some(t)
            } else {
                None
            }
        } else {
            None
        };
        self.prev = v;
        fired
    }
}

/// Runs the full coupled network. `devices` supplies the physics of each
/// node (topology index order); biases and injectors come from `topology`,
/// the initial array from `crossbar`. Each device draws thermal noise from
/// its own stream under `seed`, so the run is bit-reproducible.
pub fn simulate_binding(
    devices: &[DeviceState],
    topology: &NetworkTopology,
    crossbar: &Crossbar,
    config: &BindingConfig,
    seed: u64,
) -> Result<BindingResult> {
    config.validate()?;
    topology.validate()?;
    if topology.groups.len() != ROWS || topology.posts.len() != COLS {
        return Err(CoreError::invalid(
            "topology",
            format!(
                "crossbar is {ROWS}x{COLS}: need {ROWS} groups and {COLS} posts, got {} and {}",
                topology.groups.len(),
                topology.posts.len()
            ),
        ));
    }
    let n = topology.device_count();
    if devices.len() != n {
        return Err(CoreError::Mismatch(format!(
            "topology references {n} devices, got {}",
            devices.len()
        )));
    }

    let dt = config.dt;
    let steps = (config.duration / dt).round() as usize;
    let decimate = config.decimate;
    let period = 1.0 / config.operating_frequency;
    let period_steps = (period / dt).round().max(1.0) as usize;
    let refractory = config.refractory_fraction * period;
    let unit_s = 0.1 * period;
    let threshold = config.spike_threshold_ohms;
    let revoke_at = config.revoke_at.unwrap_or(f64::INFINITY);

    let mut devs: Vec<DeviceState> = devices.to_vec();
    let mut rngs: Vec<NoiseStream> = (0..n)
        .map(|d| NoiseStream::for_device(seed, d as u64))
        .collect();

    // Monitored devices, history-slot order: group representatives, posts.
    let reps: [usize; ROWS] = [topology.representative(0), topology.representative(1)];
    let posts: [usize; COLS] = [topology.posts[0].device, topology.posts[1].device];
    let monitored: [usize; ROWS + COLS] = [reps[0], reps[1], posts[0], posts[1]];
    let mut history = SpikeHistory::new(ROWS + COLS, 64)?;
    let mut xb = crossbar.clone();
    let mut updates_applied = 0usize;

    let mut tees: Vec<TrailingMean> = (0..ROWS).map(|_| TrailingMean::new(period_steps)).collect();
    let mut pickups: Vec<Resonator> = (0..ROWS)
        .map(|_| Resonator::new(config.operating_frequency, config.row_q, dt))
        .collect::<Result<_>>()?;
    let mut tanks: Vec<Resonator> = (0..ROWS)
        .map(|_| Resonator::new(config.operating_frequency, config.row_tank_q, dt))
        .collect::<Result<_>>()?;
    let mut trims: Vec<DelayLine> = (0..ROWS)
        .map(|_| DelayLine::for_phase(config.row_phase_deg, period_steps))
        .collect();
    let mut detectors: Vec<SpikeDetector> = monitored
        .iter()
        .map(|&d| SpikeDetector::new(devs[d].mr()))
        .collect();

    // Injector current on a group's line, gated by revocation. The gate is
    // inclusive at the cutoff so a cutoff at the final endpoint is a no-op.
    let injector_current = |g: usize, t: f64| -> f64 {
        if t <= revoke_at {
            topology.groups[g].injector.current_at(t)
        } else {
            0.0
        }
    };

    // Row voltages from the current readouts (sample 0 primes the tees).
    // Chain per row: bias tee strips the operating point, the narrowband
    // pickup keeps the averaged carrier, the saturating buffer pins the
    // envelope at its swing, the output tank restores a sine. With this
    // polarity a post settles in phase with the pre whose synapse dominates
    // its column.
    let limit = config.row_limit_v;
    let row_voltage = |pickup_out: f64| limit * (config.i_read * pickup_out / limit).tanh();
    let mut v_now = [0.0f64; ROWS];
    for r in 0..ROWS {
        let mr = devs[reps[r]].mr();
        let mean = tees[r].push(mr);
        v_now[r] = trims[r].push(tanks[r].process(row_voltage(pickups[r].process(mr - mean))));
    }

    let cap = steps / decimate + 1;
    let mut mr_rec: Vec<Vec<f64>> = vec![Vec::with_capacity(cap); n];
    let mut drive_rec: Vec<Vec<f64>> = vec![Vec::with_capacity(cap); COLS];
    let mut w_t: Vec<f64> = Vec::with_capacity(cap);
    let mut w_r: Vec<[f64; ROWS * COLS]> = Vec::with_capacity(cap);

    let weights_row = |xb: &Crossbar| -> [f64; ROWS * COLS] {
        let mut row = [0.0; ROWS * COLS];
        for r in 0..ROWS {
            for c in 0..COLS {
                row[r * COLS + c] = xb.resistance_ohms(r, c);
            }
        }
        row
    };

    // Sample 0.
    for (d, rec) in mr_rec.iter_mut().enumerate() {
        rec.push(devs[d].mr());
    }
    for (j, rec) in drive_rec.iter_mut().enumerate() {
        rec.push(topology.posts[j].i_dc + xb.post_ac_current(&v_now, j));
    }
    w_t.push(0.0);
    w_r.push(weights_row(&xb));

    let mut step_events: Vec<(f64, usize)> = Vec::with_capacity(ROWS + COLS);
    for k in 0..steps {
        let t = k as f64 * dt;
        let t_next = (k + 1) as f64 * dt;

        let mut i_post_start = [0.0f64; COLS];
        for (j, i) in i_post_start.iter_mut().enumerate() {
            *i = topology.posts[j].i_dc + xb.post_ac_current(&v_now, j);
        }

        for (g, group) in topology.groups.iter().enumerate() {
            let i_start = group.i_dc + injector_current(g, t);
            let i_end = group.i_dc + injector_current(g, t_next);
            for &d in &group.devices {
                let (dev, rng) = (&mut devs[d], &mut rngs[d]);
                dev.step(dt, i_start, i_end, rng).map_err(|e| {
                    CoreError::Analysis(format!("device {d} step {k} of {steps}: {e}"))
                })?;
            }
        }

        let mut v_next = [0.0f64; ROWS];
        for r in 0..ROWS {
            let mr = devs[reps[r]].mr();
            let mean = tees[r].push(mr);
            v_next[r] =
                trims[r].push(tanks[r].process(row_voltage(pickups[r].process(mr - mean))));
        }

        let mut i_post_end = [0.0f64; COLS];
        for (j, i) in i_post_end.iter_mut().enumerate() {
            *i = topology.posts[j].i_dc + xb.post_ac_current(&v_next, j);
        }
        for j in 0..COLS {
            let d = posts[j];
            let (dev, rng) = (&mut devs[d], &mut rngs[d]);
            dev.step(dt, i_post_start[j], i_post_end[j], rng).map_err(|e| {
                CoreError::Analysis(format!("device {d} step {k} of {steps}: {e}"))
            })?;
        }

        // Spikes this step, processed in time order so a pre firing just
        // before its post lands in the history first.
        step_events.clear();
        for (slot, det) in detectors.iter_mut().enumerate() {
            let v = devs[monitored[slot]].mr();
            if let Some(tc) = det.feed(v, t_next, dt, threshold, refractory) {
                step_events.push((tc, slot));
            }
        }
        step_events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(tc, slot) in step_events.iter() {
            history.record(slot, tc)?;
            if config.learning_enabled && tc < config.learning_window {
                let kind = if slot < ROWS {
                    EventKind::PreRow(slot)
                } else {
                    EventKind::PostColumn(slot - ROWS)
                };
                let moved = xb.apply_learning_event(
                    &LearningEvent { time_s: tc, kind },
                    &history,
                    unit_s,
                )?;
                if moved > 0 {
                    updates_applied += 1;
                }
            }
        }

        v_now = v_next;

        if (k + 1) % decimate == 0 {
            for (d, rec) in mr_rec.iter_mut().enumerate() {
                rec.push(devs[d].mr());
            }
            for (j, rec) in drive_rec.iter_mut().enumerate() {
                rec.push(i_post_end[j]);
            }
            w_t.push(t_next);
            w_r.push(weights_row(&xb));
        }
    }

    // Assemble traces with role names.
    let dt_rec = dt * decimate as f64;
    let mut names: Vec<String> = vec![String::new(); n];
    for (gi, g) in topology.groups.iter().enumerate() {
        for (k, &d) in g.devices.iter().enumerate() {
            names[d] = format!("group{gi}_pre{k}");
        }
    }
    for (pi, p) in topology.posts.iter().enumerate() {
        names[p.device] = format!("post{pi}");
    }
    let mr: Vec<TimeSeries> = mr_rec
        .into_iter()
        .enumerate()
        .map(|(d, vals)| {
            TimeSeries::new(0.0, dt_rec, vals).map(|ts| ts.with_label(format!("{}_mr_ohms", names[d])))
        })
        .collect::<Result<_>>()?;
    let post_drive: Vec<TimeSeries> = drive_rec
        .into_iter()
        .enumerate()
        .map(|(j, vals)| {
            TimeSeries::new(0.0, dt_rec, vals)
                .map(|ts| ts.with_label(format!("post{j}_drive_a")))
        })
        .collect::<Result<_>>()?;

    let slot_names = ["group0_rep", "group1_rep", "post0", "post1"];
    let spikes: Vec<SpikeTrain> = detectors
        .into_iter()
        .zip(slot_names)
        .map(|(det, name)| SpikeTrain {
            times: det.times,
            label: name.to_string(),
        })
        .collect();

    // Pairwise phases at the operating bin over the trailing window.
    let tail_start = config.duration - config.phase_window;
    let tails: Vec<TimeSeries> = mr
        .iter()
        .map(|ts| ts.tail_from(tail_start))
        .collect::<Result<_>>()?;
    let mut phase_deg = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let cs = cross_spectrum(&tails[i], &tails[j])?;
            let p = cs.phase_at(config.operating_frequency);
            phase_deg[i][j] = p;
            phase_deg[j][i] = wrap_deg(-p);
        }
    }

    // Score the two assignments by mean in-group |phase| between each pre
    // device and its hypothesized post.
    let score = |assign: [usize; ROWS]| -> f64 {
        let mut sum = 0.0;
        let mut count = 0;
        for (g, group) in topology.groups.iter().enumerate() {
            let p = posts[assign[g]];
            for &d in &group.devices {
                sum += phase_deg[d][p].abs();
                count += 1;
            }
        }
        sum / count as f64
    };
    let s_a = score([0, 1]);
    let s_b = score([1, 0]);
    let (label, within_mean_deg, cross_mean_deg) =
        if s_a < config.resolve_within_deg && s_b > config.resolve_cross_deg {
            (ConfigurationLabel::PostA, s_a, s_b)
        } else if s_b < config.resolve_within_deg && s_a > config.resolve_cross_deg {
            (ConfigurationLabel::PostB, s_b, s_a)
        } else {
            (ConfigurationLabel::Unresolved, s_a.min(s_b), s_a.max(s_b))
        };

    Ok(BindingResult {
        mr,
        post_drive,
        weights: WeightTrajectory { t: w_t, r_ohms: w_r },
        spikes,
        phase_deg,
        label,
        within_mean_deg,
        cross_mean_deg,
        updates_applied,
        final_crossbar: xb,
        final_m: devs.iter().map(|d| d.m).collect(),
    })
}

/// Cuts both injectors at `t_off` and lets the network coast for
/// `extension` more seconds on DC drive alone (the learned crossbar stays in
/// the circuit). The timeline up to `t_off` reproduces the plain binding run
/// bit for bit; with `t_off` at the base duration and no extension this is
/// exactly that run.
pub fn revoke_synchronization(
    devices: &[DeviceState],
    topology: &NetworkTopology,
    crossbar: &Crossbar,
    base: &BindingConfig,
    t_off: f64,
    extension: f64,
    seed: u64,
) -> Result<BindingResult> {
    base.validate()?;
    if !(t_off >= base.learning_window) || !t_off.is_finite() {
        return Err(CoreError::invalid(
            "t_off",
            format!(
                "revocation must come at or after the {} s learning window, got {t_off}",
                base.learning_window
            ),
        ));
    }
    if t_off > base.duration {
        return Err(CoreError::invalid(
            "t_off",
            format!("beyond the {} s base run, got {t_off}", base.duration),
        ));
    }
    if !(extension >= 0.0) || !extension.is_finite() {
        return Err(CoreError::invalid(
            "extension",
            format!("must be >= 0, got {extension}"),
        ));
    }
    let mut cfg = base.clone();
    cfg.duration = t_off + extension;
    cfg.revoke_at = Some(t_off);
    simulate_binding(devices, topology, crossbar, &cfg, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn config_validation_catches_bad_plans() {
        let good = BindingConfig::reference(5.0e9);
        good.validate().unwrap();
        let mut c = good.clone();
        c.learning_window = 200e-9;
        assert!(c.validate().is_err());
        let mut c = good.clone();
        c.phase_window = 140e-9; // overlaps learning
        assert!(c.validate().is_err());
        let mut c = good.clone();
        c.revoke_at = Some(100e-9); // inside learning
        assert!(c.validate().is_err());
        let mut c = good.clone();
        c.dt = 1e-10; // 2 steps per period
        assert!(c.validate().is_err());
        let mut c = good;
        c.refractory_fraction = 1.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn read_voltage_strips_dc_and_scales_with_bias() {
        // 2 kohm operating point with a 500 ohm swing read at 50 uA: the
        // surviving AC is a 25 mV sinusoid once the window has warmed up.
        let f: f64 = 5.0e9;
        let dt = 1e-12;
        let n = 4000;
        let period = (1.0 / (f * dt)).round() as usize;
        let vals: Vec<f64> = (0..n)
            .map(|i| 2000.0 + 500.0 * (TAU * f * i as f64 * dt).sin())
            .collect();
        let mr = TimeSeries::new(0.0, dt, vals).unwrap();
        let v = pre_voltage(&mr, 50e-6, period).unwrap();
        let tail = &v.values[4 * period..];
        let peak = tail.iter().cloned().fold(f64::MIN, f64::max);
        let mean: f64 = tail.iter().sum::<f64>() / tail.len() as f64;
        assert!((peak - 0.025).abs() < 0.05 * 0.025, "peak {peak}");
        assert!(mean.abs() < 1e-4 * 0.025, "residual DC {mean}");

        // Doubling the read bias doubles the voltage exactly.
        let v2 = pre_voltage(&mr, 100e-6, period).unwrap();
        for (a, b) in v.values.iter().zip(&v2.values) {
            assert_eq!(*b, 2.0 * *a);
        }
        assert!(pre_voltage(&mr, 0.0, period).is_err());
    }

    #[test]
    fn envelope_flattens_when_a_beat_resolves() {
        // First half: two equal tones beating. Second half: one tone. The
        // per-period peak-to-peak variance collapses.
        let dt = 1e-12;
        let f: f64 = 5.0e9;
        let period = (1.0 / (f * dt)).round() as usize;
        let n = 200 * period;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                if i < n / 2 {
                    (TAU * f * t).sin() + (TAU * 1.05 * f * t).sin()
                } else {
                    2.0 * (TAU * f * t).sin()
                }
            })
            .collect();
        let ts = TimeSeries::new(0.0, dt, vals).unwrap();
        let env = envelope_series(&ts, period).unwrap();
        let half = env.len() / 2;
        let var = |s: &[f64]| {
            let m = s.iter().sum::<f64>() / s.len() as f64;
            s.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / s.len() as f64
        };
        let early = var(&env.values[..half]);
        let late = var(&env.values[half + 2..]);
        assert!(
            early > 20.0 * late,
            "early {early:.3e} not above late {late:.3e}"
        );
    }

    fn smoke_setup() -> (Vec<DeviceState>, NetworkTopology, Crossbar, BindingConfig) {
        let topo = NetworkTopology::binding_reference(5.9e9, 1.6e-4);
        let devices = vec![DeviceState::reference(); topo.device_count()];
        let mut cfg = BindingConfig::reference(5.9e9);
        cfg.duration = 6e-9;
        cfg.learning_window = 4e-9;
        cfg.phase_window = 1.5e-9;
        (devices, topo, Crossbar::reference(), cfg)
    }

    #[test]
    fn short_run_is_deterministic_and_bounded() {
        let (devices, topo, xb, cfg) = smoke_setup();
        let a = simulate_binding(&devices, &topo, &xb, &cfg, 11).unwrap();
        let b = simulate_binding(&devices, &topo, &xb, &cfg, 11).unwrap();
        assert_eq!(a.mr[0].values, b.mr[0].values);
        assert_eq!(a.mr[5].values, b.mr[5].values);
        assert_eq!(a.weights.r_ohms, b.weights.r_ohms);
        assert_eq!(a.updates_applied, b.updates_applied);
        let c = simulate_binding(&devices, &topo, &xb, &cfg, 12).unwrap();
        assert_ne!(a.mr[0].values, c.mr[0].values);

        // Conductance bounds hold along the whole trajectory.
        for row in &a.weights.r_ohms {
            for &r in row {
                assert!((2500.0..=25_000.0).contains(&r), "resistance {r}");
            }
        }
        // Traces cover the run on the decimated grid.
        assert_eq!(a.mr.len(), 6);
        assert_eq!(a.mr[0].len(), 6001);
        assert_eq!(a.post_drive.len(), 2);
        assert_relative_eq!(a.post_drive[0].values[0], 1.6e-4, max_relative = 1e-9);
        assert_eq!(a.phase_deg.len(), 6);
        for i in 0..6 {
            assert_eq!(a.phase_deg[i][i], 0.0);
        }
        assert_eq!(a.final_m.len(), 6);
        assert_eq!(a.spikes.len(), 4);
        // Oscillating devices spike near the carrier rate.
        assert!(a.spikes[0].len() > 10, "{} spikes", a.spikes[0].len());
    }

    #[test]
    fn revocation_at_the_end_is_a_no_op() {
        let (devices, topo, xb, cfg) = smoke_setup();
        let base = simulate_binding(&devices, &topo, &xb, &cfg, 5).unwrap();
        let revoked =
            revoke_synchronization(&devices, &topo, &xb, &cfg, cfg.duration, 0.0, 5).unwrap();
        for d in 0..6 {
            assert_eq!(base.mr[d].values, revoked.mr[d].values);
        }
        assert_eq!(base.weights.r_ohms, revoked.weights.r_ohms);
        assert_eq!(base.final_m, revoked.final_m);
    }

    #[test]
    fn revocation_validation() {
        let (devices, topo, xb, cfg) = smoke_setup();
        // Before the learning window closes: rejected.
        assert!(
            revoke_synchronization(&devices, &topo, &xb, &cfg, 1e-9, 2e-9, 5).is_err()
        );
        // Beyond the base run: rejected.
        assert!(
            revoke_synchronization(&devices, &topo, &xb, &cfg, 10e-9, 2e-9, 5).is_err()
        );
    }

    #[test]
    fn device_count_mismatch_rejected() {
        let (mut devices, topo, xb, cfg) = smoke_setup();
        devices.pop();
        assert!(simulate_binding(&devices, &topo, &xb, &cfg, 1).is_err());
    }
}
