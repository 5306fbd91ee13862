//! Time-domain simulation of one oscillator device.

use crate::device::defaults;
use crate::device::drive::DriveSignal;
use crate::device::geometry::DeviceGeometry;
use crate::device::readout::MtjReadout;
use crate::error::{CoreError, Result};
use crate::magnetics::heun::heun_step;
use crate::magnetics::params::MaterialParams;
use crate::magnetics::thermal::thermal_field_sample;
use crate::rng::NoiseStream;
use crate::timeseries::TimeSeries;
use crate::vec3::Vec3;

/// A simulated neuron: the free-layer magnetization plus everything fixed
/// about the device. Cheap to clone; cloning forks the trajectory.
#[derive(Debug, Clone)]
pub struct DeviceState {
    pub geometry: DeviceGeometry,
    pub material: MaterialParams,
    pub readout: MtjReadout,
    /// Static applied field, A/m.
    pub h_ext: Vec3,
    /// Spin polarization axis of the HM-injected current.
    pub sigma_hat: Vec3,
    /// Fixed-layer axis for MR readout.
    pub pinned_axis: Vec3,
    pub m: Vec3,
    spin_gain: f64,
}

impl DeviceState {
    pub fn new(
        geometry: DeviceGeometry,
        material: MaterialParams,
        readout: MtjReadout,
        h_ext: Vec3,
    ) -> Result<Self> {
        geometry.validate()?;
        material.validate()?;
        readout.validate()?;
        let spin_gain = geometry.spin_gain();
        Ok(DeviceState {
            geometry,
            material,
            readout,
            h_ext,
            sigma_hat: defaults::spin_polarization(),
            pinned_axis: defaults::pinned_axis(),
            m: defaults::initial_magnetization(),
            spin_gain,
        })
    }

    /// The standard device at the default operating point: reference
    /// geometry, barrier-pinned anisotropy, canted 750 Oe in-plane field.
    pub fn reference() -> Self {
        let geometry = DeviceGeometry::reference();
        let demag = geometry
            .demag_factors()
            .expect("reference geometry is valid");
        let material = MaterialParams::reference(geometry.fm_volume_m3(), demag);
        Self::new(geometry, material, MtjReadout::reference(), defaults::applied_field())
            .expect("reference device is valid")
    }

    /// Current MR against the fixed layer, ohms.
    #[inline]
    pub fn mr(&self) -> f64 {
        self.readout.resistance(self.m, self.pinned_axis)
    }

    /// Advances one integration step. `i_c_start` and `i_c_end` are the HM
    /// charge current at the two stage times; the thermal field is drawn
    /// once here and held for both stages.
    #[inline]
    pub fn step(&mut self, dt: f64, i_c_start: f64, i_c_end: f64, rng: &mut NoiseStream) -> Result<()> {
        let h_th = thermal_field_sample(&self.material, dt, rng);
        self.m = heun_step(
            self.m,
            dt,
            &self.material,
            self.h_ext,
            self.sigma_hat,
            self.spin_gain * i_c_start,
            self.spin_gain * i_c_end,
            h_th,
        )?;
        Ok(())
    }
}

/// Sampling plan for a trace run.
#[derive(Debug, Clone, Copy)]
pub struct SimGrid {
    pub duration: f64,
    pub dt: f64,
    /// Record every `decimate`-th step (1 = every step).
    pub decimate: usize,
}

impl SimGrid {
    pub fn new(duration: f64, dt: f64, decimate: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(CoreError::invalid("dt", format!("must be > 0, got {dt}")));
        }
        if duration < 100.0 * dt {
            return Err(CoreError::invalid(
                "duration",
                format!("must cover at least 100 steps, got {duration} s at dt {dt}"),
            ));
        }
        if decimate == 0 {
            return Err(CoreError::invalid("decimate", "must be >= 1".to_string()));
        }
        Ok(SimGrid {
            duration,
            dt,
            decimate,
        })
    }

    /// Default desk-scale grid: 100 ns window, 0.1 ps steps, 1 ps samples.
    pub fn desk(duration: f64) -> Result<Self> {
        Self::new(duration, defaults::DT, defaults::DECIMATE)
    }

    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

/// Everything a trace run produces.
#[derive(Debug, Clone)]
pub struct TraceOutput {
    pub mr: TimeSeries,
    pub mx: TimeSeries,
    pub my: TimeSeries,
    pub mz: TimeSeries,
    pub hm_current: TimeSeries,
    /// Magnetization at the end of the run, for chaining phases.
    pub final_m: Vec3,
}

/// Integrates the device under `drive` for `grid.duration`, recording MR,
/// magnetization components and net HM current on the decimated grid.
/// Deterministic given the stream: identical (seed, stream) runs are
/// bit-identical.
pub fn simulate_trace_with(
    dev: &mut DeviceState,
    drive: &DriveSignal,
    grid: &SimGrid,
    rng: &mut NoiseStream,
) -> Result<TraceOutput> {
    drive.validate()?;
    let steps = grid.steps();
    let cap = steps / grid.decimate + 1;
    let mut mr = Vec::with_capacity(cap);
    let mut mx = Vec::with_capacity(cap);
    let mut my = Vec::with_capacity(cap);
    let mut mz = Vec::with_capacity(cap);
    let mut current = Vec::with_capacity(cap);

    let mut record = |dev: &DeviceState, i_now: f64| {
        mr.push(dev.mr());
        mx.push(dev.m.x);
        my.push(dev.m.y);
        mz.push(dev.m.z);
        current.push(i_now);
    };

    // The drive at each step's end is the next step's start; evaluate once.
    let mut i_start = drive.current_at(0.0);
    record(dev, i_start);
    for k in 0..steps {
        let t_end = (k + 1) as f64 * grid.dt;
        let i_end = drive.current_at(t_end);
        dev.step(grid.dt, i_start, i_end, rng).map_err(|e| {
            CoreError::Analysis(format!("step {k} of {steps}: {e}"))
        })?;
        i_start = i_end;
        if (k + 1) % grid.decimate == 0 {
            record(dev, i_end);
        }
    }
    drop(record);

    let dt_rec = grid.dt * grid.decimate as f64;
    Ok(TraceOutput {
        mr: TimeSeries::new(0.0, dt_rec, mr)?.with_label("mr_ohms"),
        mx: TimeSeries::new(0.0, dt_rec, mx)?.with_label("mx"),
        my: TimeSeries::new(0.0, dt_rec, my)?.with_label("my"),
        mz: TimeSeries::new(0.0, dt_rec, mz)?.with_label("mz"),
        hm_current: TimeSeries::new(0.0, dt_rec, current)?.with_label("hm_current_a"),
        final_m: dev.m,
    })
}

/// Convenience wrapper owning its stream: device index 0 under `seed`.
pub fn simulate_trace(
    dev: &mut DeviceState,
    drive: &DriveSignal,
    grid: &SimGrid,
    seed: u64,
) -> Result<TraceOutput> {
    let mut rng = NoiseStream::for_device(seed, 0);
    simulate_trace_with(dev, drive, grid, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::spectrum::{dominant_frequency, Spectrum};

    #[test]
    fn same_seed_bit_identical() {
        let drive = DriveSignal::dc(1.6e-4).with_ac(2.0e-5, 6.0e9, 0.3);
        let grid = SimGrid::new(5e-9, 1e-13, 10).unwrap();
        let mut d1 = DeviceState::reference();
        let mut d2 = DeviceState::reference();
        let a = simulate_trace(&mut d1, &drive, &grid, 42).unwrap();
        let b = simulate_trace(&mut d2, &drive, &grid, 42).unwrap();
        assert_eq!(a.mr.values, b.mr.values);
        assert_eq!(a.mz.values, b.mz.values);
        assert_eq!(a.final_m, b.final_m);
        let c = simulate_trace(&mut DeviceState::reference(), &drive, &grid, 43).unwrap();
        assert_ne!(a.mr.values, c.mr.values);
    }

    #[test]
    fn subthreshold_current_settles() {
        // T = 0 and a drive well under the oscillation threshold: the free
        // layer damps into a static state within 20 ns.
        let mut dev = DeviceState::reference();
        dev.material.temperature = 0.0;
        let grid = SimGrid::new(25e-9, 1e-13, 10).unwrap();
        let out = simulate_trace(&mut dev, &DriveSignal::dc(5.0e-5), &grid, 1).unwrap();
        let tail = out.mr.tail_from(20e-9).unwrap();
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for &v in &tail.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(hi - lo < 1.0, "MR still swinging {} ohms", hi - lo);
    }

    #[test]
    fn sustained_oscillation_has_single_dominant_peak() {
        // On the clean limit cycle (T = 0) the carrier must tower 10x over
        // every bin outside its own 3-bin leakage shoulder: no competing
        // mode, no strong harmonic.
        let mut dev = DeviceState::reference();
        dev.material.temperature = 0.0;
        let grid = SimGrid::new(100e-9, 1e-13, 10).unwrap();
        let out = simulate_trace(&mut dev, &DriveSignal::dc(1.6e-4), &grid, 7).unwrap();
        let tail = out.mr.tail_from(20e-9).unwrap();
        let spec = Spectrum::from_series(&tail).unwrap();
        let f = dominant_frequency(&spec).unwrap();
        assert!((5.0e9..6.6e9).contains(&f), "frequency {f}");
        let power: Vec<f64> = spec.bins.iter().map(|c| c.norm_sqr()).collect();
        let (k_peak, &p_peak) = power
            .iter()
            .enumerate()
            .skip(1)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        for (k, &p) in power.iter().enumerate().skip(1) {
            if (k as i64 - k_peak as i64).abs() > 3 {
                assert!(
                    p_peak > 10.0 * p,
                    "bin {k} power {p:.3e} within 10x of peak {p_peak:.3e}"
                );
            }
        }
        // With thermal noise on, the same bias still reads as one in-band
        // carrier even though the linewidth broadens.
        let mut warm = DeviceState::reference();
        let out = simulate_trace(&mut warm, &DriveSignal::dc(1.6e-4), &grid, 7).unwrap();
        let tail = out.mr.tail_from(20e-9).unwrap();
        let f_th = dominant_frequency(&Spectrum::from_series(&tail).unwrap()).unwrap();
        assert!((5.0e9..6.6e9).contains(&f_th), "thermal frequency {f_th}");
        assert!((f_th - f).abs() < 0.3e9, "thermal shift {}", f_th - f);
    }

    #[test]
    fn grid_validation() {
        assert!(SimGrid::new(5e-12, 1e-13, 1).is_err()); // under 100 steps
        assert!(SimGrid::new(1e-9, 0.0, 1).is_err());
        assert!(SimGrid::new(1e-9, 1e-13, 0).is_err());
        assert_eq!(SimGrid::new(1e-9, 1e-13, 10).unwrap().steps(), 10_000);
    }

    #[test]
    fn chained_runs_match_one_long_run() {
        // Splitting a deterministic run in two and carrying final_m over
        // reproduces the single long run sample for sample.
        let mut dev_a = DeviceState::reference();
        dev_a.material.temperature = 0.0;
        let mut dev_b = dev_a.clone();
        let drive = DriveSignal::dc(1.6e-4);
        let long = SimGrid::new(4e-9, 1e-13, 10).unwrap();
        let half = SimGrid::new(2e-9, 1e-13, 10).unwrap();
        let full = simulate_trace(&mut dev_a, &drive, &long, 0).unwrap();
        let first = simulate_trace(&mut dev_b, &drive, &half, 0).unwrap();
        assert_eq!(dev_b.m, first.final_m);
        let second = simulate_trace(&mut dev_b, &drive, &half, 0).unwrap();
        let n = first.mr.len();
        assert_eq!(full.mr.values[n - 1], *second.mr.values.first().unwrap());
        assert!(
            (full.mr.values[full.mr.len() - 1] - second.mr.values[second.mr.len() - 1]).abs()
                < 1e-9
        );
    }
}
