//! Frequency characterization: free-running curve, locking range, and
//! operating-point calibration.

use crate::device::drive::DriveSignal;
use crate::device::sim::{simulate_trace, DeviceState, SimGrid};
use crate::device::defaults;
use crate::error::{CoreError, Result};
use crate::signal::spectrum::{dominant_frequency, Spectrum};
use serde::{Deserialize, Serialize};

/// Windowing for characterization runs. The defaults give a 180 ns analysis
/// window after settling, i.e. 5.6 MHz resolution, inside the required
/// 10 MHz.
#[derive(Debug, Clone, Copy)]
pub struct CharacterizeOptions {
    pub duration: f64,
    /// Transient discarded before spectral analysis, s.
    pub settle: f64,
    pub dt: f64,
    pub decimate: usize,
    /// Peaks below this frequency read as drift, not oscillation.
    pub min_frequency: f64,
}

impl Default for CharacterizeOptions {
    fn default() -> Self {
        CharacterizeOptions {
            duration: 200e-9,
            settle: 20e-9,
            dt: defaults::DT,
            decimate: defaults::DECIMATE,
            min_frequency: 1e9,
        }
    }
}

impl CharacterizeOptions {
    /// A shorter window for sweep-heavy work; 10 MHz resolution exactly.
    pub fn quick() -> Self {
        CharacterizeOptions {
            duration: 120e-9,
            ..Self::default()
        }
    }

    fn grid(&self) -> Result<SimGrid> {
        SimGrid::new(self.duration, self.dt, self.decimate)
    }
}

/// Dominant MR frequency of the device under a given drive, after settling.
fn dominant_of_drive(
    dev: &DeviceState,
    drive: &DriveSignal,
    seed: u64,
    opts: &CharacterizeOptions,
) -> Result<f64> {
    let mut dev = dev.clone();
    let out = simulate_trace(&mut dev, drive, &opts.grid()?, seed)?;
    let tail = out.mr.tail_from(opts.settle)?;
    let f = dominant_frequency(&Spectrum::from_series(&tail)?)
        .map_err(|e| CoreError::Analysis(format!("no sustained oscillation: {e}")))?;
    if f < opts.min_frequency {
        return Err(CoreError::Analysis(format!(
            "no sustained oscillation: peak at {f:.3e} Hz is below the {:.3e} Hz floor",
            opts.min_frequency
        )));
    }
    Ok(f)
}

/// Free-running oscillation frequency at DC bias `i_dc`.
///
/// Simulates a zero-AC trace of at least 100 ns, discards the settling
/// transient, and reads the dominant periodogram peak. Errors when nothing
/// stands 10x over the spectral floor (no sustained oscillation).
pub fn free_running_frequency(
    dev: &DeviceState,
    i_dc: f64,
    seed: u64,
    opts: &CharacterizeOptions,
) -> Result<f64> {
    dominant_of_drive(dev, &DriveSignal::dc(i_dc), seed, opts)
}

/// One sweep point of a locking scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LockPoint {
    pub i_dc: f64,
    /// Dominant output frequency, absent when nothing oscillates.
    pub frequency: Option<f64>,
    pub locked: bool,
}

/// Contiguous locked interval of DC current, or the explicit no-lock result.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum LockInterval {
    Locked { i_min: f64, i_max: f64 },
    NoLock,
}

impl LockInterval {
    pub fn width(&self) -> f64 {
        match self {
            LockInterval::Locked { i_min, i_max } => i_max - i_min,
            LockInterval::NoLock => 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LockScan {
    pub f_injection: f64,
    pub ac_amplitude: f64,
    pub points: Vec<LockPoint>,
    pub interval: LockInterval,
}

/// Sweeps DC current under a fixed injected tone and reports where the
/// output locks to it.
///
/// A point is locked when its dominant output frequency matches the
/// injection within one analysis bin. The interval reported is the longest
/// contiguous locked run; an empty scan is the NoLock result, not an error.
pub fn locking_range(
    dev: &DeviceState,
    f_injection: f64,
    ac_amplitude: f64,
    i_dc_sweep: &[f64],
    seed: u64,
    opts: &CharacterizeOptions,
) -> Result<LockScan> {
    if i_dc_sweep.is_empty() {
        return Err(CoreError::invalid("i_dc_sweep", "empty sweep".to_string()));
    }
    let analysis_window = opts.duration - opts.settle;
    let bin = 1.0 / analysis_window;
    let mut points = Vec::with_capacity(i_dc_sweep.len());
    for &i_dc in i_dc_sweep {
        let drive = DriveSignal::dc(i_dc).with_ac(ac_amplitude, f_injection, 0.0);
        let frequency = match dominant_of_drive(dev, &drive, seed, opts) {
            Ok(f) => Some(f),
            Err(CoreError::Analysis(_)) => None,
            Err(e) => return Err(e),
        };
        let locked = frequency.map(|f| (f - f_injection).abs() <= bin).unwrap_or(false);
        points.push(LockPoint {
            i_dc,
            frequency,
            locked,
        });
    }
    // Longest contiguous locked run, first on ties.
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for i in 0..=points.len() {
        let locked = i < points.len() && points[i].locked;
        match (locked, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                let len = i - s;
                if best.map(|(bs, be)| len > be - bs + 1).unwrap_or(true) {
                    best = Some((s, i - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let interval = match best {
        Some((s, e)) => LockInterval::Locked {
            i_min: points[s].i_dc,
            i_max: points[e].i_dc,
        },
        None => LockInterval::NoLock,
    };
    Ok(LockScan {
        f_injection,
        ac_amplitude,
        points,
        interval,
    })
}

/// Result of pinning an operating point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub target_hz: f64,
    pub i_dc: f64,
    pub achieved_hz: f64,
}

/// Finds the DC current whose free-running frequency hits `target_hz` within
/// 20 MHz by bisection over `[i_lo, i_hi]`.
///
/// Evaluation runs at zero temperature so the search is deterministic and
/// idempotent; the thermal operating frequency tracks the T=0 one to well
/// inside the tolerance. Errors when the bracket does not straddle the
/// target.
pub fn calibrate(
    dev: &DeviceState,
    target_hz: f64,
    i_lo: f64,
    i_hi: f64,
    opts: &CharacterizeOptions,
) -> Result<CalibrationRecord> {
    const TOL_HZ: f64 = 20e6;
    let mut cold = dev.clone();
    cold.material.temperature = 0.0;
    let eval = |i: f64| free_running_frequency(&cold, i, 0, opts);
    let f_lo = eval(i_lo).map_err(|e| {
        CoreError::NoConvergence(format!("bracket edge {i_lo:.3e} A does not oscillate: {e}"))
    })?;
    let f_hi = eval(i_hi).map_err(|e| {
        CoreError::NoConvergence(format!("bracket edge {i_hi:.3e} A does not oscillate: {e}"))
    })?;
    for (i, f) in [(i_lo, f_lo), (i_hi, f_hi)] {
        if (f - target_hz).abs() < TOL_HZ {
            return Ok(CalibrationRecord {
                target_hz,
                i_dc: i,
                achieved_hz: f,
            });
        }
    }
    if (f_lo - target_hz).signum() == (f_hi - target_hz).signum() {
        return Err(CoreError::NoConvergence(format!(
            "target {target_hz:.4e} Hz not bracketed: f({i_lo:.3e}) = {f_lo:.4e}, f({i_hi:.3e}) = {f_hi:.4e}"
        )));
    }
    let (mut lo, mut hi, mut f_lo) = (i_lo, i_hi, f_lo);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if (f_mid - target_hz).abs() < TOL_HZ {
            return Ok(CalibrationRecord {
                target_hz,
                i_dc: mid,
                achieved_hz: f_mid,
            });
        }
        if (f_mid - target_hz).signum() == (f_lo - target_hz).signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < 1e-12 {
            break;
        }
    }
    Err(CoreError::NoConvergence(format!(
        "bisection stalled short of {target_hz:.4e} Hz (interval [{lo:.6e}, {hi:.6e}] A)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CharacterizeOptions {
        CharacterizeOptions::default()
    }

    #[test]
    fn in_band_frequency_near_expected_point() {
        let dev = DeviceState::reference();
        let f = free_running_frequency(&dev, 1.6e-4, 11, &opts()).unwrap();
        assert!(
            (5.7e9..6.1e9).contains(&f),
            "159 uA should sit near 5.9 GHz, got {f:.4e}"
        );
    }

    #[test]
    fn frequency_decreases_with_current_in_band() {
        let dev = DeviceState::reference();
        let fs: Vec<f64> = [1.5e-4, 1.7e-4, 1.9e-4]
            .iter()
            .map(|&i| free_running_frequency(&dev, i, 3, &opts()).unwrap())
            .collect();
        assert!(fs[0] > fs[1] && fs[1] > fs[2], "not monotone: {fs:?}");
    }

    #[test]
    fn seed_spread_under_one_percent() {
        let dev = DeviceState::reference();
        let fs: Vec<f64> = (0..6)
            .map(|s| free_running_frequency(&dev, 1.6e-4, s, &opts()).unwrap())
            .collect();
        let mean = fs.iter().sum::<f64>() / fs.len() as f64;
        let var = fs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / fs.len() as f64;
        let rsd = var.sqrt() / mean;
        assert!(rsd < 0.01, "RSD {rsd:.4} over {fs:?}");
    }

    #[test]
    fn no_oscillation_below_threshold() {
        let mut dev = DeviceState::reference();
        dev.material.temperature = 0.0;
        let err = free_running_frequency(&dev, 5.0e-5, 0, &opts());
        assert!(err.is_err(), "got {err:?}");
    }

    #[test]
    fn calibration_hits_target_and_repeats() {
        let dev = DeviceState::reference();
        let a = calibrate(&dev, 5.5e9, 1.4e-4, 2.1e-4, &opts()).unwrap();
        assert!((a.achieved_hz - 5.5e9).abs() < 20e6);
        let b = calibrate(&dev, 5.5e9, 1.4e-4, 2.1e-4, &opts()).unwrap();
        assert_eq!(a.i_dc, b.i_dc, "calibration must be idempotent");
    }

    #[test]
    fn calibration_rejects_unreachable_target() {
        let dev = DeviceState::reference();
        // Far above the top of the band: both bracket edges sit below it.
        let err = calibrate(&dev, 9.0e9, 1.4e-4, 2.1e-4, &opts());
        assert!(matches!(err, Err(CoreError::NoConvergence(_))), "got {err:?}");
    }

    #[test]
    fn zero_amplitude_locks_nowhere_off_frequency() {
        // No injection and a sweep whose free-running frequencies all miss
        // the target: the scan must answer NoLock rather than erroring.
        let dev = DeviceState::reference();
        let scan = locking_range(
            &dev,
            6.5e9,
            0.0,
            &[1.6e-4, 1.8e-4, 2.0e-4],
            5,
            &CharacterizeOptions::quick(),
        )
        .unwrap();
        assert!(matches!(scan.interval, LockInterval::NoLock));
        assert_eq!(scan.points.len(), 3);
        assert!(scan.points.iter().all(|p| !p.locked));
        assert_eq!(scan.interval.width(), 0.0);
    }
}
