//! Scratch scans for pinning operating points. Not part of the library.

use spinsync_core::device::characterize::{
    calibrate, free_running_frequency, locking_range, CharacterizeOptions,
};
use spinsync_core::device::sim::DeviceState;
use spinsync_core::network::binding::{
    envelope_series, revoke_synchronization, simulate_binding, BindingConfig,
};
use spinsync_core::signal::spectrum::{dominant_frequency, Spectrum};
use spinsync_core::{Crossbar, NetworkTopology};

const F_OP: f64 = 5.0e9;
const I_CAL: f64 = 192.81e-6;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("band");
    let dev = DeviceState::reference();
    let opts = CharacterizeOptions::quick();

    match mode {
        "band" => {
            for k in 0..15 {
                let i = 140e-6 + k as f64 * 5e-6;
                match free_running_frequency(&dev, i, 1, &opts) {
                    Ok(f) => println!("i_dc {:.1} uA -> {:.4} GHz", i * 1e6, f * 1e-9),
                    Err(e) => println!("i_dc {:.1} uA -> {e}", i * 1e6),
                }
            }
        }
        "band0" => {
            let mut cold = dev.clone();
            cold.material.temperature = 0.0;
            for k in 0..22 {
                let i = 120e-6 + k as f64 * 5e-6;
                match free_running_frequency(&cold, i, 1, &opts) {
                    Ok(f) => println!("i_dc {:.1} uA -> {:.4} GHz", i * 1e6, f * 1e-9),
                    Err(e) => println!("i_dc {:.1} uA -> {e}", i * 1e6),
                }
            }
        }
        "lock65" => {
            let sweep: Vec<f64> = (0..61).map(|k| 150e-6 + k as f64 * 1e-6).collect();
            for amp_ua in [50.0, 100.0, 150.0, 200.0, 250.0] {
                let scan =
                    locking_range(&dev, 6.5e9, amp_ua * 1e-6, &sweep, 3, &opts).unwrap();
                println!(
                    "amp {:5.1} uA  interval {:?}  width {:.2} uA",
                    amp_ua,
                    scan.interval,
                    scan.interval.width() * 1e6
                );
            }
        }
        "lock705" => {
            let sweep: Vec<f64> = (0..26).map(|k| 140e-6 + k as f64 * 2.5e-6).collect();
            for amp_ua in [50.0, 100.0, 250.0] {
                let scan =
                    locking_range(&dev, 7.05e9, amp_ua * 1e-6, &sweep, 3, &opts).unwrap();
                println!(
                    "amp {:5.1} uA  interval {:?}  width {:.2} uA",
                    amp_ua,
                    scan.interval,
                    scan.interval.width() * 1e6
                );
            }
        }
        "cal" => {
            for target in [4.95e9, 5.0e9, 5.5e9, 6.0e9] {
                match calibrate(&dev, target, 1.4e-4, 2.05e-4, &opts) {
                    Ok(rec) => println!(
                        "target {:.3} GHz -> i_dc {:.3} uA (achieved {:.4} GHz)",
                        target * 1e-9,
                        rec.i_dc * 1e6,
                        rec.achieved_hz * 1e-9
                    ),
                    Err(e) => println!("target {:.3} GHz -> {e}", target * 1e-9),
                }
            }
        }
        "pair" => {
            // Two devices on one line, DC + injection, no crossbar: mean
            // |CPSD phase| at the injection bin across seeds.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            use spinsync_core::signal::cross::cross_spectrum;
            let grid = SimGrid::new(160e-9, 1e-13, 10).unwrap();
            let f_inj = 5.0e9;
            let i_dc = 192.81e-6;
            for amp_ua in [125.0, 250.0] {
                let drive = DriveSignal::dc(i_dc).with_ac(amp_ua * 1e-6, f_inj, 0.0);
                for run in 0..8 {
                    let mut a = DeviceState::reference();
                    let mut b = DeviceState::reference();
                    let mut ra = NoiseStream::for_device(run, 0);
                    let mut rb = NoiseStream::for_device(run, 1);
                    let ta = simulate_trace_with(&mut a, &drive, &grid, &mut ra).unwrap();
                    let tb = simulate_trace_with(&mut b, &drive, &grid, &mut rb).unwrap();
                    // Last 40 ns (the binding phase window) and the longer
                    // 100 ns tail, to separate slips from window effects.
                    let mut row = format!("amp {amp_ua:5.1} uA seed {run}");
                    for from in [120e-9, 60e-9] {
                        let xa = ta.mr.tail_from(from).unwrap();
                        let xb = tb.mr.tail_from(from).unwrap();
                        let cs = cross_spectrum(&xa, &xb).unwrap();
                        row.push_str(&format!("  tail{:.0} {:7.2}", 160e-9 / 1e-9 - from * 1e9, cs.phase_at(f_inj)));
                    }
                    println!("{row}");
                }
            }
        }
        "bind" => {
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let cfg = BindingConfig::reference(F_OP);
            let w0: f64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);
            let seed: u64 = std::env::args().nth(3).and_then(|s| s.parse().ok()).unwrap_or(0);
            let mut xb0 = Crossbar::reference();
            for r in 0..2 {
                for c in 0..2 {
                    xb0.set_normalized(r, c, w0);
                }
            }
            let t0 = std::time::Instant::now();
            let res = simulate_binding(&devices, &topo, &xb0, &cfg, seed).unwrap();
            println!("run took {:?}", t0.elapsed());
            println!("updates applied: {}", res.updates_applied);
            println!(
                "label {:?}  within {:.2} deg  cross {:.2} deg",
                res.label, res.within_mean_deg, res.cross_mean_deg
            );
            let xb = &res.final_crossbar;
            for r in 0..2 {
                println!(
                    "  R[{r}][0] = {:8.1} ohm   R[{r}][1] = {:8.1} ohm",
                    xb.resistance_ohms(r, 0),
                    xb.resistance_ohms(r, 1)
                );
            }
            for s in &res.spikes {
                println!("  {}: {} spikes", s.label, s.times.len());
            }
            // Phase matrix, upper triangle.
            for i in 0..6 {
                let row: Vec<String> = (0..6)
                    .map(|j| format!("{:7.1}", res.phase_deg[i][j]))
                    .collect();
                println!("  phase[{i}] {}", row.join(" "));
            }
            // Post drive amplitude and weight trajectory checkpoints.
            for j in 0..2 {
                let peak = res.post_drive[j].values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                println!("  post{j} drive peak {:.1} uA", peak * 1e6);
            }
            for t_ck in [30e-9, 60e-9, 90e-9, 120e-9] {
                let k = res
                    .weights
                    .t
                    .iter()
                    .position(|&t| t >= t_ck)
                    .unwrap_or(res.weights.t.len() - 1);
                let r = res.weights.r_ohms[k];
                println!(
                    "  t {:5.1} ns  R = [{:6.0} {:6.0} ; {:6.0} {:6.0}]",
                    res.weights.t[k] * 1e9, r[0], r[1], r[2], r[3]
                );
            }
            // Envelope variance over the learning window, first vs last third.
            let period = (1.0 / (F_OP * cfg.dt * cfg.decimate as f64)).round() as usize;
            for j in 0..2 {
                let env = envelope_series(&res.post_drive[j], period).unwrap();
                let upto = |t: f64| ((t / env.dt) as usize).min(env.len());
                let third = upto(cfg.learning_window / 3.0);
                let end = upto(cfg.learning_window);
                let var = |s: &[f64]| {
                    let m = s.iter().sum::<f64>() / s.len() as f64;
                    s.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / s.len() as f64
                };
                println!(
                    "  post{j} envelope var early {:.3e} late {:.3e}",
                    var(&env.values[..third]),
                    var(&env.values[end - third..end])
                );
            }
        }
        "postdc" => {
            // Entrainment vs post DC bias: committed diagonal crossbar,
            // learning off, trim 78, post i_dc offset from the row bias.
            let devices = vec![DeviceState::reference(); 6];
            let mut xb = Crossbar::reference();
            xb.set_normalized(0, 0, 1.0);
            xb.set_normalized(1, 0, 0.0);
            xb.set_normalized(0, 1, 0.0);
            xb.set_normalized(1, 1, 1.0);
            let mut cfg = BindingConfig::reference(F_OP);
            cfg.learning_enabled = false;
            for off_ua in [-7.5, -5.0, -2.5, 0.0, 2.5, 5.0] {
                let mut topo = NetworkTopology::binding_reference(F_OP, I_CAL);
                for p in topo.posts.iter_mut() {
                    p.i_dc = I_CAL + off_ua * 1e-6;
                }
                let (mut wsum, mut ok) = (0.0, 0);
                let mut row = format!("post dc {:+5.1} uA :", off_ua);
                for seed in 0..4u64 {
                    let res = simulate_binding(&devices, &topo, &xb, &cfg, seed).unwrap();
                    let tag = match res.label {
                        spinsync_core::ConfigurationLabel::PostA => "A",
                        spinsync_core::ConfigurationLabel::PostB => "B",
                        spinsync_core::ConfigurationLabel::Unresolved => "-",
                    };
                    row.push_str(&format!(" {tag}{:5.1}", res.within_mean_deg));
                    if tag == "A" {
                        wsum += res.within_mean_deg;
                        ok += 1;
                    }
                }
                if ok > 0 {
                    row.push_str(&format!("   resolved {}   mean within {:.2}", ok, wsum / ok as f64));
                }
                println!("{row}");
            }
        }
        "meanf" => {
            // Mean instantaneous frequency at 300 K from upward mean
            // crossings over the trailing 100 ns, per DC bias.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            let grid = SimGrid::new(240e-9, 1e-13, 10).unwrap();
            for i_ua in [180.0, 185.0, 190.0, 192.81, 195.0, 200.0] {
                let drive = DriveSignal::dc(i_ua * 1e-6);
                let mut row = format!("i_dc {i_ua:6.2} uA  f_mean per seed:");
                for run in 0..4 {
                    let mut a = DeviceState::reference();
                    let mut ra = NoiseStream::for_device(run, 3);
                    let ta = simulate_trace_with(&mut a, &drive, &grid, &mut ra).unwrap();
                    let tail = ta.mr.tail_from(140e-9).unwrap();
                    let m = tail.values.iter().sum::<f64>() / tail.values.len() as f64;
                    let mut crossings = 0usize;
                    for w in tail.values.windows(2) {
                        if w[0] < m && w[1] >= m {
                            crossings += 1;
                        }
                    }
                    let dur = (tail.values.len() - 1) as f64 * tail.dt;
                    row.push_str(&format!(" {:7.4}", crossings as f64 / dur * 1e-9));
                }
                println!("{row}");
            }
        }
        "drvspec" => {
            // Spectral content of the recorded post drive: top bins, DC of
            // the AC part, envelope spread.
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let mut xb = Crossbar::reference();
            xb.set_normalized(0, 0, 1.0);
            xb.set_normalized(1, 0, 0.0);
            xb.set_normalized(0, 1, 0.0);
            xb.set_normalized(1, 1, 1.0);
            let mut cfg = BindingConfig::reference(F_OP);
            cfg.learning_enabled = false;
            let res = simulate_binding(&devices, &topo, &xb, &cfg, 0).unwrap();
            let drv = res.post_drive[0].tail_from(140e-9).unwrap();
            let ac: Vec<f64> = drv.values.iter().map(|v| v - I_CAL).collect();
            let mean_ac = ac.iter().sum::<f64>() / ac.len() as f64;
            println!("AC mean {:.3} uA  (DC leak through the chain)", mean_ac * 1e6);
            let spec = Spectrum::from_series(
                &spinsync_core::TimeSeries::new(0.0, drv.dt, ac.clone()).unwrap(),
            )
            .unwrap();
            let mut mags: Vec<(f64, f64)> = spec
                .bins
                .iter()
                .enumerate()
                .map(|(k, c)| (k as f64 * spec.df, c.norm()))
                .collect();
            mags.sort_by(|a, b| b.1.total_cmp(&a.1));
            for (f, m) in mags.iter().take(12) {
                println!("  {:8.3} GHz  {:10.3e}", f * 1e-9, m);
            }
            // Per-period peak envelope spread.
            let period = (1.0 / (F_OP * drv.dt)).round() as usize;
            let peaks: Vec<f64> = ac
                .chunks(period)
                .filter(|c| c.len() == period)
                .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())))
                .collect();
            let pmin = peaks.iter().cloned().fold(f64::INFINITY, f64::min);
            let pmax = peaks.iter().cloned().fold(0.0f64, f64::max);
            let pmean = peaks.iter().sum::<f64>() / peaks.len() as f64;
            println!(
                "per-period peak: min {:.1} mean {:.1} max {:.1} uA over {} periods",
                pmin * 1e6,
                pmean * 1e6,
                pmax * 1e6,
                peaks.len()
            );
        }
        "replay" => {
            // Replay the exact recorded post drive into a fresh device outside
            // the loop. Separates loop machinery from drive content.
            use spinsync_core::rng::NoiseStream;
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let mut xb = Crossbar::reference();
            xb.set_normalized(0, 0, 1.0);
            xb.set_normalized(1, 0, 0.0);
            xb.set_normalized(0, 1, 0.0);
            xb.set_normalized(1, 1, 1.0);
            let mut cfg = BindingConfig::reference(F_OP);
            cfg.decimate = 1;
            cfg.learning_enabled = false;
            let demod = |vals: &[f64], t0: f64, dt: f64| {
                let w = 2.0 * std::f64::consts::PI * F_OP;
                let (mut re, mut im) = (0.0, 0.0);
                for (i, &v) in vals.iter().enumerate() {
                    let t = t0 + i as f64 * dt;
                    re += v * (w * t).cos();
                    im -= v * (w * t).sin();
                }
                im.atan2(re).to_degrees()
            };
            for seed in 0..2u64 {
                let res = simulate_binding(&devices, &topo, &xb, &cfg, seed).unwrap();
                let drv = &res.post_drive[0];
                let n_tail = (100e-9 / drv.dt).round() as usize;
                let tail_at = drv.values.len() - n_tail;
                let t_tail = drv.t0 + tail_at as f64 * drv.dt;
                let mut fresh = DeviceState::reference();
                let mut rng = NoiseStream::for_device(seed, 17);
                let mut mr_fresh = Vec::with_capacity(drv.values.len());
                mr_fresh.push(fresh.mr());
                for k in 0..drv.values.len() - 1 {
                    fresh
                        .step(cfg.dt, drv.values[k], drv.values[k + 1], &mut rng)
                        .unwrap();
                    mr_fresh.push(fresh.mr());
                }
                println!(
                    "seed {seed}  rep abs {:7.1}  drive abs {:7.1}  in-loop post abs {:7.1}  replayed fresh abs {:7.1}",
                    demod(&res.mr[0].values[tail_at..], t_tail, drv.dt),
                    demod(&drv.values[tail_at..], t_tail, drv.dt),
                    demod(&res.mr[4].values[tail_at..], t_tail, drv.dt),
                    demod(&mr_fresh[tail_at..], t_tail, drv.dt)
                );
            }
        }
        "abs2" => {
            // Absolute MR phase vs the drive clock for a standalone device at
            // the calibrated bias, clean sine drive, several amplitudes.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            let grid = SimGrid::new(240e-9, 1e-13, 10).unwrap();
            let demod = |s: &spinsync_core::TimeSeries, from: f64| {
                let tail = s.tail_from(from).unwrap();
                let w = 2.0 * std::f64::consts::PI * F_OP;
                let (mut re, mut im) = (0.0, 0.0);
                for (i, &v) in tail.values.iter().enumerate() {
                    let t = tail.t0 + i as f64 * tail.dt;
                    re += v * (w * t).cos();
                    im -= v * (w * t).sin();
                }
                im.atan2(re).to_degrees()
            };
            for amp_ua in [80.0, 110.0, 140.0, 175.0] {
                let drive = DriveSignal::dc(I_CAL).with_ac(amp_ua * 1e-6, F_OP, 0.0);
                let mut row = format!("amp {amp_ua:5.1} uA  abs phase per seed:");
                for run in 0..4 {
                    let mut a = DeviceState::reference();
                    let mut ra = NoiseStream::for_device(run, 0);
                    let ta = simulate_trace_with(&mut a, &drive, &grid, &mut ra).unwrap();
                    row.push_str(&format!(" {:7.1}", demod(&ta.mr, 140e-9)));
                }
                println!("{row}");
            }
        }
        "drvclean" => {
            // How clean is the post drive vs the absolute clock, and how much
            // of it is coherent? Baseline: free-running dominant-bin scatter.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            let grid = SimGrid::new(240e-9, 1e-13, 10).unwrap();
            let free = DriveSignal::dc(I_CAL);
            for run in 0..4 {
                let mut a = DeviceState::reference();
                let mut ra = NoiseStream::for_device(run, 0);
                let ta = simulate_trace_with(&mut a, &free, &grid, &mut ra).unwrap();
                let tail = ta.mr.tail_from(140e-9).unwrap();
                let f = dominant_frequency(&Spectrum::from_series(&tail).unwrap()).unwrap();
                println!("free-run seed {run}  f_dom {:.4} GHz", f * 1e-9);
            }
            let block_stats = |s: &spinsync_core::TimeSeries, from: f64| {
                let tail = s.tail_from(from).unwrap();
                let w = 2.0 * std::f64::consts::PI * F_OP;
                let block = (10e-9 / tail.dt).round() as usize;
                let mut zs: Vec<(f64, f64)> = Vec::new();
                let mut re = 0.0;
                let mut im = 0.0;
                for (i, &v) in tail.values.iter().enumerate() {
                    let t = tail.t0 + i as f64 * tail.dt;
                    re += v * (w * t).cos();
                    im -= v * (w * t).sin();
                    if (i + 1) % block == 0 {
                        zs.push((re, im));
                        re = 0.0;
                        im = 0.0;
                    }
                }
                let (sx, sy) = zs.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
                let msum: f64 = zs.iter().map(|(x, y)| (x * x + y * y).sqrt()).sum();
                let r = (sx * sx + sy * sy).sqrt() / msum;
                // Circular std of block phases.
                let n = zs.len() as f64;
                let (cx, cy) = zs.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
                    let m = (x * x + y * y).sqrt();
                    (a + x / m, b + y / m)
                });
                let rbar = ((cx / n).powi(2) + (cy / n).powi(2)).sqrt();
                let cstd = (-2.0 * rbar.ln()).sqrt().to_degrees();
                // Coherent amplitude: |mean phasor| * 2 / samples-per-block.
                let amp = (sx * sx + sy * sy).sqrt() / zs.len() as f64 * 2.0 / block as f64;
                (r, cstd, amp, sy.atan2(sx).to_degrees())
            };
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let mut xb = Crossbar::reference();
            xb.set_normalized(0, 0, 1.0);
            xb.set_normalized(1, 0, 0.0);
            xb.set_normalized(0, 1, 0.0);
            xb.set_normalized(1, 1, 1.0);
            let i_read: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1e4);
            let limit: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(0.25);
            for q in [600.0] {
                let mut cfg = BindingConfig::reference(F_OP);
                cfg.duration = 240e-9;
                cfg.phase_window = 100e-9;
                cfg.row_q = q;
                cfg.i_read = i_read;
                cfg.row_limit_v = limit;
                cfg.learning_enabled = false;
                for seed in 0..4u64 {
                    let res = simulate_binding(&devices, &topo, &xb, &cfg, seed).unwrap();
                    let (_, _, amp, a_drv) = block_stats(&res.post_drive[0], 140e-9);
                    let (_, cstd_mr, _, a_rep) = block_stats(&res.mr[0], 140e-9);
                    let (_, cstd_p, amp_p, a_post) = block_stats(&res.mr[4], 140e-9);
                    println!(
                        "q {q:4.0} seed {seed}  abs phase: rep {a_rep:7.1} (cstd {cstd_mr:5.1})  drive {a_drv:7.1}  post {a_post:7.1} (cstd {cstd_p:5.1})  drv-coh {:5.1} uA  post-coh {:5.1} ohm",
                        amp * 1e6,
                        amp_p
                    );
                }
            }
        }
        "chainphase" => {
            // Phase shift of the row transducer chain at the carrier: feed a
            // real locked-pre MR trace through bias tee + resonator + limiter
            // exactly as the binding loop does, CPSD input vs output.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            use spinsync_core::signal::cross::cross_spectrum;
            use spinsync_core::signal::resonator::Resonator;
            let q: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(25.0);
            let dt = 1e-13;
            let grid = SimGrid::new(240e-9, dt, 1).unwrap();
            let drive = DriveSignal::dc(I_CAL).with_ac(175e-6, F_OP, 0.0);
            let period = (1.0 / (F_OP * dt)).round() as usize;
            let i_read = 2.5e-3;
            let limit = 0.25;
            for run in 0..4 {
                let mut a = DeviceState::reference();
                let mut ra = NoiseStream::for_device(run, 0);
                let ta = simulate_trace_with(&mut a, &drive, &grid, &mut ra).unwrap();
                let mr = &ta.mr.values;
                let mut reso = Resonator::new(F_OP, q, dt).unwrap();
                let mut out = Vec::with_capacity(mr.len());
                let mut acc = 0.0;
                let mut window = std::collections::VecDeque::with_capacity(period);
                for &v in mr {
                    // Trailing one-period mean, as the binding loop's bias tee.
                    window.push_back(v);
                    acc += v;
                    if window.len() > period {
                        acc -= window.pop_front().unwrap();
                    }
                    let mean = acc / window.len() as f64;
                    let y = reso.process(v - mean);
                    out.push(limit * (i_read * y / limit).tanh());
                }
                let n_tail = (100e-9 / dt) as usize;
                let ts = |v: &[f64]| {
                    spinsync_core::TimeSeries::new(0.0, dt, v.to_vec()).unwrap()
                };
                let xa = ts(&mr[mr.len() - n_tail..]);
                let xo = ts(&out[out.len() - n_tail..]);
                let cs = cross_spectrum(&xa, &xo).unwrap();
                let peak = xo.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                println!(
                    "seed {run}  chain phase at carrier {:7.2} deg  out peak {:.3} V (x {:.0} uA thru g_max)",
                    cs.phase_at(F_OP),
                    peak,
                    peak * 4e-4 * 1e6
                );
            }
        }
        "clockpair" => {
            // Ceiling test for the crossbar chain: device A at the pre
            // injection level, device B directly driven by the same clock at
            // the post drive level. No transducer in between.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            use spinsync_core::signal::cross::cross_spectrum;
            let grid = SimGrid::new(240e-9, 1e-13, 10).unwrap();
            let drive_a = DriveSignal::dc(I_CAL).with_ac(175e-6, F_OP, 0.0);
            for amp_b_ua in [60.0, 100.0, 140.0, 175.0] {
                let drive_b = DriveSignal::dc(I_CAL).with_ac(amp_b_ua * 1e-6, F_OP, 0.0);
                let mut phases = Vec::new();
                for run in 0..8 {
                    let mut a = DeviceState::reference();
                    let mut b = DeviceState::reference();
                    let mut ra = NoiseStream::for_device(run, 0);
                    let mut rb = NoiseStream::for_device(run, 1);
                    let ta = simulate_trace_with(&mut a, &drive_a, &grid, &mut ra).unwrap();
                    let tb = simulate_trace_with(&mut b, &drive_b, &grid, &mut rb).unwrap();
                    let xa = ta.mr.tail_from(140e-9).unwrap();
                    let xb = tb.mr.tail_from(140e-9).unwrap();
                    phases.push(cross_spectrum(&xa, &xb).unwrap().phase_at(F_OP));
                }
                let mean = phases.iter().sum::<f64>() / phases.len() as f64;
                let absmean = phases.iter().map(|p| p.abs()).sum::<f64>() / phases.len() as f64;
                println!(
                    "amp_b {amp_b_ua:5.1} uA  mean {mean:7.2}  mean|.| {absmean:6.2}  per-seed {}",
                    phases.iter().map(|p| format!("{p:6.1}")).collect::<Vec<_>>().join(" ")
                );
            }
        }
        "lockq" => {
            // Single-device lock quality against the injector clock at 300 K:
            // circular spread of 10 ns block phases, fundamental amplitude,
            // and the dominant frequency with no injection.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            use spinsync_core::signal::spectrum::{dominant_frequency, Spectrum};
            let grid = SimGrid::new(160e-9, 1e-13, 10).unwrap();
            for (f_inj, i_dc) in [(5.0e9, 192.81e-6), (5.5e9, 176.563e-6), (6.0e9, 156.25e-6)] {
                for amp_ua in [0.0, 100.0, 175.0, 250.0] {
                    let drive = DriveSignal::dc(i_dc).with_ac(amp_ua * 1e-6, f_inj, 0.0);
                    let mut spread_sum = 0.0;
                    let mut amp_sum = 0.0;
                    let mut f_sum = 0.0;
                    let seeds = 3;
                    for seed in 0..seeds {
                        let mut d = DeviceState::reference();
                        let mut r = NoiseStream::for_device(seed, 0);
                        let tr = simulate_trace_with(&mut d, &drive, &grid, &mut r).unwrap();
                        let mr = tr.mr.tail_from(40e-9).unwrap();
                        let dt = mr.dt;
                        let block = (10e-9 / dt).round() as usize;
                        // Circular mean resultant of block phases; wandering
                        // phase -> short resultant.
                        let (mut cre, mut cim, mut amps) = (0.0f64, 0.0f64, Vec::new());
                        for chunk in mr.values.chunks(block) {
                            if chunk.len() < block {
                                break;
                            }
                            let (mut re, mut im) = (0.0f64, 0.0f64);
                            for (i, v) in chunk.iter().enumerate() {
                                let th = std::f64::consts::TAU * f_inj * (i as f64) * dt;
                                re += v * th.cos();
                                im += v * th.sin();
                            }
                            let n = chunk.len() as f64;
                            let a = 2.0 * (re * re + im * im).sqrt() / n;
                            amps.push(a);
                            let ph = im.atan2(re);
                            cre += ph.cos();
                            cim += ph.sin();
                        }
                        let nb = amps.len() as f64;
                        let resultant = (cre * cre + cim * cim).sqrt() / nb;
                        // Circular std in degrees.
                        spread_sum += (-2.0 * resultant.ln()).max(0.0).sqrt().to_degrees();
                        amp_sum += amps.iter().sum::<f64>() / nb;
                        f_sum += dominant_frequency(&Spectrum::from_series(&mr).unwrap()).unwrap();
                    }
                    println!(
                        "f {:.1} GHz i_dc {:6.2} uA amp {:5.1} uA: circ-std {:6.1} deg  fundamental {:5.0} ohm  dominant {:.3} GHz",
                        f_inj * 1e-9,
                        i_dc * 1e6,
                        amp_ua,
                        spread_sum / seeds as f64,
                        amp_sum / seeds as f64,
                        f_sum / seeds as f64 * 1e-9
                    );
                }
            }
        }
        "repamp" => {
            // Fundamental content of an injected pre's MR waveform, plus its
            // phase wander in 10 ns blocks: how much 5 GHz drive a row can
            // actually deliver downstream.
            use spinsync_core::device::drive::DriveSignal;
            use spinsync_core::device::sim::{simulate_trace_with, SimGrid};
            use spinsync_core::rng::NoiseStream;
            use spinsync_core::signal::resonator::Resonator;
            let grid = SimGrid::new(160e-9, 1e-13, 10).unwrap();
            let amp_ua: f64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(175.0);
            let q: f64 = std::env::args().nth(3).and_then(|s| s.parse().ok()).unwrap_or(25.0);
            let drive = DriveSignal::dc(I_CAL).with_ac(amp_ua * 1e-6, F_OP, 0.0);
            for seed in 0..3u64 {
                let mut d = DeviceState::reference();
                let mut r = NoiseStream::for_device(seed, 0);
                let tr = simulate_trace_with(&mut d, &drive, &grid, &mut r).unwrap();
                let raw = tr.mr.tail_from(40e-9).unwrap();
                let mean = raw.values.iter().sum::<f64>() / raw.values.len() as f64;
                let ac: Vec<f64> = raw.values.iter().map(|v| v - mean).collect();
                let filt = Resonator::new(F_OP, q, raw.dt).unwrap().filtered(&ac);
                let mr = spinsync_core::TimeSeries::new(raw.t0, raw.dt, filt).unwrap();
                // Complex demodulation at the injection frequency.
                let dt = mr.dt;
                let block = (10e-9 / dt).round() as usize;
                let mut amps = Vec::new();
                let mut phases = Vec::new();
                for chunk in mr.values.chunks(block) {
                    if chunk.len() < block {
                        break;
                    }
                    let (mut re, mut im) = (0.0f64, 0.0f64);
                    for (i, v) in chunk.iter().enumerate() {
                        let th = std::f64::consts::TAU * F_OP * (i as f64) * dt;
                        re += v * th.cos();
                        im += v * th.sin();
                    }
                    let n = chunk.len() as f64;
                    amps.push(2.0 * (re * re + im * im).sqrt() / n);
                    phases.push(im.atan2(re).to_degrees());
                }
                let amp_mean = amps.iter().sum::<f64>() / amps.len() as f64;
                let p2p = mr.values.iter().cloned().fold(f64::MIN, f64::max)
                    - mr.values.iter().cloned().fold(f64::MAX, f64::min);
                println!(
                    "seed {seed}: MR p2p {:.0} ohm, fundamental {:.0} ohm -> drive at g_max, i_read 250 uA: {:.1} uA",
                    p2p,
                    amp_mean,
                    4.0e-4 * 250e-6 * amp_mean * 1e6
                );
                println!("  block phases: {}", phases.iter().map(|p| format!("{p:6.1}")).collect::<Vec<_>>().join(" "));
            }
        }
        "lockcheck" => {
            // Committed diagonal crossbar, learning off: does the end state
            // entrain the posts, and at which read current?
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let i_read_ua: f64 =
                std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(2500.0);
            let q: f64 = std::env::args().nth(3).and_then(|s| s.parse().ok()).unwrap_or(25.0);
            let limit_v: f64 = std::env::args().nth(4).and_then(|s| s.parse().ok()).unwrap_or(0.25);
            let mut cfg = BindingConfig::reference(F_OP);
            cfg.duration = 240e-9;
            cfg.phase_window = 100e-9;
            cfg.i_read = i_read_ua * 1e-6;
            cfg.row_q = q;
            cfg.row_limit_v = limit_v;
            if let Some(p) = std::env::args().nth(5).and_then(|s| s.parse().ok()) {
                cfg.row_phase_deg = p;
            }
            cfg.learning_enabled = false;
            let mut xb = Crossbar::reference();
            xb.set_normalized(0, 0, 1.0);
            xb.set_normalized(1, 0, 0.0);
            xb.set_normalized(0, 1, 0.0);
            xb.set_normalized(1, 1, 1.0);
            use spinsync_core::signal::cross::cross_spectrum;
            for seed in 0..4u64 {
                let res = simulate_binding(&devices, &topo, &xb, &cfg, seed).unwrap();
                let peak = res.post_drive[0]
                    .values
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                // Split the pre-to-post offset into chain (rep MR -> drive)
                // and lock (drive -> post MR) legs over the phase window.
                let tail = |s: &spinsync_core::TimeSeries| s.tail_from(140e-9).unwrap();
                let rep = tail(&res.mr[0]);
                let drv = tail(&res.post_drive[0]);
                let post = tail(&res.mr[4]);
                let ph_chain = cross_spectrum(&rep, &drv).unwrap().phase_at(F_OP);
                let ph_lock = cross_spectrum(&drv, &post).unwrap().phase_at(F_OP);
                let f_post =
                    dominant_frequency(&Spectrum::from_series(&post).unwrap()).unwrap();
                println!(
                    "i_read {i_read_ua:5.1} uA seed {seed}  {:?}  within {:6.2}  cross {:7.2}  p0-g0 {:7.2}  chain {:7.2}  lock {:7.2}  f_post {:.4} GHz  drive peak {:5.1} uA",
                    res.label,
                    res.within_mean_deg,
                    res.cross_mean_deg,
                    res.phase_deg[4][0],
                    ph_chain,
                    ph_lock,
                    f_post * 1e-9,
                    peak * 1e6
                );
            }
        }
        "bind20" => {
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let cfg = BindingConfig::reference(F_OP);
            let mut counts = [0usize; 3];
            let (mut wsum, mut csum, mut resolved) = (0.0, 0.0, 0usize);
            for seed in 0..20u64 {
                let xb = Crossbar::untuned(seed);
                let res = simulate_binding(&devices, &topo, &xb, &cfg, seed).unwrap();
                let k = match res.label {
                    spinsync_core::ConfigurationLabel::PostA => 0,
                    spinsync_core::ConfigurationLabel::PostB => 1,
                    spinsync_core::ConfigurationLabel::Unresolved => 2,
                };
                counts[k] += 1;
                if k < 2 {
                    wsum += res.within_mean_deg;
                    csum += res.cross_mean_deg;
                    resolved += 1;
                }
                println!(
                    "seed {seed:2}  {:?}  within {:7.2}  cross {:7.2}  updates {}",
                    res.label, res.within_mean_deg, res.cross_mean_deg, res.updates_applied
                );
            }
            println!(
                "labels: post_a {} post_b {} unresolved {}",
                counts[0], counts[1], counts[2]
            );
            if resolved > 0 {
                println!(
                    "resolved means: within {:.2} deg cross {:.2} deg",
                    wsum / resolved as f64,
                    csum / resolved as f64
                );
            }
        }
        "revoke20" => {
            let topo = NetworkTopology::binding_reference(F_OP, I_CAL);
            let devices = vec![DeviceState::reference(); 6];
            let cfg = BindingConfig::reference(F_OP);
            let xb = Crossbar::reference();
            let mut phases = Vec::new();
            let mut freqs = Vec::new();
            for seed in 0..20u64 {
                let res = revoke_synchronization(
                    &devices, &topo, &xb, &cfg, cfg.duration, 80e-9, seed,
                )
                .unwrap();
                // Cross-group rep pair, signed phase at the old injection bin.
                let p = res.phase_deg[0][2];
                // Post-revocation dominant frequency of the group-0 rep.
                let tail = res.mr[0]
                    .tail_from(res.mr[0].duration() - 40e-9)
                    .unwrap();
                let f = dominant_frequency(&Spectrum::from_series(&tail).unwrap()).unwrap();
                println!("seed {seed:2}  cross phase {p:8.2} deg  f {:.4} GHz", f * 1e-9);
                phases.push(p);
                freqs.push(f);
            }
            let mean = phases.iter().sum::<f64>() / phases.len() as f64;
            let std = (phases.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>()
                / phases.len() as f64)
                .sqrt();
            let fmean = freqs.iter().sum::<f64>() / freqs.len() as f64;
            println!("phase std {std:.2} deg   mean dominant {:.4} GHz", fmean * 1e-9);
        }
        other => eprintln!("unknown mode {other}"),
    }
}
