//! Deterministic noise source for the thermal field.
//!
//! Every device in a run owns an independent stream derived from the run seed
//! and its device index, so traces are reproducible regardless of evaluation
//! order or thread count.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gaussian noise generator over a counter-based stream cipher.
///
/// Box-Muller produces samples in pairs; the spare is cached so cost per
/// sample is one `u64` draw plus occasional transcendentals.
pub struct NoiseStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NoiseStream {
    /// Stream for device `device_index` under run seed `seed`.
    ///
    /// The index goes into the cipher's stream word, so all devices share one
    /// key schedule but never overlap.
    pub fn for_device(seed: u64, device_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(device_index);
        NoiseStream { rng, spare: None }
    }

    /// One standard normal sample.
    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(s) = self.spare.take() {
            return s;
        }
        // Box-Muller on (0,1] uniforms; 1 - u keeps ln() away from 0.
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Raw uniform draw, for consumers that need non-Gaussian randomness.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = NoiseStream::for_device(42, 3);
        let mut b = NoiseStream::for_device(42, 3);
        for _ in 0..100 {
            assert_eq!(a.standard_normal(), b.standard_normal());
        }
    }

    #[test]
    fn device_streams_are_independent() {
        let mut a = NoiseStream::for_device(42, 0);
        let mut b = NoiseStream::for_device(42, 1);
        let matches = (0..1000)
            .filter(|_| a.standard_normal() == b.standard_normal())
            .count();
        assert_eq!(matches, 0);
    }

    #[test]
    fn moments_match_standard_normal() {
        let mut s = NoiseStream::for_device(7, 0);
        let n = 200_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x = s.standard_normal();
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean * mean;
        // Standard error of the mean is ~1/sqrt(n) = 2.2e-3.
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn tail_mass_is_plausible() {
        let mut s = NoiseStream::for_device(11, 0);
        let n = 100_000;
        let beyond_2 = (0..n).filter(|_| s.standard_normal().abs() > 2.0).count();
        let frac = beyond_2 as f64 / n as f64;
        // P(|Z| > 2) = 0.0455.
        assert!((frac - 0.0455).abs() < 0.005, "frac {frac}");
    }
}
