//! Spectral and spike-domain synchrony measurement.

pub mod cross;
pub mod resonator;
pub mod spectrum;
pub mod spikes;

/// Wraps an angle in degrees into (-180, 180].
pub(crate) fn wrap_deg(mut d: f64) -> f64 {
    d %= 360.0;
    if d <= -180.0 {
        d += 360.0;
    } else if d > 180.0 {
        d -= 360.0;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::wrap_deg;

    #[test]
    fn wrapping_lands_in_half_open_range() {
        assert_eq!(wrap_deg(180.0), 180.0);
        assert_eq!(wrap_deg(-180.0), 180.0);
        assert_eq!(wrap_deg(540.0), 180.0);
        assert_eq!(wrap_deg(-190.0), 170.0);
        assert_eq!(wrap_deg(370.0), 10.0);
        for d in [-720.0, -359.9, -180.1, 0.0, 179.9, 359.9, 1234.5] {
            let w = wrap_deg(d);
            assert!(w > -180.0 && w <= 180.0, "{d} wrapped to {w}");
        }
    }
}
