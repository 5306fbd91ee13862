//! Demagnetization factors of a general ellipsoid.
//!
//! The flat in-plane element is approximated by the inscribed ellipsoid with
//! semi-axes (length/2, width/2, thickness/2). The factors are
//!
//!   N_i = (a b c / 2) * R_D(...,  axis_i^2)
//!
//! where R_D is Carlson's degenerate symmetric elliptic integral
//!
//!   R_D(x, y, z) = (3/2) * Int_0^inf dt / ((t+z) sqrt((t+x)(t+y)(t+z))).
//!
//! They are computed once at setup, never per step.

use crate::error::{CoreError, Result};

/// Carlson R_D by the standard duplication algorithm.
///
/// Converges for non-negative x, y and positive z; relative error here is
/// driven far below anything the physics can feel.
fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let sqrt_x = x.sqrt();
        let sqrt_y = y.sqrt();
        let sqrt_z = z.sqrt();
        let lambda = sqrt_x * sqrt_y + sqrt_y * sqrt_z + sqrt_z * sqrt_x;
        sum += fac / (sqrt_z * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mu = (x + y + 3.0 * z) / 5.0;
        let eps = (x - mu).abs().max((y - mu).abs()).max((z - mu).abs()) / mu;
        if eps < 1e-10 {
            // Fifth-order tail expansion about the converged mean point.
            let dx = (mu - x) / mu;
            let dy = (mu - y) / mu;
            let dz = (mu - z) / mu;
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let s = ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 9.0 / 52.0 * dz * ee)
                + dz * (1.0 / 6.0 * ee + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea));
            return sum * 3.0 + fac * (1.0 + s) / (mu * mu.sqrt());
        }
    }
}

/// Demagnetization factors (Nx, Ny, Nz) of an ellipsoid with semi-axes
/// (a, b, c) along the coordinate axes. Scale-invariant, so units cancel.
pub fn ellipsoid_demag_factors(a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(CoreError::invalid(
            "semi_axes",
            format!("all must be > 0, got ({a}, {b}, {c})"),
        ));
    }
    // Normalize to the geometric mean so the integrands stay near unity.
    let s = (a * b * c).powf(1.0 / 3.0);
    let (a, b, c) = (a / s, b / s, c / s);
    let coef = a * b * c / 3.0; // (abc/2) * (2/3) from R_D's 3/2 prefactor
    let nx = coef * carlson_rd(b * b, c * c, a * a);
    let ny = coef * carlson_rd(c * c, a * a, b * b);
    let nz = coef * carlson_rd(a * a, b * b, c * c);
    Ok((nx, ny, nz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_is_isotropic() {
        let (nx, ny, nz) = ellipsoid_demag_factors(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(nx, 1.0 / 3.0, max_relative = 1e-9);
        assert_relative_eq!(ny, 1.0 / 3.0, max_relative = 1e-9);
        assert_relative_eq!(nz, 1.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn factors_sum_to_one() {
        for (a, b, c) in [(50.0, 20.0, 0.5), (3.0, 2.0, 1.0), (1.0, 1.0, 100.0)] {
            let (nx, ny, nz) = ellipsoid_demag_factors(a, b, c).unwrap();
            assert_relative_eq!(nx + ny + nz, 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn prolate_spheroid_matches_closed_form() {
        // Prolate a > b = c with e = sqrt(1 - (b/a)^2):
        // Na = (1-e^2)/e^3 * (atanh(e) - e), Nb = Nc = (1 - Na)/2.
        let (a, b) = (5.0_f64, 1.0_f64);
        let e = (1.0 - (b / a) * (b / a)).sqrt();
        let na_exact = (1.0 - e * e) / (e * e * e) * (e.atanh() - e);
        let (na, nb, nc) = ellipsoid_demag_factors(a, b, b).unwrap();
        assert_relative_eq!(na, na_exact, max_relative = 1e-8);
        assert_relative_eq!(nb, (1.0 - na_exact) / 2.0, max_relative = 1e-8);
        assert_relative_eq!(nc, nb, max_relative = 1e-10);
    }

    #[test]
    fn oblate_spheroid_matches_closed_form() {
        // Oblate a = b > c: Nc = (1+e^2)/e^3 * (e - atan(e)) with
        // e = sqrt((a/c)^2 - 1) in this parametrization.
        let (a, c) = (4.0, 1.0);
        let e = ((a / c) * (a / c) - 1.0_f64).sqrt();
        let nc_exact = (1.0 + e * e) / (e * e * e) * (e - e.atan());
        let (na, nb, nc) = ellipsoid_demag_factors(a, a, c).unwrap();
        assert_relative_eq!(nc, nc_exact, max_relative = 1e-8);
        assert_relative_eq!(na, nb, max_relative = 1e-10);
        assert_relative_eq!(na, (1.0 - nc_exact) / 2.0, max_relative = 1e-8);
    }

    #[test]
    fn reference_element_factors() {
        // 100 x 40 x 1 nm element: thin and film-like, Nz near 1 and the
        // in-plane pair ordered Nx < Ny (long axis has least demag).
        let (nx, ny, nz) = ellipsoid_demag_factors(50.0, 20.0, 0.5).unwrap();
        assert_relative_eq!(nx, 5.657e-3, max_relative = 1e-3);
        assert_relative_eq!(ny, 2.240e-2, max_relative = 1e-3);
        assert_relative_eq!(nz, 9.7194e-1, max_relative = 1e-4);
        assert!(nx < ny && ny < nz);
    }
}
