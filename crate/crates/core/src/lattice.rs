//! Period-lattice geometry and overflow-safe reciprocal trig helpers.

use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute distance inside which evaluation at a pole is refused.
pub const POLE_GUARD: f64 = 1e-6;

/// Nearest point of `offset + Z + Z tau` to `z`, with its distance.
pub fn nearest_lattice_point(z: Complex64, tau: Complex64, offset: Complex64) -> (Complex64, f64) {
    let w = z - offset;
    let y = w.im / tau.im;
    let x = w.re - y * tau.re;
    let (m0, n0) = (y.round() as i64, x.round() as i64);
    let mut best = (offset, f64::INFINITY);
    for m in (m0 - 2)..=(m0 + 2) {
        for n in (n0 - 2)..=(n0 + 2) {
            let p = offset + tau * m as f64 + n as f64;
            let d = (z - p).norm();
            if d < best.1 {
                best = (p, d);
            }
        }
    }
    best
}

/// Distance from `z` to the nearest lattice point other than `exclude`
/// (itself a lattice point), scanning `|mu|, |nu| <= 3` around it.
pub fn nearest_other_lattice_distance(z: Complex64, tau: Complex64, exclude: Complex64) -> f64 {
    let mut best = f64::INFINITY;
    for m in -3i64..=3 {
        for n in -3i64..=3 {
            let p = exclude + tau * m as f64 + n as f64;
            if m == 0 && n == 0 {
                continue;
            }
            best = best.min((z - p).norm());
        }
    }
    best
}

/// `csc(w)` written so that neither exponential can overflow.
pub(crate) fn csc(w: Complex64) -> Complex64 {
    if w.im >= 0.0 {
        let e = (I * w).exp();
        2.0 * I * e / (e * e - 1.0)
    } else {
        let e = (-I * w).exp();
        2.0 * I * e / (1.0 - e * e)
    }
}

/// `cot(w)` written so that neither exponential can overflow.
pub(crate) fn cot(w: Complex64) -> Complex64 {
    if w.im >= 0.0 {
        let e2 = (2.0 * I * w).exp();
        I * (e2 + 1.0) / (e2 - 1.0)
    } else {
        let e2 = (-2.0 * I * w).exp();
        I * (1.0 + e2) / (1.0 - e2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_point_on_skewed_lattice() {
        let tau = Complex64::new(0.3, 1.5);
        let target = tau * 2.0 - 3.0;
        let (p, d) = nearest_lattice_point(target + Complex64::new(0.01, -0.02), tau, Complex64::new(0.0, 0.0));
        assert!((p - target).norm() < 1e-14);
        assert!((d - (0.01f64.hypot(0.02))).abs() < 1e-14);
    }

    #[test]
    fn offset_lattice() {
        let tau = Complex64::new(0.0, 2.0);
        let half = tau / 2.0;
        let (_, d) = nearest_lattice_point(half + 1.0, tau, half);
        assert!(d < 1e-15);
    }

    #[test]
    fn stable_trig_matches_direct() {
        for w in [
            Complex64::new(0.3, 0.2),
            Complex64::new(-1.2, -0.7),
            Complex64::new(0.7, 3.0),
            Complex64::new(0.1, -4.0),
        ] {
            assert!((csc(w) - 1.0 / w.sin()).norm() < 1e-14);
            assert!((cot(w) - w.cos() / w.sin()).norm() < 1e-14);
        }
        // far beyond the overflow range of sin/cos
        let far = csc(Complex64::new(0.25, 800.0));
        assert!(far.norm() < 1e-300 && far.re.is_finite());
        assert!((cot(Complex64::new(0.25, 800.0)) + I).norm() < 1e-15);
    }
}
