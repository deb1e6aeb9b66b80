//! Deterministic z-points along an arithmetic progression, skipping anything
//! close to a pole.

use num_complex::Complex64;

use super::classical::classical_pole_distance;
use super::{CoprimePair, IdentityCase};
use crate::elliptic::EllipticContext;
use crate::lattice::nearest_lattice_point;

pub const SAMPLE_ORIGIN: Complex64 = Complex64::new(0.1234, 0.0567);
pub const SAMPLE_STEP: Complex64 = Complex64::new(0.0789, 0.0123);
/// Minimum distance from any pole of `Phi` or `Psi`.
pub const SAMPLE_CLEARANCE: f64 = 1e-3;

fn progression(seed_offset: Complex64, count: usize, accept: impl Fn(Complex64) -> bool) -> Vec<Complex64> {
    let start = SAMPLE_ORIGIN + seed_offset;
    (0..)
        .map(|j| start + SAMPLE_STEP * j as f64)
        .filter(|&z| accept(z))
        .take(count)
        .collect()
}

/// Distance from `z` to `(1/d)(Z + Z tau)`.
fn scaled_lattice_distance(z: Complex64, d: u64, tau: Complex64) -> f64 {
    let d = d as f64;
    nearest_lattice_point(z * d, tau, Complex64::new(0.0, 0.0)).1 / d
}

/// `count` points `z0 + j step` whose distance to `(1/a)L` and `(1/b)L` is at
/// least [`SAMPLE_CLEARANCE`]. Every factor of `Phi` and `Psi` has its poles
/// in that union.
pub fn sample_points(
    _case: IdentityCase,
    pair: CoprimePair,
    ctx: &EllipticContext,
    count: usize,
    seed_offset: Complex64,
) -> Vec<Complex64> {
    let tau = ctx.tau();
    progression(seed_offset, count, |z| {
        scaled_lattice_distance(z, pair.a(), tau) >= SAMPLE_CLEARANCE
            && scaled_lattice_distance(z, pair.b(), tau) >= SAMPLE_CLEARANCE
    })
}

/// Same progression, avoiding the real rationals with denominator `a` or `b`.
pub fn classical_sample_points(pair: CoprimePair, count: usize, seed_offset: Complex64) -> Vec<Complex64> {
    progression(seed_offset, count, |z| classical_pole_distance(pair, z) >= SAMPLE_CLEARANCE)
}
