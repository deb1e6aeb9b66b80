//! The five cotangent / cosecant identities and their reciprocity values,
//! evaluated with plain double-precision trigonometry.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::CoprimePair;
use crate::error::{Error, Result};
use crate::lattice::POLE_GUARD;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassicalCase {
    /// cot-cot sums, no parity condition.
    CotCot,
    /// Alternating cot-cot plus csc-cot; `a` even.
    AlternatingCot,
    /// Alternating cot-csc plus csc-csc; `a` odd.
    CotCsc,
    /// Alternating csc-cot on both sides; `a + b` even.
    CscCotEven,
    /// Alternating csc-csc on both sides; `a + b` odd.
    CscCscOdd,
}

#[derive(Clone, Copy)]
enum Kernel {
    Cot,
    Csc,
}

impl Kernel {
    fn eval(self, w: Complex64) -> Complex64 {
        match self {
            Kernel::Cot => w.cos() / w.sin(),
            Kernel::Csc => 1.0 / w.sin(),
        }
    }
}

/// `(alternating, coefficient kernel, moving kernel)` for one of the two sums.
type SumShape = (bool, Kernel, Kernel);

impl ClassicalCase {
    pub const ALL: [ClassicalCase; 5] = [
        ClassicalCase::CotCot,
        ClassicalCase::AlternatingCot,
        ClassicalCase::CotCsc,
        ClassicalCase::CscCotEven,
        ClassicalCase::CscCscOdd,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self> {
        Self::ALL
            .get(usize::from(id))
            .copied()
            .ok_or_else(|| Error::Config(format!("classical identity id must be 0..=4, got {id}")))
    }

    pub fn check(self, pair: CoprimePair) -> Result<()> {
        let (a, b) = (pair.a(), pair.b());
        let (ok, requirement) = match self {
            ClassicalCase::CotCot => (true, ""),
            ClassicalCase::AlternatingCot => (a % 2 == 0, "a even"),
            ClassicalCase::CotCsc => (a % 2 == 1, "a odd"),
            ClassicalCase::CscCotEven => ((a + b) % 2 == 0, "a+b even"),
            ClassicalCase::CscCscOdd => ((a + b) % 2 == 1, "a+b odd"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ParityViolation {
                case_id: self.id(),
                requirement,
                a,
                b,
            })
        }
    }

    fn shapes(self) -> (SumShape, SumShape) {
        use Kernel::*;
        match self {
            ClassicalCase::CotCot => ((false, Cot, Cot), (false, Cot, Cot)),
            ClassicalCase::AlternatingCot => ((true, Cot, Cot), (false, Csc, Cot)),
            ClassicalCase::CotCsc => ((true, Cot, Csc), (false, Csc, Csc)),
            ClassicalCase::CscCotEven => ((true, Csc, Cot), (true, Csc, Cot)),
            ClassicalCase::CscCscOdd => ((true, Csc, Csc), (true, Csc, Csc)),
        }
    }

    /// Right side as a function of `(a z, b z, z)` after the factor `pi`.
    fn rhs(self, pair: CoprimePair, z: Complex64) -> Complex64 {
        let (a, b) = (pair.a() as f64, pair.b() as f64);
        let (az, bz, pz) = (PI * a * z, PI * b * z, PI * z);
        let (cot, csc) = (|w| Kernel::Cot.eval(w), |w| Kernel::Csc.eval(w));
        let ab = a * b;
        match self {
            ClassicalCase::CotCot => -cot(az) * cot(bz) + csc(pz) * csc(pz) / ab - 1.0,
            ClassicalCase::AlternatingCot => -csc(az) * cot(bz) + csc(pz) * csc(pz) / ab,
            ClassicalCase::CotCsc => -csc(az) * cot(bz) + csc(pz) * cot(pz) / ab,
            ClassicalCase::CscCotEven => -csc(az) * csc(bz) + csc(pz) * csc(pz) / ab,
            ClassicalCase::CscCscOdd => -csc(az) * csc(bz) + csc(pz) * cot(pz) / ab,
        }
    }

    fn reciprocity_value(self, pair: CoprimePair) -> f64 {
        let (a, b) = (pair.a() as f64, pair.b() as f64);
        let (a2, b2, ab) = (a * a, b * b, a * b);
        match self {
            ClassicalCase::CotCot => (a2 + b2 + 1.0 - 3.0 * ab) / (3.0 * ab),
            ClassicalCase::AlternatingCot => (-a2 + 2.0 * b2 + 2.0) / (6.0 * ab),
            ClassicalCase::CotCsc => (-a2 + 2.0 * b2 - 1.0) / (6.0 * ab),
            ClassicalCase::CscCotEven => (-a2 - b2 + 2.0) / (6.0 * ab),
            ClassicalCase::CscCscOdd => (-a2 - b2 - 1.0) / (6.0 * ab),
        }
    }
}

/// `(1/d) sum_{nu=1}^{d-1} sign coef(pi e nu/d) moving(pi (z + nu/d))`.
fn partial_sum(shape: SumShape, d: u64, e: u64, z: Complex64) -> Complex64 {
    let (alternating, coef, moving) = shape;
    let d_f = d as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for nu in 1..d {
        let sign = if alternating && nu % 2 == 1 { -1.0 } else { 1.0 };
        let c = coef.eval(Complex64::new(PI * (e * nu) as f64 / d_f, 0.0));
        s += sign * c * moving.eval(PI * (z + nu as f64 / d_f));
    }
    s / d_f
}

fn lhs(case: ClassicalCase, pair: CoprimePair, z: Complex64) -> Complex64 {
    let (first, second) = case.shapes();
    partial_sum(first, pair.a(), pair.b(), z) + partial_sum(second, pair.b(), pair.a(), z)
}

/// Distance from `z` to the nearest real point with denominator `d`.
fn rational_distance(z: Complex64, d: u64) -> f64 {
    let d = d as f64;
    let x = z.re * d;
    ((x - x.round()) / d).hypot(z.im)
}

pub(crate) fn classical_pole_distance(pair: CoprimePair, z: Complex64) -> f64 {
    rational_distance(z, pair.a()).min(rational_distance(z, pair.b()))
}

/// Both sides of a classical identity at `z`.
pub fn classical_trig_identity(case: ClassicalCase, pair: CoprimePair, z: Complex64) -> Result<(Complex64, Complex64)> {
    case.check(pair)?;
    let distance = classical_pole_distance(pair, z);
    if distance < POLE_GUARD {
        let d = if rational_distance(z, pair.a()) <= distance { pair.a() } else { pair.b() } as f64;
        let pole = Complex64::new((z.re * d).round() / d, 0.0);
        return Err(Error::PoleProximity { z, pole, distance });
    }
    Ok((lhs(case, pair, z), case.rhs(pair, z)))
}

/// The z-free sums (second factor at `nu/a`, `nu/b`) and their rational
/// closed form.
pub fn classical_trig_reciprocity(case: ClassicalCase, pair: CoprimePair) -> Result<(f64, f64)> {
    case.check(pair)?;
    let v = lhs(case, pair, Complex64::new(0.0, 0.0));
    debug_assert!(v.im.abs() < 1e-13);
    Ok((v.re, case.reciprocity_value(pair)))
}
