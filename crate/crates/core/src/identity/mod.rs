//! Lattice sums `Phi`, the right side `Psi`, and the bookkeeping that ties each
//! pair of indices `(i,j),(m,n)` to a trigonometric identity.
//!
//! For coprime `a, b` and target index `(A,B) = (ia+mb, ja+nb) mod 2`,
//!
//! ```text
//! Phi(z) = (1/a) sum'_{mu,nu < a} (-1)^{i mu + j nu} f_{m,n}(b p) f_{A,B}(z + p),  p = (mu tau + nu)/a
//!        + (1/b) sum'_{mu,nu < b} (-1)^{m mu + n nu} f_{i,j}(a p) f_{A,B}(z + p),  p = (mu tau + nu)/b
//! Psi(z) = -f_{i,j}(az) f_{m,n}(bz) + (1/ab) f_{A+1,1}(z) f_{1,B+1}(z)
//! ```
//!
//! and `Phi = Psi` whenever `A` or `B` is odd.

mod classical;
mod sampling;
mod verify;

use std::fmt;

use num_complex::Complex64;

use crate::elliptic::{f_ij_derivative, EllipticContext, ParityIndex};
use crate::error::{Error, Result};

pub use classical::{classical_trig_identity, classical_trig_reciprocity, ClassicalCase};
pub use sampling::{classical_sample_points, sample_points, SAMPLE_ORIGIN, SAMPLE_STEP, SAMPLE_CLEARANCE};
pub use verify::{
    degeneration_check, degeneration_constant, verify_classical_identity, verify_classical_reciprocity,
    verify_dedekind_reciprocity, verify_derivative_reciprocity, verify_elliptic_identity, IdentityKind,
    VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoprimePair {
    a: u64,
    b: u64,
}

impl CoprimePair {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 || gcd(a, b) != 1 {
            return Err(Error::NotCoprime { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(self) -> u64 {
        self.a
    }

    pub fn b(self) -> u64 {
        self.b
    }

    pub fn swapped(self) -> Self {
        Self { a: self.b, b: self.a }
    }

    /// All coprime pairs with `1 <= a, b <= max`, ordered by `(a, b)`.
    pub fn all_up_to(max: u64) -> Vec<Self> {
        (1..=max)
            .flat_map(|a| (1..=max).map(move |b| (a, b)))
            .filter_map(|(a, b)| Self::new(a, b).ok())
            .collect()
    }
}

impl fmt::Display for CoprimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdentityCase {
    pub ij: ParityIndex,
    pub mn: ParityIndex,
}

impl IdentityCase {
    pub fn new(ij: ParityIndex, mn: ParityIndex) -> Result<Self> {
        for idx in [ij, mn] {
            if !idx.is_function_index() {
                return Err(Error::InvalidIndex { i: idx.i(), j: idx.j() });
            }
        }
        Ok(Self { ij, mn })
    }

    /// From the four digits `i j m n`.
    pub fn from_digits(d: [u8; 4]) -> Result<Self> {
        if d.iter().any(|&x| x > 1) {
            return Err(Error::Parse(format!("case digits must be 0 or 1, got {d:?}")));
        }
        let idx = |i: u8, j: u8| ParityIndex::new(i64::from(i), i64::from(j));
        Self::new(idx(d[0], d[1]), idx(d[2], d[3]))
    }

    pub fn digits(self) -> [u8; 4] {
        [self.ij.i(), self.ij.j(), self.mn.i(), self.mn.j()]
    }

    pub fn swapped(self) -> Self {
        Self { ij: self.mn, mn: self.ij }
    }

    /// `(ia+mb, ja+nb) mod 2`.
    pub fn target(self, pair: CoprimePair) -> ParityIndex {
        let (a, b) = (pair.a as i64, pair.b as i64);
        ParityIndex::new(
            i64::from(self.ij.i()) * a + i64::from(self.mn.i()) * b,
            i64::from(self.ij.j()) * a + i64::from(self.mn.j()) * b,
        )
    }

    pub fn admissible(self, pair: CoprimePair) -> bool {
        self.target(pair).is_function_index()
    }

    pub fn check_admissible(self, pair: CoprimePair) -> Result<()> {
        if self.admissible(pair) {
            Ok(())
        } else {
            Err(Error::NotAdmissible {
                case: self.to_string(),
                a: pair.a,
                b: pair.b,
            })
        }
    }
}

impl fmt::Display for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ij, self.mn)
    }
}

/// The six index pairings, one per orientation class; the remaining three
/// pairings are these with `(i,j),(m,n)` and `a,b` exchanged.
pub const FAMILIES: [IdentityCase; 6] = [
    IdentityCase { ij: ParityIndex::CS, mn: ParityIndex::CS },
    IdentityCase { ij: ParityIndex::DS, mn: ParityIndex::CS },
    IdentityCase { ij: ParityIndex::NS, mn: ParityIndex::CS },
    IdentityCase { ij: ParityIndex::DS, mn: ParityIndex::DS },
    IdentityCase { ij: ParityIndex::NS, mn: ParityIndex::DS },
    IdentityCase { ij: ParityIndex::NS, mn: ParityIndex::NS },
];

/// One parity subcase of a family: the normalized reciprocity value
/// `(alpha + beta * lambda) / (6ab)` and the trigonometric identity it
/// degenerates to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subcase {
    pub label: &'static str,
    pub classical: ClassicalCase,
    pub alpha: i64,
    pub beta: i64,
}

impl Subcase {
    /// Normalized value `(alpha + beta lambda)/(6ab)` at a given `lambda`.
    pub fn value(self, pair: CoprimePair, lambda: Complex64) -> Complex64 {
        (self.alpha as f64 + self.beta as f64 * lambda) / (6.0 * pair.a as f64 * pair.b as f64)
    }
}

/// Rewrite `(case, pair)` into one of [`FAMILIES`], swapping orientation if
/// needed. Both sides of every identity are symmetric under the swap.
pub fn canonicalize(case: IdentityCase, pair: CoprimePair) -> (IdentityCase, CoprimePair) {
    if FAMILIES.contains(&case) {
        (case, pair)
    } else {
        (case.swapped(), pair.swapped())
    }
}

/// Parity subcase of an admissible `(case, pair)`, after canonicalization.
pub fn subcase(case: IdentityCase, pair: CoprimePair) -> Result<(IdentityCase, CoprimePair, Subcase)> {
    case.check_admissible(pair)?;
    let (case, pair) = canonicalize(case, pair);
    let (a, b) = (pair.a as i64, pair.b as i64);
    let (a2, b2) = (a * a, b * b);
    let (a_odd, b_odd, sum_odd) = (a % 2 == 1, b % 2 == 1, (a + b) % 2 == 1);
    let sub = |label, classical, alpha, beta| Subcase {
        label,
        classical,
        alpha,
        beta,
    };
    use ClassicalCase::*;
    let row = match (case.ij, case.mn) {
        (ParityIndex::CS, ParityIndex::CS) => {
            sub("cs-cs", CotCot, 2 * (a2 + b2 + 1), -(a2 + b2 + 1))
        }
        (ParityIndex::DS, ParityIndex::CS) => match (sum_odd, a_odd) {
            (true, true) => sub("ds-cs, a+b odd, a odd", CotCsc, -a2 + 2 * b2 - 1, 2 * a2 - b2 + 2),
            (true, false) => sub("ds-cs, a+b odd, a even", AlternatingCot, -a2 + 2 * b2 + 2, 2 * a2 - b2 - 1),
            _ => sub("ds-cs, a+b even, a odd", CotCsc, -a2 + 2 * b2 - 1, 2 * a2 - b2 - 1),
        },
        (ParityIndex::NS, ParityIndex::CS) => match (b_odd, a_odd) {
            (true, true) => sub("ns-cs, b odd, a odd", CotCsc, -a2 + 2 * b2 - 1, -a2 - b2 + 2),
            (true, false) => sub("ns-cs, b odd, a even", AlternatingCot, -a2 + 2 * b2 + 2, -a2 - b2 - 1),
            _ => sub("ns-cs, b even, a odd", CotCsc, -a2 + 2 * b2 - 1, -a2 - b2 - 1),
        },
        (ParityIndex::DS, ParityIndex::DS) => {
            sub("ds-ds", CscCscOdd, -(a2 + b2 + 1), 2 * (a2 + b2 + 1))
        }
        (ParityIndex::NS, ParityIndex::DS) => match (b_odd, sum_odd) {
            (true, true) => sub("ns-ds, b odd, a+b odd", CscCscOdd, -a2 - b2 - 1, -a2 + 2 * b2 + 2),
            (true, false) => sub("ns-ds, b odd, a+b even", CscCotEven, -a2 - b2 + 2, -a2 + 2 * b2 - 1),
            _ => sub("ns-ds, b even, a+b odd", CscCscOdd, -a2 - b2 - 1, -a2 + 2 * b2 - 1),
        },
        _ => sub("ns-ns", CscCscOdd, -(a2 + b2 + 1), -(a2 + b2 + 1)),
    };
    Ok((case, pair, row))
}

/// `p = (mu tau + nu)/d` over `0 <= mu, nu < d`, `(mu,nu) != (0,0)`.
fn torsion_points(d: u64, tau: Complex64) -> impl Iterator<Item = (i64, i64, Complex64)> {
    let d = d as i64;
    (0..d)
        .flat_map(move |mu| (0..d).map(move |nu| (mu, nu)))
        .filter(|&(mu, nu)| mu != 0 || nu != 0)
        .map(move |(mu, nu)| (mu, nu, (tau * mu as f64 + nu as f64) / d as f64))
}

/// Shared shape of `Phi` and its z-free and derivative variants:
/// `(1/a) sum' chi_{ij} f_{mn}(b p) g(p) + (1/b) sum' chi_{mn} f_{ij}(a p) g(p)`.
pub fn lattice_sum<G>(case: IdentityCase, pair: CoprimePair, ctx: &EllipticContext, mut g: G) -> Result<Complex64>
where
    G: FnMut(Complex64) -> Result<Complex64>,
{
    let (a, b) = (pair.a as f64, pair.b as f64);
    let tau = ctx.tau();
    let mut first = Complex64::new(0.0, 0.0);
    for (mu, nu, p) in torsion_points(pair.a, tau) {
        first += case.ij.character(mu, nu) * ctx.f(case.mn, b * p)? * g(p)?;
    }
    let mut second = Complex64::new(0.0, 0.0);
    for (mu, nu, p) in torsion_points(pair.b, tau) {
        second += case.mn.character(mu, nu) * ctx.f(case.ij, a * p)? * g(p)?;
    }
    Ok(first / a + second / b)
}

pub fn phi_sum(case: IdentityCase, pair: CoprimePair, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    case.check_admissible(pair)?;
    let target = case.target(pair);
    lattice_sum(case, pair, ctx, |p| ctx.f(target, z + p))
}

pub fn psi_sum(case: IdentityCase, pair: CoprimePair, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    let (a, b) = (pair.a as f64, pair.b as f64);
    let t = case.target(pair);
    let left = ParityIndex::new(i64::from(t.i()) + 1, 1);
    let right = ParityIndex::new(1, i64::from(t.j()) + 1);
    Ok(-ctx.f(case.ij, a * z)? * ctx.f(case.mn, b * z)? + ctx.f(left, z)? * ctx.f(right, z)? / (a * b))
}

/// `Psi` written with the derivative of the target function.
pub fn psi_via_derivative(case: IdentityCase, pair: CoprimePair, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    case.check_admissible(pair)?;
    let (a, b) = (pair.a as f64, pair.b as f64);
    let d = f_ij_derivative(case.target(pair), z, ctx)?;
    Ok(-ctx.f(case.ij, a * z)? * ctx.f(case.mn, b * z)? - d / (a * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(re: f64, im: f64) -> EllipticContext {
        EllipticContext::new(Complex64::new(re, im)).unwrap()
    }

    fn case(d: [u8; 4]) -> IdentityCase {
        IdentityCase::from_digits(d).unwrap()
    }

    fn pair(a: u64, b: u64) -> CoprimePair {
        CoprimePair::new(a, b).unwrap()
    }

    #[test]
    fn coprime_pairs() {
        assert!(CoprimePair::new(2, 4).is_err());
        assert!(CoprimePair::new(0, 1).is_err());
        assert_eq!(CoprimePair::all_up_to(5).len(), 19);
    }

    #[test]
    fn admissibility() {
        assert!(case([1, 0, 1, 0]).admissible(pair(2, 3)));
        assert!(!case([1, 0, 1, 0]).admissible(pair(1, 3)));
        assert_eq!(case([1, 0, 1, 1]).target(pair(1, 1)), ParityIndex::NS);
        assert!(IdentityCase::from_digits([0, 0, 1, 0]).is_err());
    }

    #[test]
    fn empty_sums_for_unit_pair() {
        let cx = ctx(0.0, 2.0);
        let z = Complex64::new(0.21, 0.13);
        let v = phi_sum(case([1, 0, 1, 1]), pair(1, 1), z, &cx).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn psi_cancels_for_unit_pair() {
        let cx = ctx(0.0, 2.0);
        for k in 0..5 {
            let z = Complex64::new(0.11 + 0.07 * k as f64, 0.05 + 0.03 * k as f64);
            let v = psi_sum(case([1, 0, 1, 1]), pair(1, 1), z, &cx).unwrap();
            assert!(v.norm() < 1e-13);
        }
    }

    #[test]
    fn phi_equals_psi_small_case() {
        let cx = ctx(0.0, 2.0);
        let z = Complex64::new(0.21, 0.13);
        let c = case([1, 0, 1, 0]);
        let p = pair(1, 2);
        let phi = phi_sum(c, p, z, &cx).unwrap();
        let psi = psi_sum(c, p, z, &cx).unwrap();
        assert!((phi - psi).norm() < 1e-10, "{phi} vs {psi}");
    }

    #[test]
    fn torsion_arguments_avoid_poles() {
        let cx = ctx(0.0, 2.0);
        let z = Complex64::new(0.1234, 0.0567);
        assert!(phi_sum(case([1, 0, 1, 0]), pair(2, 3), z, &cx).is_ok());
    }

    #[test]
    fn derivative_form_of_psi() {
        let cx = ctx(0.3, 1.5);
        let z = Complex64::new(0.17, 0.09);
        for (c, p) in [(case([1, 1, 1, 0]), pair(2, 3)), (case([0, 1, 1, 1]), pair(1, 3))] {
            let a = psi_sum(c, p, z, &cx).unwrap();
            let b = psi_via_derivative(c, p, z, &cx).unwrap();
            assert!((a - b).norm() < 1e-11 * a.norm().max(1.0));
        }
    }

    #[test]
    fn subcases_cover_every_admissible_pair() {
        for c in FAMILIES.iter().flat_map(|c| [*c, c.swapped()]) {
            for p in CoprimePair::all_up_to(7) {
                let r = subcase(c, p);
                assert_eq!(r.is_ok(), c.admissible(p), "{c} {p}");
            }
        }
        let (_, _, s) = subcase(case([1, 1, 1, 0]), pair(2, 3)).unwrap();
        assert_eq!(s.classical, ClassicalCase::AlternatingCot);
        let (_, _, s) = subcase(case([0, 1, 1, 1]), pair(1, 3)).unwrap();
        assert_eq!(s.classical, ClassicalCase::CscCotEven);
    }
}
