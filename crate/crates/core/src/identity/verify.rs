//! Residual checks for each identity, packaged as [`VerificationReport`]s.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::classical::{classical_trig_identity, classical_trig_reciprocity};
use super::sampling::{classical_sample_points, sample_points};
use super::{lattice_sum, phi_sum, psi_sum, subcase, CoprimePair, IdentityCase};
use crate::elliptic::{trig_degeneration, EllipticContext, ParityIndex};
use crate::error::Result;
use crate::laurent::{f_nth_derivative, laurent_c_value, ContourConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityKind {
    /// `Phi(z) = Psi(z)` at sampled z.
    EllipticIdentity,
    /// The `z -> 0` constant term: lattice sums against Laurent constants.
    DedekindReciprocity,
    /// The `z^{2N}` coefficient, with `N >= 1`.
    DerivativeReciprocity(usize),
    /// `Phi`, `Psi` against the trigonometric identity as `Im tau` grows.
    Degeneration,
    ClassicalIdentity,
    ClassicalReciprocity,
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityKind::EllipticIdentity => f.write_str("elliptic_identity"),
            IdentityKind::DedekindReciprocity => f.write_str("dedekind_reciprocity"),
            IdentityKind::DerivativeReciprocity(n) => write!(f, "derivative_reciprocity_n{n}"),
            IdentityKind::Degeneration => f.write_str("degeneration"),
            IdentityKind::ClassicalIdentity => f.write_str("classical_identity"),
            IdentityKind::ClassicalReciprocity => f.write_str("classical_reciprocity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity: IdentityKind,
    pub case: IdentityCase,
    pub pair: CoprimePair,
    /// `None` for the purely trigonometric checks.
    pub tau: Option<Complex64>,
    pub samples: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    /// `max(1, |right side|)` over the samples.
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub metadata: BTreeMap<String, String>,
}

/// Running maximum of residuals and right-side magnitudes.
#[derive(Default)]
struct Residuals {
    samples: usize,
    max_abs: f64,
    max_rhs: f64,
}

impl Residuals {
    fn push(&mut self, lhs: Complex64, rhs: Complex64) {
        let r = (lhs - rhs).norm();
        self.samples += 1;
        // NaN must not be swallowed by f64::max
        self.max_abs = if r.is_nan() || self.max_abs.is_nan() { f64::NAN } else { self.max_abs.max(r) };
        self.max_rhs = self.max_rhs.max(rhs.norm());
    }

    fn report(
        self,
        identity: IdentityKind,
        case: IdentityCase,
        pair: CoprimePair,
        tau: Option<Complex64>,
        tolerance: f64,
        metadata: BTreeMap<String, String>,
    ) -> VerificationReport {
        let scale = self.max_rhs.max(1.0);
        VerificationReport {
            identity,
            case,
            pair,
            tau,
            samples: self.samples,
            max_abs_residual: self.max_abs,
            max_rel_residual: self.max_abs / scale,
            scale,
            tolerance,
            passed: self.max_abs <= tolerance * scale,
            metadata,
        }
    }
}

fn meta<const N: usize>(entries: [(&str, String); N]) -> BTreeMap<String, String> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// `max |Phi - Psi|` over `samples` deterministic points.
pub fn verify_elliptic_identity(
    case: IdentityCase,
    pair: CoprimePair,
    ctx: &EllipticContext,
    samples: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    case.check_admissible(pair)?;
    let mut acc = Residuals::default();
    for z in sample_points(case, pair, ctx, samples, ZERO) {
        acc.push(phi_sum(case, pair, z, ctx)?, psi_sum(case, pair, z, ctx)?);
    }
    let metadata = meta([("method", "theta_quotient".to_string()), ("target", case.target(pair).to_string())]);
    Ok(acc.report(IdentityKind::EllipticIdentity, case, pair, Some(ctx.tau()), tolerance, metadata))
}

/// Lattice sums at `z = 0` against
/// `-(b/a) C_{m,n} - (a/b) C_{i,j} - (1/ab) C_{A,B}`, and against the
/// tabulated `(2K)^2 (alpha + beta lambda)/(6ab)`.
pub fn verify_dedekind_reciprocity(
    case: IdentityCase,
    pair: CoprimePair,
    ctx: &EllipticContext,
    tolerance: f64,
) -> Result<VerificationReport> {
    let (_, _, row) = subcase(case, pair)?;
    let target = case.target(pair);
    let lhs = lattice_sum(case, pair, ctx, |p| ctx.f(target, p))?;
    let (a, b) = (pair.a() as f64, pair.b() as f64);
    let rhs = -(b / a) * ctx.c1(case.mn)? - (a / b) * ctx.c1(case.ij)? - ctx.c1(target)? / (a * b);
    let two_k2 = ctx.two_k() * ctx.two_k();
    let tabulated = two_k2 * row.value(pair, ctx.lambda());

    let mut acc = Residuals::default();
    acc.push(lhs, rhs);
    acc.push(lhs, tabulated);
    let metadata = meta([
        ("subcase", row.label.to_string()),
        ("normalized_lhs", fmt_complex(lhs / two_k2)),
        ("normalized_rhs", fmt_complex(rhs / two_k2)),
        ("alpha_over_6ab", format!("{}/{}", row.alpha, 6 * pair.a() * pair.b())),
        ("beta_over_6ab", format!("{}/{}", row.beta, 6 * pair.a() * pair.b())),
    ]);
    let mut report = acc.report(IdentityKind::DedekindReciprocity, case, pair, Some(ctx.tau()), tolerance, metadata);
    report.samples = 1;
    Ok(report)
}

/// The `z^{2N}` coefficient of `Phi = Psi`:
///
/// ```text
/// (1/(2N)!) [lattice sums with f_{A,B}^{(2N)}(p)]
///   = -sum_{s=0}^{N+1} C_{i,j}(s) C_{m,n}(N+1-s) a^{2s-1} b^{2N-2s+1}
///     - (2N+1)/(ab) C_{A,B}(N+1)
/// ```
///
/// `N = 0` is [`verify_dedekind_reciprocity`].
pub fn verify_derivative_reciprocity(
    case: IdentityCase,
    pair: CoprimePair,
    n: usize,
    ctx: &EllipticContext,
    cfg: &ContourConfig,
    tolerance: f64,
) -> Result<VerificationReport> {
    if n == 0 {
        return verify_dedekind_reciprocity(case, pair, ctx, tolerance);
    }
    case.check_admissible(pair)?;
    let target = case.target(pair);
    let order = 2 * n;
    let factorial: f64 = (1..=order).map(|k| k as f64).product();
    let lhs = lattice_sum(case, pair, ctx, |p| f_nth_derivative(target, order, p, ctx, cfg))? / factorial;

    let (a, b) = (pair.a() as f64, pair.b() as f64);
    let top = n + 1;
    let mut rhs = ZERO;
    for s in 0..=top {
        let c_ij = laurent_c_value(case.ij, s, ctx, cfg)?;
        let c_mn = laurent_c_value(case.mn, top - s, ctx, cfg)?;
        let power_a = 2 * s as i32 - 1;
        let power_b = 2 * (top - s) as i32 - 1;
        rhs -= c_ij * c_mn * a.powi(power_a) * b.powi(power_b);
    }
    rhs -= (2 * n + 1) as f64 / (a * b) * laurent_c_value(target, top, ctx, cfg)?;

    let mut acc = Residuals::default();
    acc.push(lhs, rhs);
    let coefficient_source = if top <= 2 { "closed_form" } else { "closed_form+contour" };
    let metadata = meta([
        ("derivatives", "contour".to_string()),
        ("coefficients", coefficient_source.to_string()),
        ("contour_samples", cfg.n_samples.to_string()),
        ("radius_fraction", cfg.radius_fraction.to_string()),
    ]);
    let mut report = acc.report(IdentityKind::DerivativeReciprocity(n), case, pair, Some(ctx.tau()), tolerance, metadata);
    report.samples = 1;
    Ok(report)
}

/// Limit of the `mu >= 1` part of `Phi / (2K)^2` as `tau -> i infinity`.
/// Those terms have non-integral imaginary weight and degenerate to
/// constants; the `mu = 0` terms reproduce the trigonometric sums.
pub fn degeneration_constant(case: IdentityCase, pair: CoprimePair, z: Complex64) -> Result<Complex64> {
    case.check_admissible(pair)?;
    let target = case.target(pair);
    let part = |outer: ParityIndex, inner: ParityIndex, d: u64, e: u64| -> Result<Complex64> {
        let mut s = ZERO;
        for mu in 1..d as i64 {
            for nu in 0..d as i64 {
                let (df, ef) = (d as f64, e as f64);
                let coefficient = trig_degeneration(inner, Complex64::new(ef * nu as f64 / df, 0.0), ef * mu as f64 / df)?;
                let moving = trig_degeneration(target, z + nu as f64 / df, mu as f64 / df)?;
                s += outer.character(mu, nu) * coefficient * moving;
            }
        }
        Ok(s / d as f64)
    };
    Ok(part(case.ij, case.mn, pair.a(), pair.b())? + part(case.mn, case.ij, pair.b(), pair.a())?)
}

/// Compares `Phi/(2K)^2` and `Psi/(2K)^2` at `z` with the two sides of the
/// trigonometric identity this case degenerates to, each shifted by
/// [`degeneration_constant`].
pub fn degeneration_check(
    case: IdentityCase,
    pair: CoprimePair,
    ctx: &EllipticContext,
    z: Complex64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let (canon_case, canon_pair, row) = subcase(case, pair)?;
    let (cl_lhs, cl_rhs) = classical_trig_identity(row.classical, canon_pair, z)?;
    let c = degeneration_constant(canon_case, canon_pair, z)?;
    let two_k2 = ctx.two_k() * ctx.two_k();
    let phi = phi_sum(canon_case, canon_pair, z, ctx)? / two_k2;
    let psi = psi_sum(canon_case, canon_pair, z, ctx)? / two_k2;

    let mut acc = Residuals::default();
    acc.push(phi, cl_lhs + c);
    acc.push(psi, cl_rhs + c);
    let metadata = meta([
        ("classical_case", row.classical.id().to_string()),
        ("constant_shift", fmt_complex(c)),
        ("z", fmt_complex(z)),
    ]);
    Ok(acc.report(IdentityKind::Degeneration, case, pair, Some(ctx.tau()), tolerance, metadata))
}

/// The trigonometric identity matched to `case` at `samples` points.
pub fn verify_classical_identity(
    case: IdentityCase,
    pair: CoprimePair,
    samples: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let (_, canon_pair, row) = subcase(case, pair)?;
    let mut acc = Residuals::default();
    for z in classical_sample_points(canon_pair, samples, ZERO) {
        let (l, r) = classical_trig_identity(row.classical, canon_pair, z)?;
        acc.push(l, r);
    }
    let metadata = meta([("classical_case", row.classical.id().to_string())]);
    Ok(acc.report(IdentityKind::ClassicalIdentity, case, pair, None, tolerance, metadata))
}

pub fn verify_classical_reciprocity(case: IdentityCase, pair: CoprimePair, tolerance: f64) -> Result<VerificationReport> {
    let (_, canon_pair, row) = subcase(case, pair)?;
    let (l, r) = classical_trig_reciprocity(row.classical, canon_pair)?;
    let mut acc = Residuals::default();
    acc.push(Complex64::new(l, 0.0), Complex64::new(r, 0.0));
    let metadata = meta([
        ("classical_case", row.classical.id().to_string()),
        ("value", format!("{r:.16e}")),
    ]);
    Ok(acc.report(IdentityKind::ClassicalReciprocity, case, pair, None, tolerance, metadata))
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
    fn elliptic_identity_examples() {
        let r = verify_elliptic_identity(case([1, 0, 1, 0]), pair(2, 3), &ctx(0.0, 2.0), 16, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.samples, 16);
        let r = verify_elliptic_identity(case([0, 1, 0, 1]), pair(1, 2), &ctx(0.3, 1.5), 16, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(verify_elliptic_identity(case([1, 0, 1, 0]), pair(1, 3), &ctx(0.0, 2.0), 16, 1e-9).is_err());
    }

    #[test]
    fn dedekind_half_value() {
        let cx = ctx(0.0, 2.0);
        let r = verify_dedekind_reciprocity(case([1, 1, 1, 0]), pair(1, 2), &cx, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        let (_, _, row) = subcase(case([1, 1, 1, 0]), pair(1, 2)).unwrap();
        assert_eq!((row.alpha, row.beta), (6, 0));
    }

    #[test]
    fn dedekind_unit_pair_is_zero() {
        let cx = ctx(0.0, 2.0);
        let r = verify_dedekind_reciprocity(case([1, 0, 1, 1]), pair(1, 1), &cx, 1e-9).unwrap();
        assert!(r.passed && r.max_abs_residual < 1e-12, "{r:?}");
    }

    #[test]
    fn ns_ns_normalized_value() {
        let cx = ctx(0.0, 2.0);
        let r = verify_dedekind_reciprocity(case([0, 1, 0, 1]), pair(1, 2), &cx, 1e-9).unwrap();
        assert!(r.passed);
        let (_, _, row) = subcase(case([0, 1, 0, 1]), pair(1, 2)).unwrap();
        let expected = -(1.0 + cx.lambda()) / 2.0;
        assert!((row.value(pair(1, 2), cx.lambda()) - expected).norm() < 1e-15);
    }

    #[test]
    fn derivative_reciprocity_examples() {
        let cx = ctx(0.0, 2.0);
        let cfg = ContourConfig::default();
        let r = verify_derivative_reciprocity(case([1, 0, 1, 0]), pair(2, 3), 1, &cx, &cfg, 1e-7).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_derivative_reciprocity(case([1, 1, 1, 1]), pair(1, 2), 2, &cx, &cfg, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        let r = verify_derivative_reciprocity(case([1, 1, 1, 1]), pair(1, 2), 0, &cx, &cfg, 1e-9).unwrap();
        assert_eq!(r.identity, IdentityKind::DedekindReciprocity);
    }

    #[test]
    fn degeneration_examples() {
        let z = Complex64::new(0.1234, 0.0567);
        let r = degeneration_check(case([1, 1, 1, 0]), pair(2, 3), &ctx(0.0, 8.0), z, 1e-8).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.metadata["classical_case"], "1");
        let r = degeneration_check(case([0, 1, 1, 1]), pair(1, 3), &ctx(0.0, 8.0), z, 1e-8).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.metadata["classical_case"], "3");
        let r = degeneration_check(case([1, 0, 1, 0]), pair(1, 2), &ctx(0.0, 10.0), z, 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn cs_cs_shift_is_one() {
        let c = degeneration_constant(case([1, 0, 1, 0]), pair(2, 3), Complex64::new(0.2, 0.1)).unwrap();
        assert!((c - 1.0).norm() < 1e-14, "{c}");
    }

    #[test]
    fn classical_reports() {
        let r = verify_classical_identity(case([1, 0, 1, 0]), pair(2, 3), 32, 1e-12).unwrap();
        assert!(r.passed && r.tau.is_none());
        let r = verify_classical_reciprocity(case([1, 1, 1, 1]), pair(1, 2), 1e-12).unwrap();
        assert!(r.passed);
    }
}
