//! Jacobi elliptic functions in the `2Kz` argument convention and the unified
//! family `f_{i,j} = 2K cs, 2K ds, 2K ns` indexed by `(i,j) in (Z/2Z)^2`.
//!
//! Every function here takes the lattice coordinate `z`; the elliptic argument
//! is `2K z`. Four evaluation routes for `f_{i,j}` are kept independent of each
//! other so they can cross-check one another:
//!
//! * theta quotients of the q-series thetas,
//! * the `m`-sum of cotangents / cosecants over the `tau` direction,
//! * the literal double lattice sum under the Eisenstein summation order,
//! * quotients of characteristic theta functions.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{self, nearest_lattice_point, POLE_GUARD};
use crate::theta::{
    theta_char, theta_series, SeriesTruncation, SeriesValue, TauParameter, ThetaIndex,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An element of `(Z/2Z)^2`. `(0,0)` is representable (it shows up in index
/// arithmetic) but is not a function index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityIndex {
    i: u8,
    j: u8,
}

impl ParityIndex {
    pub const CS: ParityIndex = ParityIndex { i: 1, j: 0 };
    pub const DS: ParityIndex = ParityIndex { i: 1, j: 1 };
    pub const NS: ParityIndex = ParityIndex { i: 0, j: 1 };
    pub const FUNCTIONS: [ParityIndex; 3] = [Self::CS, Self::DS, Self::NS];

    pub fn new(i: i64, j: i64) -> Self {
        Self {
            i: i.rem_euclid(2) as u8,
            j: j.rem_euclid(2) as u8,
        }
    }

    pub fn i(self) -> u8 {
        self.i
    }

    pub fn j(self) -> u8 {
        self.j
    }

    pub fn is_function_index(self) -> bool {
        self.i != 0 || self.j != 0
    }

    pub fn shifted(self, di: i64, dj: i64) -> Self {
        Self::new(i64::from(self.i) + di, i64::from(self.j) + dj)
    }

    /// `(-1)^{i mu + j nu}`.
    pub fn character(self, mu: i64, nu: i64) -> f64 {
        if (i64::from(self.i) * mu + i64::from(self.j) * nu).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn require_function(self) -> Result<()> {
        if self.is_function_index() {
            Ok(())
        } else {
            Err(Error::InvalidIndex { i: self.i, j: self.j })
        }
    }

    fn name(self) -> &'static str {
        match (self.i, self.j) {
            (1, 0) => "cs",
            (1, 1) => "ds",
            (0, 1) => "ns",
            _ => "none",
        }
    }
}

impl fmt::Display for ParityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    ThetaQuotient,
    Fourier,
    /// Symmetric partial sums, `inner` over `n` (real period) nested in
    /// `outer` over `m` (the `tau` period).
    Eisenstein { outer: usize, inner: usize },
    Mumford,
}

impl EvalMethod {
    pub const EISENSTEIN_DEFAULT: EvalMethod = EvalMethod::Eisenstein {
        outer: 2000,
        inner: 2000,
    };
}

/// Cached modulus data for a fixed tau.
#[derive(Debug, Clone, Copy)]
pub struct EllipticContext {
    tau: TauParameter,
    trunc: SeriesTruncation,
    theta2_0: Complex64,
    theta3_0: Complex64,
    theta4_0: Complex64,
    k: Complex64,
    lambda: Complex64,
    two_k: Complex64,
}

pub fn context_from_tau(tau: TauParameter, trunc: SeriesTruncation) -> Result<EllipticContext> {
    trunc.validate()?;
    let th = |idx| -> Result<Complex64> {
        Ok(theta_series(idx, ZERO, &tau, &trunc).into_result()?.value)
    };
    let theta2_0 = th(ThetaIndex::Two)?;
    let theta3_0 = th(ThetaIndex::Three)?;
    let theta4_0 = th(ThetaIndex::Four)?;
    let k = (theta2_0 * theta2_0) / (theta3_0 * theta3_0);
    Ok(EllipticContext {
        tau,
        trunc,
        theta2_0,
        theta3_0,
        theta4_0,
        k,
        lambda: k * k,
        two_k: PI * theta3_0 * theta3_0,
    })
}

impl EllipticContext {
    /// Context with the default truncation.
    pub fn new(tau: Complex64) -> Result<Self> {
        context_from_tau(TauParameter::new(tau)?, SeriesTruncation::default())
    }

    pub fn tau(&self) -> Complex64 {
        self.tau.tau()
    }

    pub fn tau_parameter(&self) -> &TauParameter {
        &self.tau
    }

    pub fn truncation(&self) -> &SeriesTruncation {
        &self.trunc
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn two_k(&self) -> Complex64 {
        self.two_k
    }

    /// `theta_2(0)`, `theta_3(0)`, `theta_4(0)`.
    pub fn theta_constants(&self) -> [Complex64; 3] {
        [self.theta2_0, self.theta3_0, self.theta4_0]
    }

    /// `f_{i,j}(z)` through theta quotients.
    pub fn f(&self, idx: ParityIndex, z: Complex64) -> Result<Complex64> {
        f_ij(idx, z, self, EvalMethod::ThetaQuotient)
    }

    /// Second Laurent coefficient `C_{i,j}(tau)` in closed form.
    pub fn c1(&self, idx: ParityIndex) -> Result<Complex64> {
        idx.require_function()?;
        let l = self.lambda;
        let poly = match (idx.i, idx.j) {
            (1, 0) => -1.0 / 3.0 + l / 6.0,
            (1, 1) => 1.0 / 6.0 - l / 3.0,
            _ => 1.0 / 6.0 + l / 6.0,
        };
        Ok(poly * self.two_k * self.two_k)
    }

    fn theta(&self, idx: ThetaIndex, z: Complex64) -> Result<SeriesValue> {
        theta_series(idx, z, &self.tau, &self.trunc).into_result()
    }

    fn check_pole(&self, z: Complex64, offset: Complex64) -> Result<()> {
        let (pole, distance) = nearest_lattice_point(z, self.tau(), offset);
        if distance < POLE_GUARD {
            Err(Error::PoleProximity { z, pole, distance })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: Complex64,
    pub cn: Complex64,
    pub dn: Complex64,
}

/// `sn(2Kz)`, `cn(2Kz)`, `dn(2Kz)` as theta quotients.
pub fn jacobi_basic(z: Complex64, ctx: &EllipticContext) -> Result<JacobiTriple> {
    ctx.check_pole(z, ctx.tau() / 2.0)?;
    let th1 = ctx.theta(ThetaIndex::One, z)?.value;
    let th2 = ctx.theta(ThetaIndex::Two, z)?.value;
    let th3 = ctx.theta(ThetaIndex::Three, z)?.value;
    let th4 = ctx.theta(ThetaIndex::Four, z)?.value;
    let [t2, t3, t4] = ctx.theta_constants();
    Ok(JacobiTriple {
        sn: (t3 / t2) * (th1 / th4),
        cn: (t4 / t2) * (th2 / th4),
        dn: (t4 / t3) * (th3 / th4),
    })
}

/// `f_{i,j}(z, tau)` by the chosen route. Poles of all three functions sit on
/// `Z + Z tau`; evaluation within [`POLE_GUARD`] of one is an error.
pub fn f_ij(idx: ParityIndex, z: Complex64, ctx: &EllipticContext, method: EvalMethod) -> Result<Complex64> {
    idx.require_function()?;
    ctx.check_pole(z, ZERO)?;
    match method {
        EvalMethod::ThetaQuotient => Ok(theta_quotient(idx, z, ctx)?.0),
        EvalMethod::Fourier => fourier(idx, z, ctx),
        EvalMethod::Eisenstein { outer, inner } => Ok(eisenstein(idx, z, ctx.tau(), outer, inner)),
        EvalMethod::Mumford => mumford(idx, z, ctx),
    }
}

/// Theta-quotient value of `f_{i,j}(z)` with a first-order error estimate
/// propagated from the two theta series.
pub fn f_ij_with_estimate(idx: ParityIndex, z: Complex64, ctx: &EllipticContext) -> Result<(Complex64, f64)> {
    idx.require_function()?;
    ctx.check_pole(z, ZERO)?;
    theta_quotient(idx, z, ctx)
}

// 2K cs = pi th3(0) th4(0) th2(z)/th1(z), 2K ds = pi th2(0) th4(0) th3(z)/th1(z),
// 2K ns = pi th2(0) th3(0) th4(z)/th1(z).
fn theta_quotient(idx: ParityIndex, z: Complex64, ctx: &EllipticContext) -> Result<(Complex64, f64)> {
    let [t2, t3, t4] = ctx.theta_constants();
    let (prefactor, numerator) = match (idx.i, idx.j) {
        (1, 0) => (t3 * t4, ThetaIndex::Two),
        (1, 1) => (t2 * t4, ThetaIndex::Three),
        _ => (t2 * t3, ThetaIndex::Four),
    };
    let num = ctx.theta(numerator, z)?;
    let den = ctx.theta(ThetaIndex::One, z)?;
    let value = PI * prefactor * num.value / den.value;
    let rel = num.error_estimate / num.value.norm().max(f64::MIN_POSITIVE)
        + den.error_estimate / den.value.norm().max(f64::MIN_POSITIVE)
        + 4.0 * f64::EPSILON;
    Ok((value, rel * value.norm()))
}

fn fourier(idx: ParityIndex, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    let tau = ctx.tau();
    if z.im.abs() >= tau.im {
        return Err(Error::DomainError(format!(
            "Fourier expansion needs |Im z| < Im tau, got z = {z}, tau = {tau}"
        )));
    }
    let eps = ctx.trunc.epsilon;
    let max_terms = ctx.trunc.max_terms;
    let y = z.im.abs();

    if idx == ParityIndex::CS {
        let s2 = (2.0 * PI * z).sin();
        let mut sum = PI * lattice::cot(PI * z);
        for m in 1..=max_terms {
            let mt = tau * m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * PI * s2 * lattice::csc(PI * (z + mt)) * lattice::csc(PI * (z - mt));
            let next = (m + 1) as f64;
            let bound = 4.0 * PI * s2.norm() * (-2.0 * PI * next * tau.im).exp()
                / (1.0 - (-2.0 * PI * (next * tau.im - y)).exp()).powi(2);
            if bound < eps * sum.norm().max(1.0) {
                return Ok(sum);
            }
        }
        return Err(not_converged(sum, max_terms));
    }

    // ds alternates in m, ns does not.
    let alternating = idx == ParityIndex::DS;
    let mut sum = PI * lattice::csc(PI * z);
    for m in 1..=max_terms {
        let sign = if alternating && m % 2 == 1 { -1.0 } else { 1.0 };
        let mt = tau * m as f64;
        sum += sign * PI * (lattice::csc(PI * (z + mt)) + lattice::csc(PI * (z - mt)));
        let next = (m + 1) as f64;
        let bound = 4.0 * PI * (-PI * (next * tau.im - y)).exp();
        if bound < eps * sum.norm().max(1.0) {
            return Ok(sum);
        }
    }
    Err(not_converged(sum, max_terms))
}

fn not_converged(value: Complex64, terms: usize) -> Error {
    Error::TruncationNotConverged {
        value,
        estimate: f64::NAN,
        terms,
    }
}

/// Literal symmetric double partial sum
/// `sum^e_m sum^e_n (-1)^{im+jn} / (m tau + n + z)`.
fn eisenstein(idx: ParityIndex, z: Complex64, tau: Complex64, outer: usize, inner: usize) -> Complex64 {
    let row = |m: i64| -> Complex64 {
        let w = z + tau * m as f64;
        let mut s = 1.0 / w;
        for n in 1..=inner as i64 {
            let sign = idx.character(0, n);
            s += sign * (1.0 / (w + n as f64) + 1.0 / (w - n as f64));
        }
        s
    };
    let mut total = row(0);
    for m in 1..=outer as i64 {
        total += idx.character(m, 0) * (row(m) + row(-m));
    }
    total
}

/// Quotient of characteristic thetas:
/// `f_{i,j}(z) = -pi theta_{j,0}(0) theta_{0,i}(0) theta_{j+1,i+1}(z) / theta_{1,1}(z)`.
fn mumford(idx: ParityIndex, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    let (tau, trunc) = (ctx.tau, ctx.trunc);
    let th = |a: u8, b: u8, w: Complex64| -> Result<Complex64> {
        Ok(theta_char(a, b, w, &tau, &trunc).into_result()?.value)
    };
    let (i, j) = (idx.i, idx.j);
    let prefactor = th(j, 0, ZERO)? * th(0, i, ZERO)?;
    Ok(-PI * prefactor * th((j + 1) % 2, (i + 1) % 2, z)? / th(1, 1, z)?)
}

/// `f'_{i,j}(z) = -f_{i+1,1}(z) f_{1,j+1}(z)`.
pub fn f_ij_derivative(idx: ParityIndex, z: Complex64, ctx: &EllipticContext) -> Result<Complex64> {
    idx.require_function()?;
    let left = ctx.f(idx.shifted(1, 0).with_j(1), z)?;
    let right = ctx.f(idx.shifted(0, 1).with_i(1), z)?;
    Ok(-left * right)
}

impl ParityIndex {
    fn with_i(self, i: u8) -> Self {
        Self { i: i % 2, j: self.j }
    }

    fn with_j(self, j: u8) -> Self {
        Self { i: self.i, j: j % 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeierstrassMode {
    /// `f_{1,0}(z)^2 - 2 C_{1,0}(tau)`.
    FromF,
    /// Truncated lattice sum over `|m|, |n| <= radius`.
    Lattice { radius: usize },
}

impl WeierstrassMode {
    pub const LATTICE_DEFAULT: WeierstrassMode = WeierstrassMode::Lattice { radius: 600 };
}

pub fn weierstrass_p(z: Complex64, ctx: &EllipticContext, mode: WeierstrassMode) -> Result<Complex64> {
    ctx.check_pole(z, ZERO)?;
    match mode {
        WeierstrassMode::FromF => {
            let f = ctx.f(ParityIndex::CS, z)?;
            Ok(f * f - 2.0 * ctx.c1(ParityIndex::CS)?)
        }
        WeierstrassMode::Lattice { radius } => Ok(weierstrass_lattice(z, ctx.tau(), radius as i64)),
    }
}

fn weierstrass_lattice(z: Complex64, tau: Complex64, radius: i64) -> Complex64 {
    // Pair omega with -omega so the odd part of each term cancels exactly.
    let mut sum = 1.0 / (z * z);
    for m in 0..=radius {
        let n_start = if m == 0 { 1 } else { -radius };
        for n in n_start..=radius {
            let omega = tau * m as f64 + n as f64;
            let p = z + omega;
            let q = z - omega;
            sum += 1.0 / (p * p) + 1.0 / (q * q) - 2.0 / (omega * omega);
        }
    }
    sum
}

/// Limit as `tau -> i infinity` of `f_{i,j}(z + w tau) / 2K`, i.e. of
/// `cs`, `ds` or `ns` at `2K(z + w tau)`.
pub fn trig_degeneration(idx: ParityIndex, z: Complex64, w: f64) -> Result<Complex64> {
    idx.require_function()?;
    let integral = (w - w.round()).abs() < 1e-12;
    if !integral {
        return Ok(match idx.name() {
            "cs" => -I * if w.floor().rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 },
            _ => ZERO,
        });
    }
    let distance = (z - z.re.round()).norm();
    if distance < POLE_GUARD {
        return Err(Error::DomainError(format!(
            "trigonometric limit has a pole at z = {z}"
        )));
    }
    let sign = if (w.round() as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s = (PI * z).sin();
    Ok(match idx.name() {
        "cs" => sign * (PI * z).cos() / s,
        "ds" => sign / s,
        _ => 1.0 / s,
    })
}
