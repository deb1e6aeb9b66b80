//! Jacobi theta functions in the `q = e(tau)` normalization.
//!
//! Two independent evaluation routes are provided: the sine/cosine q-series
//! ([`theta`]) and the triple-product expansion ([`theta_product`]). A third,
//! the exponential series over a characteristic ([`theta_char`]), backs the
//! alternate elliptic-function path.
//!
//! Every fractional power of the nome is formed as `e(tau * exponent)` and each
//! series term is a single combined exponential, so no branch of `q^(1/8)` is
//! ever chosen and large `|Im z|` cannot overflow an intermediate factor.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e(x) = exp(2 pi i x)`.
pub fn exponential_e(x: Complex64) -> Complex64 {
    (2.0 * PI * I * x).exp()
}

/// A point of the upper half plane together with its nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauParameter {
    tau: Complex64,
    q: Complex64,
    in_fundamental_domain: bool,
}

impl TauParameter {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::InvalidTau { tau });
        }
        Ok(Self {
            tau,
            q: exponential_e(tau),
            in_fundamental_domain: in_gamma2_domain(tau),
        })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn im(&self) -> f64 {
        self.tau.im
    }

    /// Whether tau lies in `|Re tau| <= 1, |tau + 1/2| >= 1/2, |tau - 1/2| >= 1/2`.
    pub fn in_fundamental_domain(&self) -> bool {
        self.in_fundamental_domain
    }

    /// `|q|^exponent` without forming q.
    fn nome_abs_pow(&self, exponent: f64) -> f64 {
        (-2.0 * PI * self.tau.im * exponent).exp()
    }
}

fn in_gamma2_domain(tau: Complex64) -> bool {
    let half = Complex64::new(0.5, 0.0);
    tau.re.abs() <= 1.0 && (tau + half).norm() >= 0.5 && (tau - half).norm() >= 0.5
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    /// Absolute tail target.
    pub epsilon: f64,
    pub max_terms: usize,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            epsilon: 1e-18,
            max_terms: 512,
        }
    }
}

impl SeriesTruncation {
    pub fn new(epsilon: f64, max_terms: usize) -> Result<Self> {
        let trunc = Self { epsilon, max_terms };
        trunc.validate()?;
        Ok(trunc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidTruncation(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_terms < 4 {
            return Err(Error::InvalidTruncation(format!(
                "max_terms must be at least 4, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

/// A truncated series value with its accuracy estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Bound on the omitted tail plus accumulated rounding.
    pub error_estimate: f64,
    pub terms: usize,
    pub converged: bool,
}

impl SeriesValue {
    /// Turns a non-converged value into [`Error::TruncationNotConverged`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::TruncationNotConverged {
                value: self.value,
                estimate: self.error_estimate,
                terms: self.terms,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaIndex {
    One,
    Two,
    Three,
    Four,
}

impl ThetaIndex {
    pub const ALL: [ThetaIndex; 4] = [Self::One, Self::Two, Self::Three, Self::Four];

    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }
}

impl TryFrom<u8> for ThetaIndex {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            other => Err(Error::DomainError(format!(
                "theta index must be 1..=4, got {other}"
            ))),
        }
    }
}

/// Evaluates a theta function from its q-series.
///
/// Summation stops once the next term's `|q|`-power is below `epsilon` and the
/// next term itself, including the `e^{(2n+1) pi |Im z|}` growth of the
/// trigonometric factor, is below `epsilon * max(1, |partial sum|)` and
/// decreasing. A series that runs into `max_terms` is reported as
/// [`Error::TruncationNotConverged`]; [`theta_series`] returns it unconditionally.
pub fn theta(
    index: ThetaIndex,
    z: Complex64,
    tau: &TauParameter,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue> {
    theta_series(index, z, tau, trunc).into_result()
}

pub fn theta_series(
    index: ThetaIndex,
    z: Complex64,
    tau: &TauParameter,
    trunc: &SeriesTruncation,
) -> SeriesValue {
    let t = tau.tau;
    let y = z.im.abs();
    let half_integer = matches!(index, ThetaIndex::One | ThetaIndex::Two);

    // (q-exponent, frequency) of term n: theta_1/2 use q^{(n+1/2)^2/2} with
    // frequency (2n+1)/2 in units of 2 pi z; theta_3/4 use q^{n^2/2} with
    // frequency n.
    let shape = |n: usize| -> (f64, f64) {
        let x = if half_integer { n as f64 + 0.5 } else { n as f64 };
        (0.5 * x * x, x)
    };
    let log_bound = |n: usize| -> f64 {
        let (p, freq) = shape(n);
        -2.0 * PI * t.im * p + 2.0 * PI * freq * y + std::f64::consts::LN_2
    };

    let mut sum = match index {
        ThetaIndex::One | ThetaIndex::Two => Complex64::new(0.0, 0.0),
        ThetaIndex::Three | ThetaIndex::Four => Complex64::new(1.0, 0.0),
    };
    let mut abs_sum = sum.norm();
    let first = if half_integer { 0 } else { 1 };

    for n in first..trunc.max_terms {
        let (p, freq) = shape(n);
        let phase = 2.0 * PI * I * (t * p);
        let plus = (phase + 2.0 * PI * I * freq * z).exp();
        let minus = (phase - 2.0 * PI * I * freq * z).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = match index {
            // 2 sin(w) = -i (e^{iw} - e^{-iw})
            ThetaIndex::One => -I * sign * (plus - minus),
            ThetaIndex::Two => plus + minus,
            ThetaIndex::Three => plus + minus,
            ThetaIndex::Four => sign * (plus + minus),
        };
        sum += term;
        abs_sum += term.norm();

        let next = n + 1;
        let next_bound = log_bound(next).exp();
        let decreasing = log_bound(next + 1) < log_bound(next);
        if tau.nome_abs_pow(shape(next).0) < trunc.epsilon
            && next_bound < trunc.epsilon * sum.norm().max(1.0)
            && decreasing
        {
            return SeriesValue {
                value: sum,
                error_estimate: 2.0 * next_bound + f64::EPSILON * abs_sum,
                terms: next - first,
                converged: true,
            };
        }
    }

    SeriesValue {
        value: sum,
        error_estimate: 2.0 * log_bound(trunc.max_terms).exp() + f64::EPSILON * abs_sum,
        terms: trunc.max_terms - first,
        converged: false,
    }
}

/// Evaluates a theta function from its product expansion. Factors are dropped
/// once `|q|^n e^{2 pi |Im z|}` falls below `epsilon`.
pub fn theta_product(
    index: ThetaIndex,
    z: Complex64,
    tau: &TauParameter,
    trunc: &SeriesTruncation,
) -> Result<SeriesValue> {
    let t = tau.tau;
    let growth = 2.0 * PI * z.im.abs();

    let (mut prod, shift, sign) = match index {
        ThetaIndex::One => (2.0 * exponential_e(t / 8.0) * (PI * z).sin(), 0.0, -1.0),
        ThetaIndex::Two => (2.0 * exponential_e(t / 8.0) * (PI * z).cos(), 0.0, 1.0),
        ThetaIndex::Three => (Complex64::new(1.0, 0.0), 0.5, 1.0),
        ThetaIndex::Four => (Complex64::new(1.0, 0.0), 0.5, -1.0),
    };
    let one = Complex64::new(1.0, 0.0);

    for n in 1..=trunc.max_terms {
        let nf = n as f64;
        let q_n = exponential_e(t * nf);
        let shifted = nf - shift;
        let plus = exponential_e(t * shifted + z);
        let minus = exponential_e(t * shifted - z);
        prod *= (one - q_n) * (one + sign * plus) * (one + sign * minus);

        let next = nf + 1.0;
        let tail = (tau.nome_abs_pow(next - shift).ln() + growth).exp();
        if tau.nome_abs_pow(next) < trunc.epsilon && tail < trunc.epsilon {
            let rounding = 3.0 * nf * f64::EPSILON;
            return Ok(SeriesValue {
                value: prod,
                error_estimate: (3.0 * tail + rounding) * prod.norm(),
                terms: n,
                converged: true,
            });
        }
    }

    Err(Error::TruncationNotConverged {
        value: prod,
        estimate: prod.norm()
            * (tau.nome_abs_pow(trunc.max_terms as f64 + 1.0 - shift).ln() + growth).exp(),
        terms: trunc.max_terms,
    })
}

/// Theta function with characteristic `(a, b) in {0,1}^2`:
/// `sum_n exp(pi i (n + a/2)^2 tau + 2 pi i (n + a/2)(z + b/2))`.
///
/// With this normalization `(0,0)`, `(1,0)`, `(0,1)` and `(1,1)` are
/// `theta_3`, `theta_2`, `theta_4` and `-theta_1`. The sum is taken outward
/// from its largest term in both directions.
pub fn theta_char(
    a: u8,
    b: u8,
    z: Complex64,
    tau: &TauParameter,
    trunc: &SeriesTruncation,
) -> SeriesValue {
    let t = tau.tau;
    let ha = f64::from(a % 2) / 2.0;
    let hb = f64::from(b % 2) / 2.0;
    let w = z + hb;
    let log_bound = |x: f64| -PI * t.im * x * x - 2.0 * PI * x * z.im;
    let term = |x: f64| (PI * I * (t * (x * x)) + 2.0 * PI * I * x * w).exp();

    // Peak of the Gaussian envelope.
    let center = (-z.im / t.im - ha).round() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut terms = 0;
    let mut tail = 0.0;
    let mut converged = true;

    for direction in [1i64, -1] {
        let mut k: i64 = if direction == 1 { 0 } else { 1 };
        loop {
            let x = (center + direction * k) as f64 + ha;
            let value = term(x);
            sum += value;
            abs_sum += value.norm();
            terms += 1;
            let next = x + direction as f64;
            let next_bound = log_bound(next).exp();
            if next_bound < trunc.epsilon * sum.norm().max(1.0)
                && log_bound(next + direction as f64) < log_bound(next)
            {
                tail += 2.0 * next_bound;
                break;
            }
            k += 1;
            if terms >= trunc.max_terms {
                converged = false;
                tail += 2.0 * next_bound;
                break;
            }
        }
    }

    SeriesValue {
        value: sum,
        error_estimate: tail + f64::EPSILON * abs_sum,
        terms,
        converged,
    }
}
