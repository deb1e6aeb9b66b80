//! Laurent coefficients of `f_{i,j}` at the origin and high-order derivatives
//! at regular points, both by the trapezoid rule on a circle.
//!
//! `f_{i,j}(z) = sum_s C_{i,j}(s) z^{2s-1}`, so `C(0) = 1` and `C(1)` is the
//! constant whose closed form lives on [`EllipticContext::c1`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::elliptic::{EllipticContext, ParityIndex};
use crate::error::{Error, Result};
use crate::lattice::{nearest_lattice_point, nearest_other_lattice_distance, POLE_GUARD};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Radius as a fraction of the distance to the nearest pole.
    pub radius_fraction: f64,
    pub n_samples: usize,
    /// Absolute radius; overrides `radius_fraction` when set.
    pub radius: Option<f64>,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            radius_fraction: 0.5,
            n_samples: 256,
            radius: None,
        }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_fraction > 0.0 && self.radius_fraction < 1.0) {
            return Err(Error::Config(format!(
                "radius_fraction must lie in (0,1), got {}",
                self.radius_fraction
            )));
        }
        if !self.n_samples.is_power_of_two() {
            return Err(Error::Config(format!(
                "n_samples must be a power of two, got {}",
                self.n_samples
            )));
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Config(format!("contour radius must be positive, got {r}")));
            }
        }
        Ok(())
    }

    fn radius_for(&self, pole_distance: f64) -> Result<f64> {
        self.validate()?;
        let radius = self.radius.unwrap_or(self.radius_fraction * pole_distance);
        if radius >= pole_distance {
            return Err(Error::RadiusTooLarge {
                radius,
                pole_distance,
            });
        }
        Ok(radius)
    }

    fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        let n = self.n_samples;
        (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientMode {
    ClosedForm,
    Contour(ContourConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentCoefficient {
    pub idx: ParityIndex,
    pub s: usize,
    pub value: Complex64,
}

/// `C_{i,j}(s, tau)`, the coefficient of `z^{2s-1}`.
pub fn laurent_c(idx: ParityIndex, s: usize, ctx: &EllipticContext, mode: CoefficientMode) -> Result<LaurentCoefficient> {
    if !idx.is_function_index() {
        return Err(Error::InvalidIndex { i: idx.i(), j: idx.j() });
    }
    let value = match mode {
        CoefficientMode::ClosedForm => closed_form(idx, s, ctx)?,
        CoefficientMode::Contour(cfg) => laurent_raw(idx, 2 * s as i64 - 1, ctx, &cfg)?,
    };
    Ok(LaurentCoefficient { idx, s, value })
}

/// Closed form where available (`s <= 2`), contour extraction beyond.
pub fn laurent_c_value(idx: ParityIndex, s: usize, ctx: &EllipticContext, cfg: &ContourConfig) -> Result<Complex64> {
    let mode = if s <= 2 {
        CoefficientMode::ClosedForm
    } else {
        CoefficientMode::Contour(*cfg)
    };
    Ok(laurent_c(idx, s, ctx, mode)?.value)
}

fn closed_form(idx: ParityIndex, s: usize, ctx: &EllipticContext) -> Result<Complex64> {
    let l = ctx.lambda();
    let l2 = l * l;
    let two_k2 = ctx.two_k() * ctx.two_k();
    match s {
        0 => Ok(Complex64::new(1.0, 0.0)),
        1 => ctx.c1(idx),
        2 => {
            let poly = match (idx.i(), idx.j()) {
                (1, 0) => -1.0 / 45.0 + l / 45.0 + 7.0 * l2 / 360.0,
                (1, 1) => 7.0 / 360.0 + l / 45.0 - l2 / 45.0,
                _ => 7.0 / 360.0 - 11.0 * l / 180.0 + 7.0 * l2 / 360.0,
            };
            Ok(poly * two_k2 * two_k2)
        }
        _ => Err(Error::UnsupportedOrder { s }),
    }
}

/// Coefficient of `z^power` in the Laurent expansion of `f_{i,j}` at 0.
pub fn laurent_raw(idx: ParityIndex, power: i64, ctx: &EllipticContext, cfg: &ContourConfig) -> Result<Complex64> {
    let pole_distance = nearest_other_lattice_distance(ZERO, ctx.tau(), ZERO);
    let r = cfg.radius_for(pole_distance)?;
    let mut sum = ZERO;
    for w in cfg.nodes() {
        let z = r * w;
        sum += ctx.f(idx, z)? * z.powi(-(power as i32));
    }
    Ok(sum / cfg.n_samples as f64)
}

/// `f_{i,j}^{(n)}(z0)` by the Cauchy integral on a circle around `z0`.
pub fn f_nth_derivative(
    idx: ParityIndex,
    n: usize,
    z0: Complex64,
    ctx: &EllipticContext,
    cfg: &ContourConfig,
) -> Result<Complex64> {
    let (pole, distance) = nearest_lattice_point(z0, ctx.tau(), ZERO);
    if distance < POLE_GUARD {
        return Err(Error::PoleProximity { z: z0, pole, distance });
    }
    let r = cfg.radius_for(distance)?;
    let mut sum = ZERO;
    for w in cfg.nodes() {
        let h = r * w;
        sum += ctx.f(idx, z0 + h)? * h.powi(-(n as i32));
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Ok(factorial * sum / cfg.n_samples as f64)
}
