//! Bessel, Hankel and Airy functions for real arguments and the large-order
//! asymptotic regimes around the turning point `z = nu`.
//!
//! Half-integer orders `nu = m + 1/2` (the only orders the sphere produces)
//! are evaluated exactly through the spherical Bessel functions; every
//! asymptotic path is checked against that exact route.
//!
//! Convention: `H_nu = H_nu^(1) = J_nu + i Y_nu` throughout. The conjugate
//! `H_nu^(2)` is never needed explicitly for real arguments.
//!
//! Error estimates (`est_rel_error`) are relative to the natural envelope of
//! the function, see [`envelope_j`] and [`envelope_y`]: pointwise relative
//! error is meaningless at the zeros of `J` and `Y`.

mod airy;
mod asymptotic;
pub(crate) mod dd;
mod dispatch;
mod halfint;
pub mod scaled;
mod series;
mod zeta;

pub use airy::{airy, airy_with, Airy};
pub use asymptotic::{debye_hankel, large_argument_hankel, transitional_bessel, uniform_bessel};
pub use dispatch::{bessel_j, bessel_jy, bessel_y, hankel_modulus_sq, select_path};
pub use halfint::{half_integer_jy, spherical_hankel_exact, HalfIntegerJY};
pub use scaled::{Scaled, ScaledComplex};
pub use series::bessel_j_series;
pub use zeta::{olver_zeta, zeta_over_one_minus_z_sq};

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Bessel order `nu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(domain("order must be finite and nonnegative", nu));
        }
        Ok(Order(nu))
    }

    /// The order `m + 1/2`.
    pub fn half_integer(m: u32) -> Self {
        Order(m as f64 + 0.5)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `Some(m)` when the order is exactly `m + 1/2`.
    pub fn half_integer_index(self) -> Option<u32> {
        let twice = 2.0 * self.0;
        if twice.fract() == 0.0 && twice % 2.0 == 1.0 && twice < u32::MAX as f64 {
            Some(((twice - 1.0) / 2.0) as u32)
        } else {
            None
        }
    }
}

/// The asymptotic expansion used by an evaluation, with its natural parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum AsymptoticRegime {
    /// `z >> nu`; fixed order.
    LargeArgument,
    /// Oscillatory large-order form, `z / nu = 1 / cos(beta)`.
    Debye { beta: f64 },
    /// Airy form at `z = nu + tau * nu^(1/3)`.
    Transitional { tau: f64 },
    /// Olver's uniform Airy form with variable `zeta`.
    UniformAiry { zeta: f64 },
}

impl AsymptoticRegime {
    pub fn name(&self) -> &'static str {
        match self {
            AsymptoticRegime::LargeArgument => "large_argument",
            AsymptoticRegime::Debye { .. } => "debye",
            AsymptoticRegime::Transitional { .. } => "transitional",
            AsymptoticRegime::UniformAiry { .. } => "uniform",
        }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum EvalPath {
    Exact,
    Series,
    Asymptotic { regime: AsymptoticRegime },
}

impl EvalPath {
    pub fn name(&self) -> &'static str {
        match self {
            EvalPath::Exact => "exact",
            EvalPath::Series => "series",
            EvalPath::Asymptotic { regime } => regime.name(),
        }
    }
}

/// A value together with the error the evaluator claims for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    pub value: T,
    pub est_rel_error: f64,
    pub regime_used: EvalPath,
}

/// Thresholds and error-model constants for the evaluators.
///
/// The `*_error_const` values scale the remainder orders of the asymptotic
/// forms; they were fitted once against the exact half-integer route (see the
/// `calibration` test in `halfint`) and carry a safety margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialFnConfig {
    /// Largest argument accepted by the ascending series.
    pub z_max_series: f64,
    /// The series refuses when its rounding estimate exceeds this.
    pub series_max_rel_error: f64,
    /// Airy: Maclaurin sums for `|x| <= x_switch`, asymptotic beyond.
    pub airy_x_switch: f64,
    /// Smallest order for the uniform, transitional and Debye paths.
    pub nu_min_uniform: f64,
    /// Transitional window `|tau| <= tau_max`, `z = nu + tau nu^(1/3)`.
    pub tau_max: f64,
    /// Debye window on `nu / z`.
    pub debye_ratio_min: f64,
    pub debye_ratio_max: f64,
    /// Large-argument window `z >= large_arg_slope * nu + large_arg_offset`.
    pub large_arg_slope: f64,
    pub large_arg_offset: f64,
    /// Half-integer closed-form sum is used up to this `m`; recurrences beyond.
    pub closed_form_max_m: u32,
    pub uniform_error_const: f64,
    pub transitional_error_const: f64,
    pub debye_error_const: f64,
    pub large_arg_error_const: f64,
}

impl Default for SpecialFnConfig {
    fn default() -> Self {
        SpecialFnConfig {
            z_max_series: 60.0,
            series_max_rel_error: 1e-10,
            airy_x_switch: 8.0,
            nu_min_uniform: 20.0,
            tau_max: 4.0,
            debye_ratio_min: 0.1,
            debye_ratio_max: 0.9,
            large_arg_slope: 10.0,
            large_arg_offset: 50.0,
            closed_form_max_m: 8,
            uniform_error_const: 0.5,
            transitional_error_const: 1.0,
            debye_error_const: 1.5,
            large_arg_error_const: 1.5,
        }
    }
}

/// Envelope used to express `J_nu` errors: `|J|` below the turning point
/// (where `J` has no zeros) and `|H|` at or above it.
pub fn envelope_j(nu: f64, z: f64, j: f64, y: f64) -> f64 {
    if z < nu {
        j.abs()
    } else {
        j.hypot(y)
    }
}

/// Envelope used to express `Y_nu` errors: `|H| = sqrt(J^2 + Y^2)`.
pub fn envelope_y(_nu: f64, _z: f64, j: f64, y: f64) -> f64 {
    j.hypot(y)
}
