//! λ-scaling experiments: annulus norms of Hankel functions, per-mode
//! solution-operator norms, regime classification and dyadic sweeps with
//! log–log slope fits.

mod measure;
mod operator;
mod ray;
mod sweep;

pub use measure::{annulus_l2_sq, boundary_modulus_sq, bound_chain, cross_term_l2, BoundChain};
pub use operator::{
    largest_singular_value, mode_operator_matrix, mode_operator_norm, KernelOperator, NormEstimate, Weighting,
};
pub use ray::ray_sojourn;
pub use sweep::{fit_power_law, measure, sweep_and_fit, sweep_with_progress, PowerFit, SweepPoint, SweepResult, SweepSpec};

use crate::error::{Error, Result};
use crate::helmholtz::{Frequency, ModeIndex};
use serde::{Deserialize, Serialize};

/// Position of a mode relative to the turning point `ν = λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum RegimeLabel {
    /// `ν/λ <= 1 - ε₀`
    Transversal { epsilon0: f64 },
    /// `1 - ν/λ = λ^{-β}`; `β = +∞` on and just above the turning point
    Glancing { beta: f64 },
    /// `ν/λ >= 1 + ε₀`
    Elliptic { epsilon0: f64 },
}

/// Total three-way classification of `(mode, λ)`.
///
/// Orders in `[λ, (1 + ε₀)λ)` are reported as glancing with `β = +∞`: they sit
/// within `O(λ^{1/3})` of the turning point for every tested frequency.
pub fn classify_regime(mode: ModeIndex, lambda: Frequency, epsilon0: f64) -> Result<RegimeLabel> {
    if !(epsilon0 > 0.0 && epsilon0 < 0.5) {
        return Err(Error::Invalid(format!("epsilon0 must lie in (0, 1/2), got {epsilon0}")));
    }
    let lam = lambda.value();
    let c = mode.nu().value() / lam;
    Ok(if c <= 1.0 - epsilon0 {
        RegimeLabel::Transversal { epsilon0 }
    } else if c >= 1.0 + epsilon0 {
        RegimeLabel::Elliptic { epsilon0 }
    } else if c < 1.0 && lam > 1.0 {
        RegimeLabel::Glancing { beta: -(1.0 - c).ln() / lam.ln() }
    } else {
        RegimeLabel::Glancing { beta: f64::INFINITY }
    })
}

/// Which quantity a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// `∫ |H_ν(λr)|² dr` over the collar
    HankelL2Sq,
    /// `|H_ν(λ)|²`
    HankelModulusSqAtBoundary,
    /// `‖J_ν(λs) Y_ν(λ) - J_ν(λ) Y_ν(λs)‖` over the collar
    CrossTermL2,
    /// largest singular value of the discretised solution operator
    OperatorNorm,
    /// `‖w‖ / ‖χ f‖` for the Dirichlet solution with `f ≡ 1`
    SolutionNorm,
}

/// Rule that picks the mode for each frequency of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum RegimeRecipe {
    /// `ν ≈ ratio · λ`
    Transversal { ratio: f64 },
    /// `ν ≈ λ(1 - λ^{-β})`
    Glancing { beta: f64 },
    /// `ν ≈ λ`
    TurningPoint,
    /// `ν ≈ ratio · λ`, `ratio > 1`
    Elliptic { ratio: f64 },
}

/// Half-integer order chosen by a recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnappedOrder {
    pub mode: ModeIndex,
    /// the continuous order the recipe asks for
    pub target: f64,
    /// `|ν - target| / λ`
    pub snap_error: f64,
}

impl RegimeRecipe {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RegimeRecipe::Transversal { ratio } => ratio > 0.0 && ratio < 1.0,
            RegimeRecipe::Glancing { beta } => beta > 0.0 && beta.is_finite(),
            RegimeRecipe::TurningPoint => true,
            RegimeRecipe::Elliptic { ratio } => ratio > 1.0 && ratio.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("bad regime recipe {self:?}")))
        }
    }

    pub fn target(&self, lambda: f64) -> f64 {
        match *self {
            RegimeRecipe::Transversal { ratio } | RegimeRecipe::Elliptic { ratio } => ratio * lambda,
            RegimeRecipe::Glancing { beta } => lambda * (1.0 - lambda.powf(-beta)),
            RegimeRecipe::TurningPoint => lambda,
        }
    }

    /// Nearest half-integer order. Glancing orders must land within
    /// `λ^{-β}/10` of the requested `1 - ν/λ`, otherwise the frequency is
    /// refused.
    pub fn order(&self, lambda: f64) -> Result<SnappedOrder> {
        self.validate()?;
        let target = self.target(lambda);
        let m = (target - 0.5).round().max(0.0);
        if m > u32::MAX as f64 {
            return Err(Error::Measurement { lambda, reason: "order out of range".into() });
        }
        let mode = ModeIndex::new(m as u32);
        let snap_error = (mode.nu().value() - target).abs() / lambda;
        if let RegimeRecipe::Glancing { beta } = *self {
            let allowed = lambda.powf(-beta) / 10.0;
            if snap_error >= allowed {
                return Err(Error::Measurement {
                    lambda,
                    reason: format!("half-integer snapping error {snap_error:.3e} exceeds {allowed:.3e}"),
                });
            }
        }
        Ok(SnappedOrder { mode, target, snap_error })
    }
}
