use crate::error::{CliError, CliResult};
use collar_core::helmholtz::{BoundaryCondition, CutoffProfile, QuadratureRule};
use collar_core::scaling::{NormKind, RegimeRecipe, Weighting};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const DEFAULT_ALPHA: f64 = 0.4;
pub const DEFAULT_EPSILON0: f64 = 0.1;
pub const DEFAULT_LAMBDA_MIN: f64 = 128.0;
pub const DEFAULT_LAMBDA_MAX: f64 = 8192.0;

/// Built-in sweep lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// ν/λ = 1/2: Hankel norms and operator norm
    Transversal,
    /// ν = λ(1 - λ^{-β}), β from `--beta` (default α)
    Glancing,
    /// ν = 2λ operator norm
    Elliptic,
    /// the full scaling-law battery
    Acceptance,
}

/// What a sweep's fitted slope is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Expectation {
    /// `|slope - exponent| <= tolerance`
    Band { exponent: f64, tolerance: f64 },
    /// `slope <= bound`
    AtMost { bound: f64 },
}

impl Expectation {
    pub fn holds(&self, slope: f64) -> bool {
        match *self {
            Expectation::Band { exponent, tolerance } => (slope - exponent).abs() <= tolerance,
            Expectation::AtMost { bound } => slope <= bound,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Expectation::Band { exponent, tolerance } => format!("{exponent:.4} ± {tolerance:.2}"),
            Expectation::AtMost { bound } => format!("<= {bound:.4}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub name: String,
    pub kind: NormKind,
    #[serde(flatten)]
    pub recipe: RegimeRecipe,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<CutoffProfile>,
    #[serde(default)]
    pub weighting: Weighting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_at_most: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SourceKind {
    /// `f ≡ 1`
    Constant,
    /// `f(r) = cos 3r + i (r - 1)`
    Smooth,
    /// unit value at one node, zero elsewhere
    Spike { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub modes: Vec<u32>,
    /// defaults to `lambda_min`
    pub lambda: Option<f64>,
    pub source: SourceKind,
    pub quadrature: QuadratureRule,
    pub pde_probes: usize,
    pub tol_boundary: f64,
    pub tol_pde: f64,
    pub tol_neumann: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            modes: vec![0, 10, 100],
            lambda: None,
            source: SourceKind::Smooth,
            quadrature: QuadratureRule::Product,
            pde_probes: 32,
            tol_boundary: 1e-10,
            tol_pde: 1e-4,
            tol_neumann: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureOverrides {
    pub points_per_wavelength: Option<f64>,
    pub refine: Option<usize>,
}

/// Everything a run depends on. Output locations are not part of the
/// snapshot, so reports written to different directories still compare equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub beta: Option<f64>,
    pub epsilon0: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub bc: BoundaryCondition,
    pub cutoff: CutoffProfile,
    pub preset: Option<Preset>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub plot: bool,
    pub quadrature: QuadratureOverrides,
    pub solve: SolveConfig,
    #[serde(rename = "sweep")]
    pub sweeps: Vec<SweepConfig>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            alpha: DEFAULT_ALPHA,
            beta: None,
            epsilon0: DEFAULT_EPSILON0,
            lambda_min: DEFAULT_LAMBDA_MIN,
            lambda_max: DEFAULT_LAMBDA_MAX,
            bc: BoundaryCondition::Dirichlet,
            cutoff: CutoffProfile::Standard,
            preset: None,
            out: None,
            plot: false,
            quadrature: QuadratureOverrides::default(),
            solve: SolveConfig::default(),
            sweeps: Vec::new(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub epsilon0: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub bc: Option<BoundaryCondition>,
    pub out: Option<PathBuf>,
    pub plot: bool,
    pub preset: Option<Preset>,
}

fn is_power_of_two(x: f64) -> bool {
    x >= 1.0 && x.is_finite() && x.log2().fract() == 0.0
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// File (if any), then flags; validated.
    pub fn resolve(path: Option<&Path>, flags: &Overrides) -> CliResult<Self> {
        let mut c = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        c.apply(flags);
        c.validate()?;
        Ok(c)
    }

    pub fn apply(&mut self, f: &Overrides) {
        if let Some(v) = f.alpha {
            self.alpha = v;
        }
        if f.beta.is_some() {
            self.beta = f.beta;
        }
        if let Some(v) = f.epsilon0 {
            self.epsilon0 = v;
        }
        if let Some(v) = f.lambda_min {
            self.lambda_min = v;
        }
        if let Some(v) = f.lambda_max {
            self.lambda_max = v;
        }
        if let Some(v) = f.bc {
            self.bc = v;
        }
        if f.out.is_some() {
            self.out = f.out.clone();
        }
        self.plot |= f.plot;
        if f.preset.is_some() {
            self.preset = f.preset;
        }
        // --beta retargets every glancing sweep
        if let Some(b) = f.beta {
            for s in &mut self.sweeps {
                if let RegimeRecipe::Glancing { beta } = &mut s.recipe {
                    *beta = b;
                }
            }
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.alpha >= 0.0 && self.alpha < 2.0 / 3.0) {
            return bad(format!("alpha must lie in [0, 2/3), got {}", self.alpha));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0 && b.is_finite()) {
                return bad(format!("beta must be positive, got {b}"));
            }
        }
        if !(self.epsilon0 > 0.0 && self.epsilon0 < 0.5) {
            return bad(format!("epsilon0 must lie in (0, 1/2), got {}", self.epsilon0));
        }
        for (name, v) in [("lambda_min", self.lambda_min), ("lambda_max", self.lambda_max)] {
            if !is_power_of_two(v) {
                return bad(format!("{name} must be a power of two >= 1, got {v}"));
            }
        }
        if self.lambda_min > self.lambda_max {
            return bad(format!("lambda_min {} exceeds lambda_max {}", self.lambda_min, self.lambda_max));
        }
        if let Some(p) = self.quadrature.points_per_wavelength {
            if !(p >= 2.0 && p.is_finite()) {
                return bad(format!("points_per_wavelength must be at least 2, got {p}"));
            }
        }
        if self.quadrature.refine == Some(0) {
            return bad("refine must be at least 1".into());
        }
        if let Some(l) = self.solve.lambda {
            if !(l >= 1.0 && l.is_finite()) {
                return bad(format!("solve.lambda must be >= 1, got {l}"));
            }
        }
        let sweeps = self.sweep_list();
        if !sweeps.is_empty() && self.lambdas().len() < 5 {
            return bad(format!(
                "the grid {}..={} has {} points; sweeps need at least 5",
                self.lambda_min,
                self.lambda_max,
                self.lambdas().len()
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &sweeps {
            if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                return bad(format!("sweep name {:?} must be non-empty and use [A-Za-z0-9._-]", s.name));
            }
            if !seen.insert(s.name.clone()) {
                return bad(format!("duplicate sweep name {:?}", s.name));
            }
            s.recipe.validate().map_err(|e| CliError::Config(format!("sweep {}: {e}", s.name)))?;
            if let Some(t) = s.tolerance {
                if !(t > 0.0) {
                    return bad(format!("sweep {}: tolerance must be positive", s.name));
                }
            }
        }
        Ok(())
    }

    /// Dyadic grid `lambda_min, 2 lambda_min, …, lambda_max`.
    pub fn lambdas(&self) -> Vec<f64> {
        let (k0, k1) = (self.lambda_min.log2() as i32, self.lambda_max.log2() as i32);
        (k0..=k1).map(|k| 2f64.powi(k)).collect()
    }

    pub fn effective_beta(&self) -> f64 {
        self.beta.unwrap_or(self.alpha)
    }

    /// Preset sweeps followed by the explicitly configured ones.
    pub fn sweep_list(&self) -> Vec<SweepConfig> {
        let mut out = self.preset.map(|p| preset_sweeps(p, self.effective_beta())).unwrap_or_default();
        out.extend(self.sweeps.iter().cloned());
        out
    }

    /// SHA-256 of the canonical JSON snapshot.
    pub fn hash(&self) -> String {
        let text = crate::json::to_string(self).expect("config serialises");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn sweep(name: &str, kind: NormKind, recipe: RegimeRecipe) -> SweepConfig {
    SweepConfig {
        name: name.into(),
        kind,
        recipe,
        cutoff: None,
        weighting: Weighting::Plain,
        expected_slope: None,
        tolerance: None,
        slope_at_most: None,
    }
}

pub fn preset_sweeps(preset: Preset, beta: f64) -> Vec<SweepConfig> {
    use NormKind::*;
    let half = RegimeRecipe::Transversal { ratio: 0.5 };
    let glance = RegimeRecipe::Glancing { beta };
    match preset {
        Preset::Transversal => vec![
            sweep("transversal-hankel-l2sq", HankelL2Sq, half),
            sweep("transversal-boundary-modulus", HankelModulusSqAtBoundary, half),
            sweep("transversal-operator-norm", OperatorNorm, half),
            SweepConfig { weighting: Weighting::Radial, ..sweep("transversal-operator-norm-radial", OperatorNorm, half) },
        ],
        Preset::Glancing => vec![
            sweep("glancing-hankel-l2sq", HankelL2Sq, glance),
            sweep("glancing-boundary-modulus", HankelModulusSqAtBoundary, glance),
            sweep("glancing-cross-term", CrossTermL2, glance),
            sweep("glancing-operator-norm", OperatorNorm, glance),
        ],
        Preset::Elliptic => vec![sweep("elliptic-operator-norm", OperatorNorm, RegimeRecipe::Elliptic { ratio: 2.0 })],
        Preset::Acceptance => vec![
            sweep("transversal-hankel-l2sq", HankelL2Sq, half),
            sweep("glancing-0.3-boundary-modulus", HankelModulusSqAtBoundary, RegimeRecipe::Glancing { beta: 0.3 }),
            sweep("glancing-0.3-cross-term", CrossTermL2, RegimeRecipe::Glancing { beta: 0.3 }),
            sweep("transversal-operator-norm", OperatorNorm, half),
            sweep("glancing-0.4-operator-norm", OperatorNorm, RegimeRecipe::Glancing { beta: 0.4 }),
            sweep("glancing-0.2-operator-norm", OperatorNorm, RegimeRecipe::Glancing { beta: 0.2 }),
            sweep("elliptic-operator-norm", OperatorNorm, RegimeRecipe::Elliptic { ratio: 2.0 }),
        ],
    }
}

/// Exponent the analysis predicts for `kind` under `recipe`, if any.
pub fn predicted_exponent(kind: NormKind, recipe: RegimeRecipe, alpha: f64) -> Option<f64> {
    use NormKind::*;
    use RegimeRecipe::*;
    match (kind, recipe) {
        (HankelL2Sq, Transversal { .. }) => Some(-1.0 - alpha),
        (HankelL2Sq, Glancing { beta }) => Some(if beta <= alpha { -1.0 - (alpha - beta) } else { -1.0 }),
        (HankelModulusSqAtBoundary, Transversal { .. }) => Some(-1.0),
        (HankelModulusSqAtBoundary, Glancing { beta }) => Some(-1.0 + beta / 2.0),
        (HankelModulusSqAtBoundary, TurningPoint) => Some(-2.0 / 3.0),
        (CrossTermL2, Glancing { beta }) => {
            Some(if beta <= alpha { -1.0 - alpha / 2.0 + beta / 4.0 } else { -1.0 + beta / 4.0 })
        }
        (OperatorNorm, Transversal { .. }) => Some(-1.0 - alpha),
        (OperatorNorm, Glancing { beta }) => Some(glancing_operator_branches(alpha, beta).0),
        _ => None,
    }
}

/// `(applicable, other)` exponents of the two glancing operator-norm branches.
pub fn glancing_operator_branches(alpha: f64, beta: f64) -> (f64, f64) {
    let wide = -1.0 - alpha / 2.0;
    let narrow = -1.0 - alpha / 2.0 - (alpha - beta);
    if beta >= alpha {
        (wide, narrow)
    } else {
        (narrow, wide)
    }
}

/// Hankel-norm sweeps ±0.10, operator and cross-term sweeps ±0.15, glancing
/// operator sweeps below β = α ±0.20.
pub fn default_tolerance(kind: NormKind, recipe: RegimeRecipe, alpha: f64) -> f64 {
    match (kind, recipe) {
        (NormKind::OperatorNorm, RegimeRecipe::Glancing { beta }) if beta < alpha => 0.20,
        (NormKind::OperatorNorm | NormKind::CrossTermL2 | NormKind::SolutionNorm, _) => 0.15,
        _ => 0.10,
    }
}

impl SweepConfig {
    pub fn expectation(&self, alpha: f64) -> Option<Expectation> {
        if let Some(bound) = self.slope_at_most {
            return Some(Expectation::AtMost { bound });
        }
        let tolerance = self.tolerance.unwrap_or_else(|| default_tolerance(self.kind, self.recipe, alpha));
        if let Some(exponent) = self.expected_slope {
            return Some(Expectation::Band { exponent, tolerance });
        }
        if let (NormKind::OperatorNorm, RegimeRecipe::Elliptic { .. }) = (self.kind, self.recipe) {
            return Some(Expectation::AtMost { bound: -4.0 });
        }
        predicted_exponent(self.kind, self.recipe, alpha).map(|exponent| Expectation::Band { exponent, tolerance })
    }
}
