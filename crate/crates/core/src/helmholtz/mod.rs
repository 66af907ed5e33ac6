//! Radial Helmholtz problems `(Δ + λ²) w = χ_λ f` outside the unit ball,
//! one spherical-harmonic degree at a time, with an outgoing radiation
//! condition at infinity and a Dirichlet or Neumann condition on `r = 1`.

mod boundary;
mod export;
mod kernel;
mod solve;

pub use boundary::{
    boundary_angles, expand_boundary, homogeneous_mode, synthesize, truncation_degree, BoundaryData, Synthesis,
};
pub use export::{kernel_column, SolutionMetadata};
pub use kernel::{green_kernel, RadialBasis};
pub use solve::{solve_mode, solve_mode_dirichlet, solve_mode_neumann, solve_modes, ModeSolution, QuadratureRule};

use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;
use crate::special_fn::Order;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Spherical-harmonic degree `l`, with `mu^2 = l(l+1)` and `nu = l + 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: u32,
}

impl ModeIndex {
    pub fn new(l: u32) -> Self {
        ModeIndex { l }
    }

    pub fn mu_sq(self) -> u64 {
        let l = self.l as u64;
        l * (l + 1)
    }

    pub fn nu(self) -> Order {
        Order::half_integer(self.l)
    }

    /// `4 nu^2 - 4 mu^2`, which is 1 for every degree.
    pub fn four_nu_sq_minus_four_mu_sq(self) -> i128 {
        let two_nu = 2 * self.l as i128 + 1;
        two_nu * two_nu - 4 * self.mu_sq() as i128
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Frequency(f64);

impl Frequency {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda.is_finite() {
            Ok(Frequency(lambda))
        } else {
            Err(Error::Invalid(format!("frequency must be finite and positive, got {lambda}")))
        }
    }

    /// Frequencies used in scaling experiments must satisfy `lambda >= 1`.
    pub fn for_scaling(lambda: f64) -> Result<Self> {
        let f = Self::new(lambda)?;
        if lambda < 1.0 {
            return Err(Error::Invalid(format!("scaling runs need lambda >= 1, got {lambda}")));
        }
        Ok(f)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Smooth cutoff `shape(t)`: 1 on `[-1/2, 1/2]`, 0 outside `(-1, 1)`, with a
/// `C^∞` transition built from a flat function `g` as `g(1-u) / (g(1-u) + g(u))`,
/// `u = 2|t| - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffProfile {
    /// `g(x) = exp(-1/x)`
    #[default]
    Standard,
    /// `g(x) = exp(-1/x^2)`, a steeper alternate
    Steep,
}

impl CutoffProfile {
    fn flat(self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            CutoffProfile::Standard => (-1.0 / x).exp(),
            CutoffProfile::Steep => (-1.0 / (x * x)).exp(),
        }
    }

    pub fn shape(self, t: f64) -> f64 {
        let a = t.abs();
        if a <= 0.5 {
            return 1.0;
        }
        if a >= 1.0 {
            return 0.0;
        }
        let u = 2.0 * a - 1.0;
        let (g0, g1) = (self.flat(1.0 - u), self.flat(u));
        g0 / (g0 + g1)
    }

    /// `chi_lambda(r) = shape(lambda^alpha (r - 1))`.
    pub fn collar(self, alpha: f64, lambda: f64, r: f64) -> f64 {
        self.shape(lambda.powf(alpha) * (r - 1.0))
    }
}

/// Quadrature on the collar `[1, 1 + lambda^{-alpha}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusSpec {
    pub alpha: f64,
    pub lambda: Frequency,
    pub cutoff: CutoffProfile,
    pub points_per_wavelength: f64,
    pub rule: CompositeRule,
}

pub const DEFAULT_POINTS_PER_WAVELENGTH: f64 = 10.0;
pub const POINTS_PER_PANEL: usize = 16;
pub const MIN_NODES: usize = 64;

impl AnnulusSpec {
    pub fn new(alpha: f64, lambda: Frequency, cutoff: CutoffProfile) -> Result<Self> {
        Self::with_refinement(alpha, lambda, cutoff, DEFAULT_POINTS_PER_WAVELENGTH, 1)
    }

    /// Default panel layout multiplied by `refine`.
    pub fn with_refinement(
        alpha: f64,
        lambda: Frequency,
        cutoff: CutoffProfile,
        points_per_wavelength: f64,
        refine: usize,
    ) -> Result<Self> {
        if !(0.0..2.0 / 3.0).contains(&alpha) {
            return Err(Error::Invalid(format!("alpha must lie in [0, 2/3), got {alpha}")));
        }
        if !(points_per_wavelength > 0.0) || refine == 0 {
            return Err(Error::Invalid("resolution parameters must be positive".into()));
        }
        let lam = lambda.value();
        let waves = lam.powf(1.0 - alpha);
        let needed = Self::min_nodes(alpha, lam, points_per_wavelength);
        let panels = ((waves / 4.0).ceil() as usize).max(needed.div_ceil(POINTS_PER_PANEL)) * refine;
        let width = lam.powf(-alpha);
        let rule = CompositeRule::new(1.0, 1.0 + width, panels, POINTS_PER_PANEL)?;
        Ok(AnnulusSpec { alpha, lambda, cutoff, points_per_wavelength, rule })
    }

    /// `max(64, ceil(points_per_wavelength * lambda^{1-alpha}))`.
    pub fn min_nodes(alpha: f64, lambda: f64, points_per_wavelength: f64) -> usize {
        MIN_NODES.max((points_per_wavelength * lambda.powf(1.0 - alpha)).ceil() as usize)
    }

    pub fn width(&self) -> f64 {
        self.rule.b - self.rule.a
    }

    pub fn outer_radius(&self) -> f64 {
        self.rule.b
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.rule.weights
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn chi(&self, r: f64) -> f64 {
        self.cutoff.collar(self.alpha, self.lambda.value(), r)
    }

    /// Refuses layouts below the node-count floor or whose weights do not
    /// sum to the collar width.
    pub fn check_resolution(&self) -> Result<()> {
        let need = Self::min_nodes(self.alpha, self.lambda.value(), self.points_per_wavelength);
        if self.len() < need {
            return Err(Error::UnderResolved(format!("{} nodes, need {need}", self.len())));
        }
        let sum: f64 = self.weights().iter().sum();
        let width = self.lambda.value().powf(-self.alpha);
        if (sum - width).abs() > 1e-12 * width {
            return Err(Error::UnderResolved(format!("weights sum {sum}, collar width {width}")));
        }
        Ok(())
    }

    /// Same collar with twice as many panels.
    pub fn doubled(&self) -> Result<Self> {
        let rule = CompositeRule::new(self.rule.a, self.rule.b, 2 * self.rule.panels, self.rule.points_per_panel)?;
        Ok(AnnulusSpec { rule, ..self.clone() })
    }
}

/// Complex samples on radial nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGridFunction {
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl RadialGridFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Invalid(format!("{} nodes but {} values", nodes.len(), values.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Invalid("grid function values must be finite".into()));
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(Error::Invalid("radial nodes must be strictly increasing".into()));
        }
        Ok(RadialGridFunction { nodes, values })
    }

    pub fn sample<F: Fn(f64) -> Complex64>(spec: &AnnulusSpec, f: F) -> Result<Self> {
        let nodes = spec.nodes().to_vec();
        let values = nodes.iter().map(|&r| f(r)).collect();
        Self::new(nodes, values)
    }

    pub fn zeros(spec: &AnnulusSpec) -> Self {
        RadialGridFunction { nodes: spec.nodes().to_vec(), values: vec![Complex64::new(0.0, 0.0); spec.len()] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(sum_i w_i |v_i|^2)^{1/2}` with the annulus weights.
    pub fn l2_norm(&self, spec: &AnnulusSpec) -> f64 {
        self.values.iter().zip(spec.weights()).map(|(v, w)| w * v.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_order_identity_is_exact() {
        for l in [0u32, 1, 2, 17, 1000, 4_000_000] {
            assert_eq!(ModeIndex::new(l).four_nu_sq_minus_four_mu_sq(), 1);
        }
        assert_eq!(ModeIndex::new(3).nu().value(), 3.5);
    }

    #[test]
    fn cutoff_plateau_support_and_range() {
        for profile in [CutoffProfile::Standard, CutoffProfile::Steep] {
            assert_eq!(profile.shape(0.0), 1.0);
            assert_eq!(profile.shape(0.5), 1.0);
            assert_eq!(profile.shape(-0.5), 1.0);
            assert_eq!(profile.shape(1.0), 0.0);
            assert!((profile.shape(0.75) - 0.5).abs() < 1e-15);
            let mut prev = 1.0;
            for i in 0..=200 {
                let v = profile.shape(0.5 + 0.5 * i as f64 / 200.0);
                assert!((0.0..=1.0).contains(&v) && v <= prev);
                prev = v;
            }
            let lam = 300.0;
            assert_eq!(profile.collar(0.4, lam, 1.0), 1.0);
            assert_eq!(profile.collar(0.4, lam, 1.0 + lam.powf(-0.4)), 0.0);
        }
    }

    #[test]
    fn annulus_meets_node_floor_and_weight_sum() {
        for &lam in &[1.0, 128.0, 1024.0, 8192.0] {
            let spec = AnnulusSpec::new(0.4, Frequency::new(lam).unwrap(), CutoffProfile::Standard).unwrap();
            spec.check_resolution().unwrap();
            assert!(spec.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(spec.nodes()[0] > 1.0 && *spec.nodes().last().unwrap() < spec.outer_radius());
        }
    }

    #[test]
    fn under_resolved_layout_is_refused() {
        let mut spec = AnnulusSpec::new(0.4, Frequency::new(2048.0).unwrap(), CutoffProfile::Standard).unwrap();
        spec.rule = CompositeRule::new(spec.rule.a, spec.rule.b, 2, 16).unwrap();
        assert!(matches!(spec.check_resolution(), Err(Error::UnderResolved(_))));
    }

    #[test]
    fn alpha_range_enforced() {
        let lam = Frequency::new(10.0).unwrap();
        assert!(AnnulusSpec::new(2.0 / 3.0, lam, CutoffProfile::Standard).is_err());
        assert!(AnnulusSpec::new(-0.1, lam, CutoffProfile::Standard).is_err());
        assert!(Frequency::for_scaling(0.5).is_err());
        assert!(Frequency::new(0.5).is_ok());
    }
}
