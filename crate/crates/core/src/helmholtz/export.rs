use super::{AnnulusSpec, BoundaryCondition, ModeSolution, QuadratureRule, RadialBasis, RadialGridFunction};
use crate::error::Result;
use serde::Serialize;
use std::fmt::Write;

impl RadialGridFunction {
    /// `r,re,im` rows with nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,re,im\n");
        for (r, v) in self.nodes.iter().zip(&self.values) {
            let _ = writeln!(out, "{r:.8e},{:.8e},{:.8e}", v.re, v.im);
        }
        out
    }
}

/// Kernel column `s ↦ G(r_i, s)` sampled on the annulus nodes.
pub fn kernel_column(basis: &RadialBasis, s: f64, spec: &AnnulusSpec) -> Result<RadialGridFunction> {
    let values = spec.nodes().iter().map(|&r| basis.kernel(r, s)).collect::<Result<Vec<_>>>()?;
    RadialGridFunction::new(spec.nodes().to_vec(), values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionMetadata {
    pub l: u32,
    pub lambda: f64,
    pub alpha: f64,
    pub node_count: usize,
    pub boundary_condition: BoundaryCondition,
    pub quadrature: QuadratureRule,
    pub l2_norm: f64,
    /// `|w(1)| / max |w|`
    pub residual_boundary: f64,
    /// `|∂_r w(1)| / (λ max |w|)`
    pub residual_neumann: f64,
    /// `max |L w - χ f| / max |χ f|`
    pub residual_pde: f64,
}

impl ModeSolution {
    pub fn metadata(&self, probes: usize) -> Result<SolutionMetadata> {
        Ok(SolutionMetadata {
            l: self.mode.l,
            lambda: self.lambda(),
            alpha: self.spec.alpha,
            node_count: self.spec.len(),
            boundary_condition: self.bc,
            quadrature: self.rule,
            l2_norm: self.l2_norm(),
            residual_boundary: self.dirichlet_residual()?,
            residual_neumann: self.neumann_residual()?,
            residual_pde: self.pde_residual(probes)?,
        })
    }
}
