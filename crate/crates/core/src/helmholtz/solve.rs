use super::{AnnulusSpec, BoundaryCondition, Frequency, ModeIndex, RadialBasis, RadialGridFunction};
use crate::error::{domain, Error, Result};
use crate::special_fn::{Scaled, ScaledComplex};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// How `∫ G(r, s) χ(s) f(s) s² ds` is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Split the integral at `r` and integrate each side against the panel
    /// interpolant of `f`; resolves the kink of `G` on the diagonal.
    #[default]
    Product,
    /// Plain `Σ_k w_k G(r, s_k) χ_k f_k s_k²`.
    Nystrom,
}

/// Solution of one radial mode problem, evaluable at any `r >= 1`.
///
/// `w(r) = (π/2) [b(r) A(r) + a(r) B(r)]` with `A(r) = ∫_1^r aF` and
/// `B(r) = ∫_r^R bF`, `F = χ f s²`.
#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub mode: ModeIndex,
    pub bc: BoundaryCondition,
    pub rule: QuadratureRule,
    pub spec: AnnulusSpec,
    pub values: RadialGridFunction,
    basis: RadialBasis,
    /// `f` at the nodes
    source: Vec<Complex64>,
    /// `χ f s²` at the nodes
    forcing: Vec<Complex64>,
    /// `Σ_{k<i} w_k a_k F_k` and `Σ_{k>=i} w_k b_k F_k`, length `n + 1`
    lower: Vec<ScaledComplex>,
    upper: Vec<ScaledComplex>,
}

pub fn solve_mode_dirichlet(
    mode: ModeIndex,
    lambda: Frequency,
    f: &RadialGridFunction,
    spec: &AnnulusSpec,
) -> Result<ModeSolution> {
    solve_mode(mode, lambda, BoundaryCondition::Dirichlet, f, spec, QuadratureRule::Product)
}

pub fn solve_mode_neumann(
    mode: ModeIndex,
    lambda: Frequency,
    f: &RadialGridFunction,
    spec: &AnnulusSpec,
) -> Result<ModeSolution> {
    solve_mode(mode, lambda, BoundaryCondition::Neumann, f, spec, QuadratureRule::Product)
}

pub fn solve_mode(
    mode: ModeIndex,
    lambda: Frequency,
    bc: BoundaryCondition,
    f: &RadialGridFunction,
    spec: &AnnulusSpec,
    rule: QuadratureRule,
) -> Result<ModeSolution> {
    if lambda != spec.lambda {
        return Err(Error::Invalid(format!(
            "annulus built for lambda={} but solve asked for {}",
            spec.lambda.value(),
            lambda.value()
        )));
    }
    spec.check_resolution()?;
    if f.nodes.as_slice() != spec.nodes() {
        return Err(Error::Invalid("source is not sampled on the annulus nodes".into()));
    }
    let basis = RadialBasis::new(mode, lambda, bc)?;
    let n = spec.len();
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for &r in spec.nodes() {
        let (ai, bi) = basis.factors(r)?;
        a.push(ai);
        b.push(bi);
    }
    let forcing: Vec<Complex64> = spec
        .nodes()
        .iter()
        .zip(&f.values)
        .map(|(&r, &v)| v * (spec.chi(r) * r * r))
        .collect();

    let mut lower = vec![ScaledComplex::ZERO; n + 1];
    for i in 0..n {
        let term = a[i].to_complex() * forcing[i];
        lower[i + 1] = lower[i].add(term.scale(spec.weights()[i]));
    }
    let mut upper = vec![ScaledComplex::ZERO; n + 1];
    for i in (0..n).rev() {
        let term = (b[i] * forcing[i]).scale(spec.weights()[i]);
        upper[i] = upper[i + 1].add(term);
    }

    let values = match rule {
        QuadratureRule::Nystrom => (0..n)
            .map(|i| combine(a[i], b[i], lower[i + 1], upper[i + 1]))
            .collect(),
        QuadratureRule::Product => {
            let m = spec.rule.points_per_panel;
            (0..n)
                .map(|i| {
                    let (p, j) = (i / m, i % m);
                    let nodes = spec.rule.panel_nodes(p);
                    let mut lo = lower[nodes.start];
                    for (c, k) in spec.rule.left_partial_weights(j).zip(nodes.clone()) {
                        lo = lo.add((a[k].to_complex() * forcing[k]).scale(c));
                    }
                    let mut hi = upper[nodes.end];
                    for (c, k) in spec.rule.right_partial_weights(j).zip(nodes) {
                        hi = hi.add((b[k] * forcing[k]).scale(c));
                    }
                    combine(a[i], b[i], lo, hi)
                })
                .collect()
        }
    };
    let values = RadialGridFunction::new(spec.nodes().to_vec(), values)?;
    Ok(ModeSolution {
        mode,
        bc,
        rule,
        spec: spec.clone(),
        values,
        basis,
        source: f.values.clone(),
        forcing,
        lower,
        upper,
    })
}

fn combine(a: Scaled, b: ScaledComplex, lower: ScaledComplex, upper: ScaledComplex) -> Complex64 {
    (b * lower).add(a.to_complex() * upper).scale(FRAC_PI_2).to_complex()
}

/// Solves many modes in parallel; results come back in the order of `modes`.
pub fn solve_modes<F>(
    modes: &[ModeIndex],
    lambda: Frequency,
    bc: BoundaryCondition,
    spec: &AnnulusSpec,
    source: F,
) -> Vec<Result<ModeSolution>>
where
    F: Fn(ModeIndex) -> Result<RadialGridFunction> + Sync,
{
    modes
        .par_iter()
        .map(|&m| solve_mode(m, lambda, bc, &source(m)?, spec, QuadratureRule::Product))
        .collect()
}

impl ModeSolution {
    pub fn lambda(&self) -> f64 {
        self.spec.lambda.value()
    }

    /// `χ(r) f(r)` with `f` the panel interpolant of the samples.
    pub fn rhs(&self, r: f64) -> Complex64 {
        let chi = self.spec.chi(r);
        if chi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.spec.rule.interpolate(&self.source, r) * chi
    }

    /// `w(r)` for any `r >= 1`.
    pub fn eval(&self, r: f64) -> Result<Complex64> {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(domain("mode solution is defined for r >= 1", r));
        }
        let (a, b) = self.basis.factors(r)?;
        let n = self.spec.len();
        let nodes = self.spec.nodes();
        if r >= self.spec.outer_radius() {
            return Ok(combine(a, b, self.lower[n], ScaledComplex::ZERO));
        }
        match self.rule {
            QuadratureRule::Nystrom => {
                let i = nodes.partition_point(|&s| s <= r);
                Ok(combine(a, b, self.lower[i], self.upper[i]))
            }
            QuadratureRule::Product => {
                let rule = &self.spec.rule;
                let p = rule.panel_of(r);
                let (lo, hi) = rule.panel_bounds(p);
                let range = rule.panel_nodes(p);
                let mut left = self.lower[range.start];
                for (x, w) in rule.sub_rule(lo, r) {
                    let (ax, _) = self.basis.factors(x)?;
                    left = left.add(ax.to_complex() * (self.rhs(x) * (w * x * x)));
                }
                let mut right = self.upper[range.end];
                for (x, w) in rule.sub_rule(r, hi) {
                    let (_, bx) = self.basis.factors(x)?;
                    right = right.add(bx * (self.rhs(x) * (w * x * x)));
                }
                Ok(combine(a, b, left, right))
            }
        }
    }

    /// `χ f s²` at the nodes.
    pub fn forcing(&self) -> &[Complex64] {
        &self.forcing
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.l2_norm(&self.spec)
    }

    /// `max |χ f|` over the nodes.
    pub fn rhs_sup(&self) -> f64 {
        self.spec
            .nodes()
            .iter()
            .zip(&self.source)
            .map(|(&r, v)| self.spec.chi(r) * v.norm())
            .fold(0.0, f64::max)
    }

    /// `∂_r w(1)` from a fourth-order one-sided stencil with step `1e-3/λ`.
    pub fn boundary_derivative(&self) -> Result<Complex64> {
        let h = 1e-3 / self.lambda();
        let c = [-25.0, 48.0, -36.0, 16.0, -3.0];
        let mut d = Complex64::new(0.0, 0.0);
        for (k, ck) in c.iter().enumerate() {
            d += self.eval(1.0 + k as f64 * h)? * *ck;
        }
        Ok(d / (12.0 * h))
    }

    /// `|∂_r w(1)| / (λ max_i |w_i|)`.
    pub fn neumann_residual(&self) -> Result<f64> {
        let scale = self.lambda() * self.values.sup_norm();
        let d = self.boundary_derivative()?.norm();
        Ok(if scale > 0.0 { d / scale } else { d })
    }

    /// `|w(1)| / max_i |w_i|`.
    pub fn dirichlet_residual(&self) -> Result<f64> {
        let scale = self.values.sup_norm();
        let v = self.eval(1.0)?.norm();
        Ok(if scale > 0.0 { v / scale } else { v })
    }

    /// `max |L w - χ f| / max |χ f|` over `probes` interior points, with
    /// `L = d²/dr² + (2/r) d/dr + λ² - μ²/r²` from Richardson-extrapolated
    /// central differences with step `4e-3/λ`.
    pub fn pde_residual(&self, probes: usize) -> Result<f64> {
        let lam = self.lambda();
        let mu_sq = self.mode.mu_sq() as f64;
        let h = 4e-3 / lam;
        let (r0, r1) = (1.0 + 4.0 * h, self.spec.outer_radius() - 4.0 * h);
        let mut worst: f64 = 0.0;
        for q in 0..probes {
            let r = r0 + (r1 - r0) * (q as f64 + 0.5) / probes as f64;
            let w: Vec<Complex64> =
                (-2..=2).map(|k| self.eval(r + k as f64 * h)).collect::<Result<_>>()?;
            let d1 = |s: usize| (w[2 + s] - w[2 - s]) / (2.0 * s as f64 * h);
            let d2 = |s: usize| (w[2 + s] - w[2] * 2.0 + w[2 - s]) / (s as f64 * h).powi(2);
            let dw = (d1(1) * 4.0 - d1(2)) / 3.0;
            let ddw = (d2(1) * 4.0 - d2(2)) / 3.0;
            let lw = ddw + dw * (2.0 / r) + w[2] * (lam * lam - mu_sq / (r * r));
            worst = worst.max((lw - self.rhs(r)).norm());
        }
        let scale = self.rhs_sup();
        Ok(if scale > 0.0 { worst / scale } else { worst })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helmholtz::{green_kernel, CutoffProfile};
    use crate::special_fn::Order;

    fn setup(lam: f64) -> (Frequency, AnnulusSpec) {
        let l = Frequency::new(lam).unwrap();
        (l, AnnulusSpec::new(0.4, l, CutoffProfile::Standard).unwrap())
    }

    fn smooth(spec: &AnnulusSpec) -> RadialGridFunction {
        RadialGridFunction::sample(spec, |r| Complex64::new((3.0 * r).cos(), r - 1.0)).unwrap()
    }

    #[test]
    fn zero_source_gives_zero() {
        let (lam, spec) = setup(64.0);
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            for rule in [QuadratureRule::Product, QuadratureRule::Nystrom] {
                let z = RadialGridFunction::zeros(&spec);
                let s = solve_mode(ModeIndex::new(7), lam, bc, &z, &spec, rule).unwrap();
                assert!(s.values.values.iter().all(|v| v.norm() == 0.0));
                assert_eq!(s.eval(1.01).unwrap().norm(), 0.0);
            }
        }
    }

    #[test]
    fn spike_reproduces_kernel_column() {
        let (lam, spec) = setup(100.0);
        let k = 37;
        let mut f = RadialGridFunction::zeros(&spec);
        f.values[k] = Complex64::new(1.0, 0.0);
        let sk = spec.nodes()[k];
        let scale = spec.weights()[k] * spec.chi(sk) * sk * sk;
        let nu = Order::half_integer(12);
        for rule in [QuadratureRule::Nystrom, QuadratureRule::Product] {
            let s = solve_mode(ModeIndex::new(12), lam, BoundaryCondition::Dirichlet, &f, &spec, rule).unwrap();
            let own = spec.rule.panel_nodes(spec.rule.panel_of(sk));
            for (i, &r) in spec.nodes().iter().enumerate() {
                if rule == QuadratureRule::Product && own.contains(&i) {
                    continue;
                }
                let g = green_kernel(nu, r, sk, lam).unwrap() * scale;
                assert!((s.values.values[i] - g).norm() <= 1e-13 * g.norm().max(1e-300), "{rule:?} {i}");
            }
        }
    }

    #[test]
    fn dirichlet_solution_vanishes_on_boundary() {
        for &(l, lam) in &[(0u32, 30.0), (20, 64.0), (150, 128.0)] {
            let (lam, spec) = setup(lam);
            let s = solve_mode_dirichlet(ModeIndex::new(l), lam, &smooth(&spec), &spec).unwrap();
            assert_eq!(s.eval(1.0).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn product_rule_satisfies_the_ode() {
        for &(l, lam) in &[(3u32, 40.0), (60, 128.0), (180, 128.0)] {
            let (lam, spec) = setup(lam);
            let f = smooth(&spec);
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
                let s = solve_mode(ModeIndex::new(l), lam, bc, &f, &spec, QuadratureRule::Product).unwrap();
                let res = s.pde_residual(7).unwrap();
                assert!(res < 1e-5, "l={l} {bc:?}: {res}");
                // node values integrate the panel interpolant of χ f, pointwise
                // evaluation uses χ itself; the flat cutoff limits agreement
                for i in [0, spec.len() / 2, spec.len() - 1] {
                    let (x, v) = (spec.nodes()[i], s.values.values[i]);
                    let gap = (s.eval(x).unwrap() - v).norm() / s.values.sup_norm();
                    assert!(gap <= 1e-9, "l={l} {bc:?} i={i}: {gap:e}");
                }
            }
        }
    }

    #[test]
    fn neumann_derivative_vanishes() {
        for &(l, lam) in &[(0u32, 20.0), (50, 100.0), (140, 100.0)] {
            let (lam, spec) = setup(lam);
            let s = solve_mode_neumann(ModeIndex::new(l), lam, &smooth(&spec), &spec).unwrap();
            let res = s.neumann_residual().unwrap();
            assert!(res < 1e-8, "l={l}: {res}");
        }
    }

    #[test]
    fn mismatched_inputs_are_refused() {
        let (lam, spec) = setup(64.0);
        let other = Frequency::new(65.0).unwrap();
        let f = smooth(&spec);
        assert!(solve_mode_dirichlet(ModeIndex::new(1), other, &f, &spec).is_err());
        let mut coarse = spec.clone();
        coarse.rule = crate::quadrature::CompositeRule::new(spec.rule.a, spec.rule.b, 1, 16).unwrap();
        let fc = RadialGridFunction::zeros(&coarse);
        assert!(matches!(
            solve_mode_dirichlet(ModeIndex::new(1), lam, &fc, &coarse),
            Err(Error::UnderResolved(_))
        ));
    }

    #[test]
    fn parallel_fan_out_is_ordered_and_deterministic() {
        let (lam, spec) = setup(64.0);
        let modes: Vec<ModeIndex> = (0..24).map(ModeIndex::new).collect();
        let run = || solve_modes(&modes, lam, BoundaryCondition::Dirichlet, &spec, |_| Ok(smooth(&spec)));
        let (x, y) = (run(), run());
        for (i, (a, b)) in x.iter().zip(&y).enumerate() {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(a.mode.l, i as u32);
            assert_eq!(a.values, b.values);
        }
    }
}
