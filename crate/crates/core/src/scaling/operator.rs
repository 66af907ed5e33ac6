use crate::error::{Error, Result};
use crate::helmholtz::{AnnulusSpec, BoundaryCondition, Frequency, ModeIndex, RadialBasis};
use crate::special_fn::{Scaled, ScaledComplex};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Measure on the collar for the operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// `L²(dr)`: `M_ik = √w_i G(r_i, s_k) χ_k s_k² √w_k`
    #[default]
    Plain,
    /// `L²(r² dr)`: `M_ik = r_i √w_i G(r_i, s_k) χ_k s_k √w_k`
    Radial,
}

/// `M = diag(p) G diag(q)` for the semi-separable kernel
/// `G(r, s) = (π/2) a(min) b(max)`, applied in `O(n)`.
#[derive(Debug, Clone)]
pub struct KernelOperator {
    a: Vec<Scaled>,
    b: Vec<ScaledComplex>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl KernelOperator {
    pub fn new(mode: ModeIndex, lambda: Frequency, spec: &AnnulusSpec, weighting: Weighting) -> Result<Self> {
        if spec.lambda != lambda {
            return Err(Error::Invalid("annulus and operator frequencies differ".into()));
        }
        spec.check_resolution()?;
        let basis = RadialBasis::new(mode, lambda, BoundaryCondition::Dirichlet)?;
        let n = spec.len();
        let (mut a, mut b, mut p, mut q) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (&r, &w) in spec.nodes().iter().zip(spec.weights()) {
            let (ar, br) = basis.factors(r)?;
            a.push(ar);
            b.push(br);
            let sw = w.sqrt();
            let chi = spec.chi(r);
            match weighting {
                Weighting::Plain => {
                    p.push(sw);
                    q.push(chi * r * r * sw);
                }
                Weighting::Radial => {
                    p.push(r * sw);
                    q.push(chi * r * sw);
                }
            }
        }
        Ok(KernelOperator { a, b, p, q })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `M x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.sweep(x, &self.q, &self.p, false)
    }

    /// `M^H x`.
    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.sweep(x, &self.p, &self.q, true)
    }

    fn sweep(&self, x: &[Complex64], pre: &[f64], post: &[f64], conj: bool) -> Vec<Complex64> {
        let n = self.len();
        let b = |i: usize| if conj { self.b[i].conj() } else { self.b[i] };
        let g: Vec<Complex64> = x.iter().zip(pre).map(|(v, s)| v * s).collect();
        let mut lower = vec![ScaledComplex::ZERO; n];
        let mut acc = ScaledComplex::ZERO;
        for i in 0..n {
            acc = acc.add(self.a[i].to_complex() * g[i]);
            lower[i] = b(i) * acc;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = ScaledComplex::ZERO;
        for i in (0..n).rev() {
            let v = lower[i].add(self.a[i].to_complex() * acc);
            out[i] = v.scale(FRAC_PI_2 * post[i]).to_complex();
            acc = acc.add(b(i) * g[i]);
        }
        out
    }

    /// Dense matrix, for small problems and cross-checks.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, k| {
            let (lo, hi) = if i >= k { (k, i) } else { (i, k) };
            let g = (self.a[lo].to_complex() * self.b[hi]).scale(FRAC_PI_2).to_complex();
            g * (self.p[i] * self.q[k])
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// relative change over the last iteration
    pub last_change: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalise(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for u in basis {
            let c: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= c * ui;
            }
        }
    }
}

fn top_singular_value(alphas: &[f64], betas: &[f64]) -> Result<f64> {
    let k = alphas.len();
    let mut bd = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        bd[(i, i)] = alphas[i];
        if i + 1 < k {
            bd[(i, i + 1)] = betas[i];
        }
    }
    let sv = bd.singular_values();
    sv.iter().copied().fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x)))).ok_or_else(|| {
        Error::Degenerate("empty bidiagonal".into())
    })
}

/// Largest singular value by Golub–Kahan–Lanczos bidiagonalisation with full
/// reorthogonalisation.
pub fn largest_singular_value(op: &KernelOperator, tol: f64, max_iter: usize) -> Result<NormEstimate> {
    let n = op.len();
    if n == 0 {
        return Err(Error::Degenerate("empty operator".into()));
    }
    let max_iter = max_iter.min(n);
    // deterministic, generic start vector
    let mut v: Vec<Complex64> =
        (0..n).map(|i| Complex64::new(1.0 + 0.5 * ((i as f64) * 0.754_877_666).sin(), 0.3 * (i as f64 * 0.569_840_29).cos())).collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut vs: Vec<Vec<Complex64>> = vec![v.clone()];
    let mut us: Vec<Vec<Complex64>> = Vec::new();
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut prev = 0.0;
    let mut stable = 0;
    for it in 0..max_iter {
        let mut u = op.apply(&v);
        orthogonalise(&mut u, &us);
        let alpha = norm(&u);
        if !alpha.is_finite() {
            return Err(Error::Degenerate("non-finite Lanczos coefficient".into()));
        }
        alphas.push(alpha);
        if alpha == 0.0 {
            break;
        }
        u.iter_mut().for_each(|x| *x /= alpha);
        us.push(u.clone());

        let est = top_singular_value(&alphas, &betas)?;
        let change = if est > 0.0 { (est - prev).abs() / est } else { 0.0 };
        prev = est;
        stable = if change < tol { stable + 1 } else { 0 };
        if stable >= 3 || it + 1 == max_iter {
            return Ok(NormEstimate { value: est, iterations: it + 1, last_change: change });
        }

        let mut w = op.apply_adjoint(&u);
        orthogonalise(&mut w, &vs);
        let beta = norm(&w);
        if beta <= 1e-14 * est {
            return Ok(NormEstimate { value: est, iterations: it + 1, last_change: change });
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        vs.push(w.clone());
        v = w;
    }
    let est = top_singular_value(&alphas, &betas)?;
    Ok(NormEstimate { value: est, iterations: alphas.len(), last_change: 0.0 })
}

/// `L²(collar) → L²(collar)` norm of `f ↦ w` for one Dirichlet mode.
pub fn mode_operator_norm(
    mode: ModeIndex,
    lambda: Frequency,
    spec: &AnnulusSpec,
    weighting: Weighting,
) -> Result<NormEstimate> {
    let op = KernelOperator::new(mode, lambda, spec, weighting)?;
    let est = largest_singular_value(&op, 1e-12, 300)?;
    if !(est.value > 0.0) {
        return Err(Error::Degenerate(format!("operator norm {} for l={}", est.value, mode.l)));
    }
    Ok(est)
}

/// Dense matrix of the discretised operator.
pub fn mode_operator_matrix(
    mode: ModeIndex,
    lambda: Frequency,
    spec: &AnnulusSpec,
    weighting: Weighting,
) -> Result<DMatrix<Complex64>> {
    Ok(KernelOperator::new(mode, lambda, spec, weighting)?.to_dense())
}
