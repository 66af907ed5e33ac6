use super::{Frequency, ModeIndex};
use crate::error::{domain, Error, Result};
use crate::quadrature::{gauss_legendre, legendre};
use crate::special_fn::half_integer_jy;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Legendre coefficients of axisymmetric boundary data
/// `f(θ) = Σ_{l ≤ L} c_l P_l(cos θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub legendre_coeffs: Vec<Complex64>,
}

impl BoundaryData {
    pub fn new(legendre_coeffs: Vec<Complex64>) -> Result<Self> {
        if legendre_coeffs.is_empty() {
            return Err(Error::Invalid("boundary data needs at least c_0".into()));
        }
        Ok(BoundaryData { legendre_coeffs })
    }

    pub fn l_max(&self) -> usize {
        self.legendre_coeffs.len() - 1
    }

    /// `max_{l >= k} |c_l|` for every `k`, the recorded decay profile.
    pub fn tail_profile(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.legendre_coeffs.len()];
        let mut m: f64 = 0.0;
        for (l, c) in self.legendre_coeffs.iter().enumerate().rev() {
            m = m.max(c.norm());
            out[l] = m;
        }
        out
    }

    /// `Σ_l c_l P_l(cos θ)`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let x = theta.cos();
        self.legendre_coeffs.iter().enumerate().map(|(l, c)| c * legendre(l, x)).sum()
    }
}

/// Polar angles `θ_i = arccos x_i` of the `n`-point Gauss–Legendre nodes,
/// in the order `expand_boundary` expects its samples.
pub fn boundary_angles(n: usize) -> Vec<f64> {
    gauss_legendre(n).0.iter().map(|x| x.acos()).collect()
}

/// `c_l = (2l+1)/2 ∫ f P_l d(cos θ)` from samples at [`boundary_angles`].
pub fn expand_boundary(samples: &[Complex64], l_max: usize) -> Result<BoundaryData> {
    let n = samples.len();
    if n < l_max + 1 {
        return Err(Error::UnderResolved(format!("{n} boundary samples cannot resolve degree {l_max}")));
    }
    let (x, w) = gauss_legendre(n);
    let coeffs = (0..=l_max)
        .map(|l| {
            let s: Complex64 = samples.iter().zip(&x).zip(&w).map(|((f, &xi), &wi)| f * (wi * legendre(l, xi))).sum();
            s * ((2 * l + 1) as f64 / 2.0)
        })
        .collect();
    BoundaryData::new(coeffs)
}

/// `coeff · r^{-1/2} H_ν(λr) / H_ν(λ)`.
pub fn homogeneous_mode(mode: ModeIndex, lambda: Frequency, boundary_coeff: Complex64, r: f64) -> Result<Complex64> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(domain("homogeneous mode is defined for r >= 1", r));
    }
    let lam = lambda.value();
    let h1 = half_integer_jy(mode.l, lam)?.hankel();
    assert!(!h1.is_zero(), "H_nu(lambda) vanished for real lambda");
    let hr = half_integer_jy(mode.l, lam * r)?.hankel();
    Ok((hr / h1).to_complex() * boundary_coeff / r.sqrt())
}

/// Smallest `L` with `|c_l| < 1e-10` for every `l > L`, capped at `4λ`.
///
/// `|r^{-1/2} H_ν(λr) / H_ν(λ)| <= 1` on `r >= 1` (`x|H_ν(x)|²` is
/// nonincreasing for `ν >= 1/2`), so the coefficient itself bounds each
/// discarded term.
pub fn truncation_degree(boundary: &BoundaryData, lambda: Frequency) -> usize {
    let cap = (4.0 * lambda.value()).floor() as usize;
    let tail = boundary.tail_profile();
    let natural = (0..tail.len()).find(|&l| tail.get(l + 1).copied().unwrap_or(0.0) < 1e-10).unwrap_or(boundary.l_max());
    natural.min(cap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Synthesis {
    pub value: Complex64,
    pub l_trunc: usize,
    /// `Σ_{l > L} |c_l|`, a bound on the discarded part
    pub tail_bound: f64,
}

/// `Σ_{l ≤ L} c_l w̃_l(r) P_l(cos θ)` with `L` from [`truncation_degree`].
pub fn synthesize(boundary: &BoundaryData, lambda: Frequency, r: f64, theta: f64) -> Result<Synthesis> {
    let l_trunc = truncation_degree(boundary, lambda);
    let x = theta.cos();
    let mut value = Complex64::new(0.0, 0.0);
    for (l, &c) in boundary.legendre_coeffs.iter().enumerate().take(l_trunc + 1) {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        value += homogeneous_mode(ModeIndex::new(l as u32), lambda, c, r)? * legendre(l, x);
    }
    let tail_bound = boundary.legendre_coeffs.iter().skip(l_trunc + 1).map(|c| c.norm()).sum();
    Ok(Synthesis { value, l_trunc, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn expansion_of_simple_data() {
        let th = boundary_angles(12);
        let one: Vec<Complex64> = th.iter().map(|_| c(1.0)).collect();
        let b = expand_boundary(&one, 8).unwrap();
        assert!((b.legendre_coeffs[0] - c(1.0)).norm() < 1e-15);
        assert!(b.legendre_coeffs[1..].iter().all(|v| v.norm() < 1e-14));

        let cos: Vec<Complex64> = th.iter().map(|t| c(t.cos())).collect();
        let b = expand_boundary(&cos, 8).unwrap();
        for (l, v) in b.legendre_coeffs.iter().enumerate() {
            let expect = if l == 1 { 1.0 } else { 0.0 };
            assert!((v - c(expect)).norm() < 1e-14, "l={l}");
        }

        let p35: Vec<Complex64> = th.iter().map(|t| c(legendre(3, t.cos()) + legendre(5, t.cos()))).collect();
        let b = expand_boundary(&p35, 11).unwrap();
        let nonzero: Vec<usize> = (0..=11).filter(|&l| b.legendre_coeffs[l].norm() > 1e-13).collect();
        assert_eq!(nonzero, vec![3, 5]);
    }

    #[test]
    fn undersampling_refused() {
        let s = vec![c(1.0); 4];
        assert!(matches!(expand_boundary(&s, 4), Err(Error::UnderResolved(_))));
    }

    #[test]
    fn order_zero_mode_is_elementary() {
        let lam = Frequency::new(37.0).unwrap();
        let a = Complex64::new(0.3, -1.1);
        for &r in &[1.0, 1.37, 4.0, 55.5] {
            let w = homogeneous_mode(ModeIndex::new(0), lam, a, r).unwrap();
            let expect = a * Complex64::new(0.0, 37.0 * (r - 1.0)).exp() / r;
            assert!((w - expect).norm() < 1e-13, "r={r}");
        }
        assert_eq!(homogeneous_mode(ModeIndex::new(9), lam, a, 1.0).unwrap(), a);
    }

    #[test]
    fn radiation_condition() {
        let lam = Frequency::new(5.0).unwrap();
        for l in [0u32, 2, 7] {
            let mut prev = f64::INFINITY;
            for &r in &[10.0, 100.0, 1000.0] {
                let h = 2e-4;
                let w = |x: f64| homogeneous_mode(ModeIndex::new(l), lam, c(1.0), x).unwrap();
                let d = (w(r - 2.0 * h) - w(r - h) * 8.0 + w(r + h) * 8.0 - w(r + 2.0 * h)) / (12.0 * h);
                let q = (r * (d - Complex64::new(0.0, 5.0) * w(r))).norm();
                assert!(q * r <= 1.1 * prev, "l={l} r={r}: {q}");
                prev = q * r;
            }
        }
    }

    #[test]
    fn synthesis_reproduces_boundary_and_spherical_wave() {
        let lam = Frequency::new(12.0).unwrap();
        let b = BoundaryData::new(vec![c(1.0)]).unwrap();
        for &r in &[1.0, 2.0, 7.5] {
            let s = synthesize(&b, lam, r, 0.4).unwrap();
            let expect = Complex64::new(0.0, 12.0 * (r - 1.0)).exp() / r;
            assert!((s.value - expect).norm() < 1e-13);
        }
        let coeffs: Vec<Complex64> = (0..30).map(|l| c(0.5f64.powi(l))).collect();
        let b = BoundaryData::new(coeffs).unwrap();
        let s = synthesize(&b, lam, 1.0, 1.1).unwrap();
        assert!((s.value - b.eval(1.1)).norm() <= s.tail_bound + 1e-13);
        assert!(s.tail_bound < 1e-8);
    }

    #[test]
    fn truncation_respects_cap() {
        let b = BoundaryData::new(vec![c(1.0); 50]).unwrap();
        assert_eq!(truncation_degree(&b, Frequency::new(3.0).unwrap()), 12);
        assert_eq!(truncation_degree(&b, Frequency::new(30.0).unwrap()), 49);
    }
}
