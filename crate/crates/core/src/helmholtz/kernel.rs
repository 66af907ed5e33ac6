use super::{BoundaryCondition, Frequency, ModeIndex};
use crate::error::{domain, Error, Result};
use crate::special_fn::{half_integer_jy, Order, Scaled, ScaledComplex};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Factorised outgoing Green kernel of one mode.
///
/// With `u1 = r^{-1/2}(J(λr) - R H(λr))` and `u2 = r^{-1/2} H(λr)` the kernel is
/// `G(r, s) = (π/2i) u1(min) u2(max)`. Writing `u1` over a common denominator,
///
/// ```text
/// J(λr) - R H(λr) = i (J(λr) P - Q Y(λr)) / D
/// ```
///
/// with `(P, Q, D) = (Y(λ), J(λ), H(λ))` for Dirichlet and
/// `(λY'(λ) - Y(λ)/2, λJ'(λ) - J(λ)/2, λH'(λ) - H(λ)/2)` for Neumann, so
/// `G(r, s) = (π/2) a(min) b(max)` with the real factor
/// `a(r) = r^{-1/2}(J(λr)P - QY(λr))` and `b(r) = r^{-1/2} H(λr) / D`.
/// The numerator of `a` is a real cross product that vanishes identically at
/// `r = 1` in the Dirichlet case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBasis {
    pub mode: ModeIndex,
    pub lambda: f64,
    pub bc: BoundaryCondition,
    p: Scaled,
    q: Scaled,
    d: ScaledComplex,
}

impl RadialBasis {
    pub fn new(mode: ModeIndex, lambda: Frequency, bc: BoundaryCondition) -> Result<Self> {
        let lam = lambda.value();
        let at1 = half_integer_jy(mode.l, lam)?;
        let (p, q) = match bc {
            BoundaryCondition::Dirichlet => (at1.y, at1.j),
            BoundaryCondition::Neumann => (
                (at1.dy * lam).sub(at1.y * 0.5),
                (at1.dj * lam).sub(at1.j * 0.5),
            ),
        };
        let d = ScaledComplex::from_parts(q, p);
        if d.is_zero() {
            return Err(Error::Degenerate(format!("vanishing boundary denominator at l={}", mode.l)));
        }
        Ok(RadialBasis { mode, lambda: lam, bc, p, q, d })
    }

    /// `(a(r), b(r))`.
    pub fn factors(&self, r: f64) -> Result<(Scaled, ScaledComplex)> {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(domain("radial kernel needs r >= 1", r));
        }
        let v = half_integer_jy(self.mode.l, self.lambda * r)?;
        let s = r.sqrt().recip();
        let a = if r == 1.0 && self.bc == BoundaryCondition::Dirichlet {
            Scaled::ZERO
        } else {
            ((v.j * self.p).sub(self.q * v.y)) * s
        };
        let b = (v.hankel() / self.d).scale(s);
        Ok((a, b))
    }

    /// `G(r, s)`.
    pub fn kernel(&self, r: f64, s: f64) -> Result<Complex64> {
        let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
        let (a, _) = self.factors(lo)?;
        let (_, b) = self.factors(hi)?;
        Ok(kernel_value(a, b))
    }

    /// `u2(r) = r^{-1/2} H(λr)` in scaled form.
    pub fn outgoing(&self, r: f64) -> Result<ScaledComplex> {
        Ok(self.factors(r)?.1 * self.d)
    }
}

/// `(π/2) a b` as a plain complex number.
pub(crate) fn kernel_value(a: Scaled, b: ScaledComplex) -> Complex64 {
    (a.to_complex() * b).scale(FRAC_PI_2).to_complex()
}

/// Dirichlet outgoing Green kernel `G_ν(r, s, λ)` for half-integer `nu`.
pub fn green_kernel(nu: Order, r: f64, s: f64, lambda: Frequency) -> Result<Complex64> {
    let l = nu
        .half_integer_index()
        .ok_or_else(|| Error::Unsupported(format!("green kernel needs a half-integer order, got {}", nu.value())))?;
    if !(s >= 1.0) {
        return Err(domain("radial kernel needs s >= 1", s));
    }
    RadialBasis::new(ModeIndex::new(l), lambda, BoundaryCondition::Dirichlet)?.kernel(r, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(x: f64) -> Frequency {
        Frequency::new(x).unwrap()
    }

    #[test]
    fn order_half_matches_elementary_form() {
        // J_{1/2}(x) = sqrt(2/πx) sin x,  H_{1/2}(x) = -i sqrt(2/πx) e^{ix}
        let (r, s, l): (f64, f64, f64) = (1.2, 1.1, 50.0);
        let c = |x: f64| (2.0 / (std::f64::consts::PI * x)).sqrt();
        let j = |x: f64| Complex64::new(c(x) * x.sin(), 0.0);
        let h = |x: f64| Complex64::new(0.0, -c(x)) * Complex64::new(0.0, x).exp();
        let u1 = s.powf(-0.5) * (j(l * s) - j(l) / h(l) * h(l * s));
        let u2 = r.powf(-0.5) * h(l * r);
        let expect = Complex64::new(0.0, -FRAC_PI_2) * u1 * u2;
        let g = green_kernel(Order::half_integer(0), r, s, lam(l)).unwrap();
        assert!((g - expect).norm() < 1e-14 * expect.norm(), "{g} vs {expect}");
    }

    #[test]
    fn vanishes_on_the_boundary_and_is_symmetric() {
        for l in [0u32, 3, 40, 400] {
            let nu = Order::half_integer(l);
            for &s in &[1.0, 1.01, 1.3] {
                assert_eq!(green_kernel(nu, 1.0, s, lam(200.0)).unwrap(), Complex64::new(0.0, 0.0));
            }
            for &(r, s) in &[(1.001, 1.02), (1.2, 1.05), (1.1, 1.1)] {
                let a = green_kernel(nu, r, s, lam(200.0)).unwrap();
                let b = green_kernel(nu, s, r, lam(200.0)).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn non_half_integer_order_is_unsupported() {
        let nu = Order::new(2.3).unwrap();
        assert!(matches!(green_kernel(nu, 1.1, 1.2, lam(10.0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn wronskian_fixes_the_normalisation() {
        // r^2 (u1 u2' - u1' u2) = 2i/π, by central differences
        let basis = RadialBasis::new(ModeIndex::new(5), lam(30.0), BoundaryCondition::Neumann).unwrap();
        let u1 = |r: f64| {
            let (a, _) = basis.factors(r).unwrap();
            Complex64::new(0.0, 1.0) * (a.to_complex() / basis.d).to_complex()
        };
        let u2 = |r: f64| basis.outgoing(r).unwrap().to_complex();
        let (r, h) = (1.3, 1e-5);
        let d1 = (u1(r + h) - u1(r - h)) / (2.0 * h);
        let d2 = (u2(r + h) - u2(r - h)) / (2.0 * h);
        let w = r * r * (u1(r) * d2 - d1 * u2(r));
        let expect = Complex64::new(0.0, 2.0 / std::f64::consts::PI);
        assert!((w - expect).norm() < 1e-8, "{w}");
    }
}
