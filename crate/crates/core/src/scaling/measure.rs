use crate::error::{Error, Result};
use crate::helmholtz::{AnnulusSpec, Frequency};
use crate::special_fn::{half_integer_jy, hankel_modulus_sq, Order, Scaled, SpecialFnConfig};
use serde::Serialize;

fn half_index(nu: Order) -> Result<u32> {
    nu.half_integer_index()
        .ok_or_else(|| Error::Unsupported(format!("annulus norms need a half-integer order, got {}", nu.value())))
}

fn check(lambda: Frequency, spec: &AnnulusSpec) -> Result<()> {
    if spec.lambda != lambda {
        return Err(Error::Invalid(format!(
            "annulus built for lambda={} but measurement asked for {}",
            spec.lambda.value(),
            lambda.value()
        )));
    }
    spec.check_resolution()
}

fn finite(x: Scaled, what: &str) -> Result<f64> {
    let v = x.to_f64();
    if v.is_finite() && (v > 0.0 || x.is_zero()) {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("{what} is outside binary64 range (ln = {:.1})", x.ln_abs())))
    }
}

/// `∫_1^{1+λ^{-α}} |H_ν(λr)|² dr`.
pub fn annulus_l2_sq(nu: Order, lambda: Frequency, spec: &AnnulusSpec) -> Result<f64> {
    let m = half_index(nu)?;
    check(lambda, spec)?;
    let mut acc = Scaled::ZERO;
    for (&r, &w) in spec.nodes().iter().zip(spec.weights()) {
        acc = acc.add(half_integer_jy(m, lambda.value() * r)?.modulus_sq() * w);
    }
    finite(acc, "annulus norm")
}

/// `|H_ν(λ)|²`.
pub fn boundary_modulus_sq(nu: Order, lambda: Frequency) -> Result<f64> {
    Ok(hankel_modulus_sq(nu, lambda.value(), &SpecialFnConfig::default())?.value)
}

/// `(∫ |J_ν(λs) Y_ν(λ) - J_ν(λ) Y_ν(λs)|² ds)^{1/2}` over the collar.
pub fn cross_term_l2(nu: Order, lambda: Frequency, spec: &AnnulusSpec) -> Result<f64> {
    let m = half_index(nu)?;
    check(lambda, spec)?;
    let at1 = half_integer_jy(m, lambda.value())?;
    let mut acc = Scaled::ZERO;
    for (&s, &w) in spec.nodes().iter().zip(spec.weights()) {
        let v = half_integer_jy(m, lambda.value() * s)?;
        let c = (v.j * at1.y).sub(at1.j * v.y);
        acc = acc.add(c * c * w);
    }
    Ok(finite(acc, "cross term")?.sqrt())
}

/// The factors of the analytic bounds for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundChain {
    pub hankel_l2_sq: f64,
    pub boundary_modulus_sq: f64,
    pub cross_term: f64,
    /// `‖H‖²`, the transversal bound
    pub transversal: f64,
    /// `λ^{-α/2} ‖H‖ ‖cross‖ / |H(λ)|`, the glancing bound
    pub glancing: f64,
}

pub fn bound_chain(nu: Order, lambda: Frequency, spec: &AnnulusSpec) -> Result<BoundChain> {
    let hankel_l2_sq = annulus_l2_sq(nu, lambda, spec)?;
    let boundary_modulus_sq = boundary_modulus_sq(nu, lambda)?;
    let cross_term = cross_term_l2(nu, lambda, spec)?;
    let glancing =
        lambda.value().powf(-spec.alpha / 2.0) * hankel_l2_sq.sqrt() * cross_term / boundary_modulus_sq.sqrt();
    Ok(BoundChain { hankel_l2_sq, boundary_modulus_sq, cross_term, transversal: hankel_l2_sq, glancing })
}
