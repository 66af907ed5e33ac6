//! Path selection: exact for half-integer orders, otherwise the ascending
//! series when it is trustworthy, otherwise the asymptotic form with the
//! smallest claimed error.

use super::asymptotic::{debye_hankel, large_argument_hankel, transitional_bessel, uniform_bessel};
use super::halfint::half_integer_jy;
use super::series::j_series_signed;
use super::{EvalPath, EvalResult, Order, SpecialFnConfig};
use crate::error::{domain, Error, Result};

/// The evaluation path [`bessel_jy`] takes for `(nu, z)`.
pub fn select_path(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalPath> {
    check_z(z)?;
    if nu.half_integer_index().is_some() {
        return Ok(EvalPath::Exact);
    }
    Ok(bessel_jy(nu, z, cfg)?.0.regime_used)
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(domain("Bessel functions are evaluated for finite z > 0", z))
    }
}

fn series_jy(nu: f64, z: f64, cfg: &SpecialFnConfig) -> Result<(EvalResult<f64>, EvalResult<f64>)> {
    if nu.fract() == 0.0 {
        return Err(Error::Unsupported(format!("Y series at integer order {nu}")));
    }
    let (jp, ep) = j_series_signed(nu, z, cfg)?;
    let (jm, em) = j_series_signed(-nu, z, cfg)?;
    let (s, c) = (nu * std::f64::consts::PI).sin_cos();
    let y = (jp * c - jm) / s;
    let abs_err_y = (ep * (jp * c).abs() + em * jm.abs()) / s.abs();
    let env = jp.hypot(y);
    let j_est = ep * jp.abs() / super::envelope_j(nu, z, jp, y);
    let y_est = abs_err_y / env;
    if j_est.max(y_est) > cfg.series_max_rel_error {
        return Err(Error::SeriesBudget { nu, z, reason: "cancellation".into() });
    }
    Ok((
        EvalResult { value: jp, est_rel_error: j_est, regime_used: EvalPath::Series },
        EvalResult { value: y, est_rel_error: y_est, regime_used: EvalPath::Series },
    ))
}

fn asymptotic_candidates(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Vec<(EvalResult<f64>, EvalResult<f64>)> {
    let n = nu.value();
    let mut out = Vec::new();
    let from_hankel = |h: EvalResult<num_complex::Complex64>| {
        (
            EvalResult { value: h.value.re, est_rel_error: h.est_rel_error, regime_used: h.regime_used },
            EvalResult { value: h.value.im, est_rel_error: h.est_rel_error, regime_used: h.regime_used },
        )
    };
    if let Ok(h) = large_argument_hankel(nu, z, cfg) {
        out.push(from_hankel(h));
    }
    if let Ok(h) = debye_hankel(nu, z, cfg) {
        out.push(from_hankel(h));
    }
    if n > 0.0 {
        if let Ok(pair) = transitional_bessel(nu, (z - n) / n.cbrt(), cfg) {
            out.push(pair);
        }
        if let Ok(pair) = uniform_bessel(nu, z / n, cfg) {
            out.push(pair);
        }
    }
    out
}

/// `(J_nu(z), Y_nu(z))` through the best available path.
pub fn bessel_jy(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<(EvalResult<f64>, EvalResult<f64>)> {
    check_z(z)?;
    if let Some(m) = nu.half_integer_index() {
        let jy = half_integer_jy(m, z)?;
        let err = 4.0 * f64::EPSILON;
        return Ok((
            EvalResult { value: jy.j_f64()?, est_rel_error: err, regime_used: EvalPath::Exact },
            EvalResult { value: jy.y_f64()?, est_rel_error: err, regime_used: EvalPath::Exact },
        ));
    }
    if z <= cfg.z_max_series {
        if let Ok(pair) = series_jy(nu.value(), z, cfg) {
            return Ok(pair);
        }
    }
    asymptotic_candidates(nu, z, cfg)
        .into_iter()
        .min_by(|a, b| a.0.est_rel_error.max(a.1.est_rel_error).total_cmp(&b.0.est_rel_error.max(b.1.est_rel_error)))
        .ok_or_else(|| Error::Unsupported(format!("no evaluation path for nu={}, z={z}", nu.value())))
}

pub fn bessel_j(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<f64>> {
    Ok(bessel_jy(nu, z, cfg)?.0)
}

pub fn bessel_y(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<f64>> {
    Ok(bessel_jy(nu, z, cfg)?.1)
}

/// `|H_nu(z)|^2 = J_nu(z)^2 + Y_nu(z)^2`.
pub fn hankel_modulus_sq(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<f64>> {
    check_z(z)?;
    if let Some(m) = nu.half_integer_index() {
        let v = half_integer_jy(m, z)?.modulus_sq().to_f64();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("|H_{}({z})|^2", nu.value())));
        }
        return Ok(EvalResult { value: v, est_rel_error: 8.0 * f64::EPSILON, regime_used: EvalPath::Exact });
    }
    let (j, y) = bessel_jy(nu, z, cfg)?;
    Ok(EvalResult {
        value: j.value * j.value + y.value * y.value,
        est_rel_error: 2.0 * j.est_rel_error.max(y.est_rel_error) * (1.0 + j.est_rel_error.max(y.est_rel_error)),
        regime_used: j.regime_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::spherical_hankel_exact;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn half_integer_always_exact() {
        let cfg = SpecialFnConfig::default();
        for m in [0u32, 3, 50, 400] {
            for &z in &[0.01, 1.0, 77.0, 5000.0] {
                assert_eq!(select_path(Order::half_integer(m), z, &cfg).unwrap(), EvalPath::Exact);
            }
        }
    }

    #[test]
    fn y_order_half_vanishes_at_half_pi() {
        let cfg = SpecialFnConfig::default();
        let y = bessel_y(Order::half_integer(0), PI / 2.0, &cfg).unwrap();
        assert!(y.value.abs() < 1e-16);
    }

    #[test]
    fn y_turning_point_band() {
        let cfg = SpecialFnConfig::default();
        let nu = 10.5;
        let y = bessel_y(Order::new(nu).unwrap(), nu, &cfg).unwrap();
        let lead = -0.774_759_002_060_078_8 * f64::powf(nu, -1.0 / 3.0);
        assert!((y.value - lead).abs() / lead.abs() < 1.0 / nu);
    }

    #[test]
    fn modulus_matches_closed_form() {
        let cfg = SpecialFnConfig::default();
        for &z in &[0.7, 12.0, 300.0] {
            let h = spherical_hankel_exact(4, Complex64::new(z, 0.0)).unwrap();
            let m = hankel_modulus_sq(Order::half_integer(4), z, &cfg).unwrap();
            assert!((m.value - h.norm_sqr()).abs() <= 1e-13 * m.value);
        }
    }

    #[test]
    fn non_half_integer_order_uses_series_or_asymptotics() {
        let cfg = SpecialFnConfig::default();
        let (j, _) = bessel_jy(Order::new(1.3).unwrap(), 2.0, &cfg).unwrap();
        assert_eq!(j.regime_used, EvalPath::Series);
        let (j, y) = bessel_jy(Order::new(250.3).unwrap(), 400.0, &cfg).unwrap();
        assert!(matches!(j.regime_used, EvalPath::Asymptotic { .. }));
        // bracket by neighbouring half-integer orders
        let lo = crate::special_fn::half_integer_jy(249, 400.0).unwrap();
        let hi = crate::special_fn::half_integer_jy(250, 400.0).unwrap();
        let env = lo.hankel().to_complex().norm().max(hi.hankel().to_complex().norm());
        assert!(j.value.hypot(y.value) < 1.1 * env);
    }

    #[test]
    fn nonpositive_argument_rejected() {
        let cfg = SpecialFnConfig::default();
        assert!(matches!(bessel_y(Order::half_integer(1), 0.0, &cfg), Err(Error::Domain { .. })));
    }
}
