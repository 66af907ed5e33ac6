//! Ascending power series for `J_nu`. Slow, but independent of every other
//! path in this module, so it serves as a cross-check.

use super::{EvalPath, EvalResult, Order, SpecialFnConfig};
use crate::error::{domain, Error, Result};
use statrs::function::gamma::{gamma, ln_gamma};

/// Sum of the series for `J_nu(z)` with a signed, non-integer-or-positive
/// order. Returns `(value, rel_error_estimate)`.
pub(crate) fn j_series_signed(nu: f64, z: f64, cfg: &SpecialFnConfig) -> Result<(f64, f64)> {
    if z > cfg.z_max_series {
        return Err(Error::SeriesBudget {
            nu,
            z,
            reason: format!("argument above budget {}", cfg.z_max_series),
        });
    }
    if z == 0.0 {
        return Ok((if nu == 0.0 { 1.0 } else { 0.0 }, 0.0));
    }
    let half = 0.5 * z;
    // leading term (z/2)^nu / Gamma(nu + 1)
    let t0 = if nu >= 0.0 {
        (nu * half.ln() - ln_gamma(nu + 1.0)).exp()
    } else {
        half.powf(nu) / gamma(nu + 1.0)
    };
    if t0 == 0.0 || !t0.is_finite() {
        return Err(Error::Overflow(format!("series leading term for nu={nu}, z={z}")));
    }
    let q = -half * half;
    let mut term = t0;
    let mut sum = term;
    let mut comp = 0.0;
    let mut abs_sum = term.abs();
    let mut k = 0u32;
    loop {
        k += 1;
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
        if kf > half && term.abs() <= 1e-17 * (sum + comp).abs() {
            break;
        }
        if k > 10_000 {
            return Err(Error::SeriesBudget { nu, z, reason: "no convergence".into() });
        }
    }
    let value = sum + comp;
    // each term carries ~k roundings from the ratio recurrence, plus Gamma
    let eps = f64::EPSILON;
    let est = (abs_sum * eps * (2.0 + k as f64) + 1e-14 * value.abs()) / value.abs();
    Ok((value, est))
}

/// `J_nu(z)` by its ascending series. Refuses arguments above
/// `z_max_series` and sums whose cancellation would exceed
/// `series_max_rel_error`.
pub fn bessel_j_series(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<f64>> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("series needs a finite z >= 0", z));
    }
    let (value, est) = j_series_signed(nu.value(), z, cfg)?;
    if est > cfg.series_max_rel_error {
        return Err(Error::SeriesBudget {
            nu: nu.value(),
            z,
            reason: format!("cancellation, estimated relative error {est:.1e}"),
        });
    }
    Ok(EvalResult { value, est_rel_error: est, regime_used: EvalPath::Series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::half_integer_jy;

    #[test]
    fn j0_at_origin_is_one() {
        let cfg = SpecialFnConfig::default();
        let r = bessel_j_series(Order::new(0.0).unwrap(), 0.0, &cfg).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn order_half_matches_sine_form() {
        let cfg = SpecialFnConfig::default();
        for &z in &[0.1, 1.0, 4.0, 9.0] {
            let r = bessel_j_series(Order::new(0.5).unwrap(), z, &cfg).unwrap();
            let expect = (2.0 / (std::f64::consts::PI * z)).sqrt() * z.sin();
            let exact = half_integer_jy(0, z).unwrap().j.to_f64();
            assert!((expect - exact).abs() <= 1e-15);
            // the series honours its own error claim
            let tol = r.est_rel_error * r.value.abs() + 1e-16;
            assert!((r.value - expect).abs() <= tol, "{z}: {} vs {expect}", r.value);
        }
    }

    #[test]
    fn turning_point_band_at_order_ten_and_a_half() {
        let cfg = SpecialFnConfig::default();
        let nu = 10.5;
        let r = bessel_j_series(Order::new(nu).unwrap(), nu, &cfg).unwrap();
        let lead = 0.447_307_318_396_472_3 * nu.powf(-1.0 / 3.0);
        // leading form carries an O(1/nu) relative remainder
        assert!((r.value - lead).abs() / lead < 1.0 / nu, "{} vs {lead}", r.value);
    }

    #[test]
    fn refuses_above_budget_and_on_cancellation() {
        let cfg = SpecialFnConfig::default();
        assert!(matches!(
            bessel_j_series(Order::new(1.0).unwrap(), 61.0, &cfg),
            Err(Error::SeriesBudget { .. })
        ));
        // J_0(45): terms reach ~1e18 while the sum is O(0.1)
        assert!(matches!(
            bessel_j_series(Order::new(0.0).unwrap(), 45.0, &cfg),
            Err(Error::SeriesBudget { .. })
        ));
    }
}
