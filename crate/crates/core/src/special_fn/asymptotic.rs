//! Leading-order asymptotic forms of `J_nu`, `Y_nu` and `H_nu` for large
//! order or large argument.
//!
//! Each evaluator refuses inputs outside its window and attaches an error
//! estimate built from the size of the first neglected term.

use super::airy::airy_scaled;
use super::zeta::{olver_zeta, zeta_over_one_minus_z_sq};
use super::{AsymptoticRegime, EvalPath, EvalResult, Order, SpecialFnConfig};
use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn refuse(path: &'static str, reason: String) -> Error {
    Error::OutOfWindow { path, reason }
}

fn representable(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow(format!("{what} exceeds binary64 range")))
    }
}

/// Uniform Airy-type approximation at argument `nu * z_scaled`:
///
/// ```text
/// J_nu(nu z) ~  (4 zeta / (1 - z^2))^{1/4} Ai(nu^{2/3} zeta) / nu^{1/3}
/// Y_nu(nu z) ~ -(4 zeta / (1 - z^2))^{1/4} Bi(nu^{2/3} zeta) / nu^{1/3}
/// ```
///
/// The neglected term is `B_0(zeta) Ai'(x) / nu^{5/3}`, i.e. relative size
/// `nu^{-4/3} |Ai'/Ai|` times a bounded function of `zeta` that decays like
/// `|zeta|^{-3/2}`.
pub fn uniform_bessel(
    nu: Order,
    z_scaled: f64,
    cfg: &SpecialFnConfig,
) -> Result<(EvalResult<f64>, EvalResult<f64>)> {
    let n = nu.value();
    if n < cfg.nu_min_uniform {
        return Err(refuse("uniform", format!("order {n} below {}", cfg.nu_min_uniform)));
    }
    if !(z_scaled > 0.0) || !z_scaled.is_finite() {
        return Err(domain("uniform path needs z_scaled > 0", z_scaled));
    }
    let zeta = olver_zeta(z_scaled)?;
    let prefactor = (4.0 * zeta_over_one_minus_z_sq(z_scaled)?).powf(0.25);
    let n13 = n.cbrt();
    let x = n13 * n13 * zeta;
    let a = airy_scaled(x, cfg)?;
    let scale = prefactor / n13;
    // a.xi = (2/3) nu zeta^{3/2} on the decaying side, 0 otherwise
    let j = representable(scale * a.ai * (-a.xi).exp(), "uniform J")?;
    let y = representable(-scale * a.bi * a.xi.exp(), "uniform Y")?;
    let est = cfg.uniform_error_const * n.powf(-4.0 / 3.0) * (1.0 + x.abs()).sqrt()
        / (1.0 + zeta.abs()).powf(1.5)
        + a.est_rel_error
        + 4.0 * f64::EPSILON;
    let path = EvalPath::Asymptotic { regime: AsymptoticRegime::UniformAiry { zeta } };
    Ok((
        EvalResult { value: j, est_rel_error: est, regime_used: path },
        EvalResult { value: y, est_rel_error: est, regime_used: path },
    ))
}

/// Transitional Airy form at `z = nu + tau nu^{1/3}`:
///
/// ```text
/// J_nu(z) ~  2^{1/3} nu^{-1/3} Ai(-2^{1/3} tau)
/// Y_nu(z) ~ -2^{1/3} nu^{-1/3} Bi(-2^{1/3} tau)
/// ```
///
/// The first correction carries `nu^{-2/3}` with polynomial growth in `tau`.
/// Below the turning point it sits in the exponent of the recessive `J`, so
/// the estimate is exponentiated there.
pub fn transitional_bessel(
    nu: Order,
    tau: f64,
    cfg: &SpecialFnConfig,
) -> Result<(EvalResult<f64>, EvalResult<f64>)> {
    let n = nu.value();
    if n < cfg.nu_min_uniform {
        return Err(refuse("transitional", format!("order {n} below {}", cfg.nu_min_uniform)));
    }
    if !tau.is_finite() || tau.abs() > cfg.tau_max {
        return Err(refuse("transitional", format!("|tau| = {} above {}", tau.abs(), cfg.tau_max)));
    }
    let c = 2f64.cbrt();
    let a = airy_scaled(-c * tau, cfg)?;
    let (ai, bi) = (a.ai * (-a.xi).exp(), a.bi * a.xi.exp());
    let scale = c / n.cbrt();
    let growth = 1.0 + tau * tau + (-tau).max(0.0).powf(2.5);
    let est = (cfg.transitional_error_const * n.powf(-2.0 / 3.0) * growth).exp_m1() + a.est_rel_error;
    let path = EvalPath::Asymptotic { regime: AsymptoticRegime::Transitional { tau } };
    Ok((
        EvalResult { value: scale * ai, est_rel_error: est, regime_used: path },
        EvalResult { value: -scale * bi, est_rel_error: est, regime_used: path },
    ))
}

/// Debye oscillatory form for `z = nu / cos(beta)`:
///
/// ```text
/// H_nu(z) ~ sqrt(2 / (pi nu tan beta)) exp(i (nu (tan beta - beta) - pi/4))
/// ```
///
/// The error estimate sums the magnitudes of the first two Debye correction
/// polynomials `u_1`, `u_2` at `i cot(beta)`.
pub fn debye_hankel(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<Complex64>> {
    let n = nu.value();
    if n < cfg.nu_min_uniform {
        return Err(refuse("debye", format!("order {n} below {}", cfg.nu_min_uniform)));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("Debye path needs z > 0", z));
    }
    let ratio = n / z;
    if ratio < cfg.debye_ratio_min || ratio > cfg.debye_ratio_max {
        return Err(refuse(
            "debye",
            format!("nu/z = {ratio} outside [{}, {}]", cfg.debye_ratio_min, cfg.debye_ratio_max),
        ));
    }
    // nu tan(beta) = sqrt(z^2 - nu^2)
    let root = ((z - n) * (z + n)).sqrt();
    let beta = root.atan2(n);
    let phase = root - n * beta - FRAC_PI_4;
    let modulus = (2.0 / (PI * root)).sqrt();
    let cot = n / root;
    let c2 = cot * cot;
    let u1 = cot * (3.0 + 5.0 * c2) / 24.0;
    let u2 = c2 * (81.0 + 462.0 * c2 + 385.0 * c2 * c2) / 1152.0;
    let est = cfg.debye_error_const * (u1 / n + u2 / (n * n)) + 8.0 * f64::EPSILON * (1.0 + root);
    Ok(EvalResult {
        value: Complex64::from_polar(modulus, phase),
        est_rel_error: est,
        regime_used: EvalPath::Asymptotic { regime: AsymptoticRegime::Debye { beta } },
    })
}

/// Large-argument form `H_nu(z) ~ sqrt(2/(pi z)) exp(i (z - nu pi/2 - pi/4))`.
pub fn large_argument_hankel(nu: Order, z: f64, cfg: &SpecialFnConfig) -> Result<EvalResult<Complex64>> {
    let n = nu.value();
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("large-argument path needs z > 0", z));
    }
    let threshold = cfg.large_arg_slope * n + cfg.large_arg_offset;
    if z < threshold {
        return Err(refuse("large_argument", format!("z = {z} below {threshold}")));
    }
    let mu = 4.0 * n * n;
    let a1 = (mu - 1.0) / 8.0;
    let a2 = (mu - 1.0) * (mu - 9.0) / 128.0;
    // phase reduced before adding z to keep the large argument exact
    let shift = -(n * FRAC_PI_2).rem_euclid(2.0 * PI) - FRAC_PI_4;
    let est = cfg.large_arg_error_const * (a1.abs() / z + a2.abs() / (z * z)) + 8.0 * f64::EPSILON;
    Ok(EvalResult {
        value: Complex64::from_polar((2.0 / (PI * z)).sqrt(), z + shift),
        est_rel_error: est,
        regime_used: EvalPath::Asymptotic { regime: AsymptoticRegime::LargeArgument },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{half_integer_jy, spherical_hankel_exact};

    fn cfg() -> SpecialFnConfig {
        SpecialFnConfig::default()
    }

    #[test]
    fn uniform_reduces_to_turning_point_constants() {
        let nu = Order::new(150.0).unwrap();
        let (j, y) = uniform_bessel(nu, 1.0, &cfg()).unwrap();
        let n13 = 150f64.cbrt();
        assert!((j.value * n13 - 0.447_307_318_396_472_3).abs() < 1e-13);
        assert!((y.value * n13 + 0.774_759_002_060_078_8).abs() < 1e-13);
    }

    #[test]
    fn transitional_reduces_to_turning_point_constants() {
        let nu = Order::new(80.0).unwrap();
        let (j, y) = transitional_bessel(nu, 0.0, &cfg()).unwrap();
        let n13 = 80f64.cbrt();
        assert!((j.value * n13 - 0.447_307_318_396_472_3).abs() < 1e-13);
        assert!((y.value * n13 + 0.774_759_002_060_078_8).abs() < 1e-13);
    }

    #[test]
    fn uniform_matches_exact_above_turning_point() {
        let nu = Order::half_integer(100);
        let (j, y) = uniform_bessel(nu, 1.5, &cfg()).unwrap();
        let exact = half_integer_jy(100, 100.5 * 1.5).unwrap();
        let h = exact.hankel().to_complex();
        assert!((j.value - exact.j.to_f64()).abs() <= 1e-2 * h.norm());
        assert!((y.value - exact.y.to_f64()).abs() <= 1e-2 * h.norm());
    }

    #[test]
    fn uniform_below_turning_point_is_exponentially_small() {
        let nu = Order::half_integer(100);
        let (j, _) = uniform_bessel(nu, 0.6, &cfg()).unwrap();
        let exact = half_integer_jy(100, 100.5 * 0.6).unwrap().j.to_f64();
        assert!(exact > 0.0 && exact < 1e-10);
        assert!(j.value > 0.0);
        assert!((j.value - exact).abs() <= 1e-2 * exact);
        // the Ai factor alone sets the scale
        let zeta = olver_zeta(0.6).unwrap();
        let ai = crate::special_fn::airy(100.5f64.powf(2.0 / 3.0) * zeta).unwrap().ai;
        let ratio = j.value / (ai / 100.5f64.cbrt());
        assert!(ratio > 1.0 && ratio < 2.0, "{ratio}");
    }

    #[test]
    fn transitional_matches_exact_and_sign_structure() {
        let nu = Order::half_integer(200);
        let n = 200.5f64;
        let (j, y) = transitional_bessel(nu, 1.0, &cfg()).unwrap();
        let exact = half_integer_jy(200, n + n.cbrt()).unwrap();
        // Y sits near a zero at tau = 1, so errors are measured against |H|
        let env = exact.hankel().to_complex().norm();
        assert!((j.value - exact.j.to_f64()).abs() <= 2e-2 * env);
        assert!((y.value - exact.y.to_f64()).abs() <= 2e-2 * env);

        // recessive below the turning point, oscillating above
        let (below, _) = transitional_bessel(nu, -3.0, &cfg()).unwrap();
        let (above, _) = transitional_bessel(nu, 3.0, &cfg()).unwrap();
        assert!(below.value > 0.0 && above.value < 0.0);
        assert!(below.value.abs() < 0.01 * above.value.abs());
    }

    #[test]
    fn transitional_refuses_outside_budget() {
        assert!(matches!(
            transitional_bessel(Order::new(50.0).unwrap(), 4.5, &cfg()),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn uniform_refuses_small_orders() {
        assert!(uniform_bessel(Order::new(5.5).unwrap(), 1.0, &cfg()).is_err());
    }

    #[test]
    fn debye_modulus_at_twice_the_order() {
        let nu = Order::half_integer(100);
        let z = 2.0 * 100.5;
        let h = debye_hankel(nu, z, &cfg()).unwrap();
        let exact = spherical_hankel_exact(100, Complex64::new(z, 0.0)).unwrap();
        let tan_beta = 3f64.sqrt();
        let modulus = (2.0 / (PI * 100.5 * tan_beta)).sqrt();
        assert!((h.value.norm() - modulus).abs() < 1e-15);
        assert!((exact.norm() - modulus).abs() <= 1e-2 * modulus);
        assert!((h.value - exact).norm() <= h.est_rel_error * exact.norm());
    }

    #[test]
    fn debye_phase_advances_by_nu_tan_minus_beta() {
        let nu = Order::half_integer(300);
        let n = 300.5;
        let phase = |z: f64| {
            let b = (n / z).acos();
            n * (b.tan() - b)
        };
        let (z1, z2) = (400.0, 400.05);
        let h1 = debye_hankel(nu, z1, &cfg()).unwrap().value;
        let h2 = debye_hankel(nu, z2, &cfg()).unwrap().value;
        let d_arg = (h2 / h1).arg();
        assert!((d_arg - (phase(z2) - phase(z1))).abs() < 1e-9);
    }

    #[test]
    fn debye_refuses_near_turning_point() {
        assert!(debye_hankel(Order::new(100.0).unwrap(), 101.0, &cfg()).is_err());
    }

    #[test]
    fn large_argument_limit() {
        let nu = Order::new(2.5).unwrap();
        for &z in &[1e3, 1e5, 1e7] {
            let exact = spherical_hankel_exact(2, Complex64::new(z, 0.0)).unwrap();
            assert!((exact.norm() * (PI * z / 2.0).sqrt() - 1.0).abs() < 10.0 / z);
            let h = large_argument_hankel(nu, z, &cfg()).unwrap();
            assert!((h.value - exact).norm() <= h.est_rel_error * exact.norm());
        }
    }

    #[test]
    fn large_argument_is_exact_for_order_half() {
        let h = large_argument_hankel(Order::half_integer(0), 123.0, &cfg()).unwrap();
        let exact = spherical_hankel_exact(0, Complex64::new(123.0, 0.0)).unwrap();
        assert!((h.value - exact).norm() < 1e-14 * exact.norm());
    }
}
