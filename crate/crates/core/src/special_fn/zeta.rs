//! Olver's variable `zeta(z)` of the uniform Airy expansions.
//!
//! ```text
//! (2/3) zeta^{3/2}    = ln((1 + sqrt(1 - z^2)) / z) - sqrt(1 - z^2),  0 < z <= 1
//! (2/3) (-zeta)^{3/2} = sqrt(z^2 - 1) - arccos(1 / z),                z >= 1
//! ```
//!
//! Both closed forms cancel catastrophically near `z = 1`; there `zeta` is
//! taken from its Taylor series in `w = 1 - z`.

use crate::error::{domain, Result};

/// `zeta = 2^{1/3} w sum_k ZETA_SERIES[k] w^k`, `w = 1 - z`.
const ZETA_SERIES: [f64; 18] = [
    1.0,
    3.0 / 10.0,
    32.0 / 175.0,
    1037.0 / 7875.0,
    103_727.0 / 1_010_625.0,
    0.083_878_638_187_209_615_781,
    0.070_774_259_649_144_002_885,
    0.061_115_058_767_065_489_755,
    0.053_710_156_376_986_476_222,
    0.047_859_685_444_150_986_805,
    0.043_125_314_546_582_832_239,
    0.039_218_637_585_552_108_987,
    0.035_942_245_341_677_550_339,
    0.033_156_552_405_590_551_548,
    0.030_760_133_288_870_080_520,
    0.028_677_558_817_834_084_829,
    0.026_851_597_139_977_742_796,
    0.025_238_057_317_473_768_649,
];

const SERIES_RADIUS: f64 = 0.1;

fn series_factor(w: f64) -> f64 {
    ZETA_SERIES.iter().rev().fold(0.0, |acc, &c| acc * w + c)
}

pub fn olver_zeta(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("zeta(z) needs a finite z > 0", z));
    }
    let w = 1.0 - z;
    if w.abs() <= SERIES_RADIUS {
        return Ok(2f64.cbrt() * w * series_factor(w));
    }
    if z < 1.0 {
        let s = ((1.0 - z) * (1.0 + z)).sqrt();
        let f = ((1.0 + s) / z).ln() - s;
        Ok((1.5 * f).powf(2.0 / 3.0))
    } else {
        let s = ((z - 1.0) * (z + 1.0)).sqrt();
        let f = s - (1.0 / z).acos();
        Ok(-(1.5 * f).powf(2.0 / 3.0))
    }
}

/// `zeta / (1 - z^2)`, finite and positive across `z = 1` (limit `2^{-2/3}`).
pub fn zeta_over_one_minus_z_sq(z: f64) -> Result<f64> {
    let w = 1.0 - z;
    if w.abs() <= SERIES_RADIUS {
        // 1 - z^2 = w (2 - w)
        return Ok(2f64.cbrt() * series_factor(w) / (2.0 - w));
    }
    Ok(olver_zeta(z)? / ((1.0 - z) * (1.0 + z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_turning_point() {
        assert_eq!(olver_zeta(1.0).unwrap(), 0.0);
    }

    #[test]
    fn ratio_limit_at_turning_point() {
        let limit = 2f64.powf(-2.0 / 3.0);
        assert!((zeta_over_one_minus_z_sq(1.0).unwrap() - limit).abs() < 1e-15);
        // zeta / (1 - z^2) = 2^{-2/3} (1 + 0.8 w + O(w^2)); 30-digit references
        for &(z, expect) in &[(1.0 - 1e-4, 0.630_010_925_461_469_0), (1.0 + 1e-4, 0.629_910_131_776_944_3)] {
            let r = zeta_over_one_minus_z_sq(z).unwrap();
            assert!((r - expect).abs() < 1e-14, "{z}: {r}");
            let w = 1.0 - z;
            assert!((r - limit * (1.0 + 0.8 * w)).abs() < 1e-7 * limit);
        }
    }

    fn max_fit_residual(degree: usize) -> f64 {
        let xs: Vec<f64> = (0..21).map(|i| 0.9 + 0.01 * i as f64).collect();
        let a = nalgebra::DMatrix::from_fn(xs.len(), degree + 1, |i, j| (xs[i] - 1.0).powi(j as i32));
        let b = nalgebra::DVector::from_iterator(xs.len(), xs.iter().map(|&x| olver_zeta(x).unwrap()));
        let coef = a.clone().svd(true, true).solve(&b, 1e-14).unwrap();
        (a * coef - b).amax()
    }

    #[test]
    fn smooth_across_turning_point() {
        // exact zeta gives a degree-4 residual of 9.996e-8 on this grid; the
        // implementation must not add roughness of its own
        assert!((max_fit_residual(4) - 9.996_057_115_380_097e-8).abs() < 1e-12);
        assert!(max_fit_residual(6) < 1e-8);
    }

    #[test]
    fn monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..400 {
            let z = 0.01 * i as f64;
            let v = olver_zeta(z).unwrap();
            assert!(v < prev, "{z}");
            prev = v;
        }
    }

    #[test]
    fn closed_forms_meet_series_at_radius() {
        for &z in &[1.0 - SERIES_RADIUS, 1.0 + SERIES_RADIUS] {
            let series = 2f64.cbrt() * (1.0 - z) * series_factor(1.0 - z);
            let closed = if z < 1.0 {
                let s = (1.0 - z * z).sqrt();
                (1.5 * (((1.0 + s) / z).ln() - s)).powf(2.0 / 3.0)
            } else {
                let s = (z * z - 1.0).sqrt();
                -(1.5 * (s - (1.0 / z).acos())).powf(2.0 / 3.0)
            };
            assert!((series - closed).abs() <= 1e-13 * closed.abs(), "{z}: {series} vs {closed}");
        }
    }

    #[test]
    fn value_at_two_matches_quadrature() {
        // (2/3)(-zeta)^{3/2} = int_1^2 sqrt(t^2 - 1)/t dt, by composite Simpson
        // on t = cosh(u) to remove the endpoint square root.
        let n = 2000;
        let upper = 2f64.acosh();
        let h = upper / n as f64;
        let f = |u: f64| {
            let t = u.cosh();
            let s = u.sinh();
            s * s / t
        };
        let mut acc = f(0.0) + f(upper);
        for i in 1..n {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let integral = acc * h / 3.0;
        assert!((integral - (3f64.sqrt() - 0.5f64.acos())).abs() < 1e-12);
        let zeta = olver_zeta(2.0).unwrap();
        assert!((2.0 / 3.0 * (-zeta).powf(1.5) - integral).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(olver_zeta(0.0).is_err());
        assert!(olver_zeta(-1.0).is_err());
    }
}
