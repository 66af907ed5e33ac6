//! Exact evaluation of half-integer order Bessel and Hankel functions.
//!
//! `H_{m+1/2}(z) = sqrt(2z/pi) h_m(z)` where the spherical Hankel function is
//! the finite sum
//!
//! ```text
//! h_m(z) = e^{iz} z^{-1} i^{-m-1} sum_{k=0}^{m} a_k (i/z)^k,
//! a_k = (m+k)! / (2^k k! (m-k)!)
//! ```
//!
//! For real arguments and larger `m` the pair `(J, Y)` comes from the
//! spherical recurrences: `y_m` by forward recurrence (dominant, stable), the
//! ratio `j_{m+1}/j_m` by backward recurrence from well above `max(m, z)`,
//! and `j_m` itself from the Wronskian `j_{m+1} y_m - j_m y_{m+1} = z^{-2}`.
//! This keeps `J` accurate in relative terms below the turning point, where
//! it is exponentially smaller than `Y`.

use super::scaled::{Scaled, ScaledComplex};
use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `J_{m+1/2}(z)`, `Y_{m+1/2}(z)` and their `z`-derivatives, in scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfIntegerJY {
    pub m: u32,
    pub z: f64,
    pub j: Scaled,
    pub y: Scaled,
    pub dj: Scaled,
    pub dy: Scaled,
}

impl HalfIntegerJY {
    pub fn hankel(&self) -> ScaledComplex {
        ScaledComplex::from_parts(self.j, self.y)
    }

    pub fn hankel_prime(&self) -> ScaledComplex {
        ScaledComplex::from_parts(self.dj, self.dy)
    }

    /// `|H|^2 = J^2 + Y^2` in scaled form.
    pub fn modulus_sq(&self) -> Scaled {
        let h = self.hankel().norm();
        h * h
    }

    pub fn j_f64(&self) -> Result<f64> {
        finite(self.j.to_f64(), "J")
    }

    pub fn y_f64(&self) -> Result<f64> {
        finite(self.y.to_f64(), "Y")
    }
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Overflow(format!("{what} exceeds binary64 range")))
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    fn add_part(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, &mut self.re_c, z.re);
        Self::add_part(&mut self.im, &mut self.im_c, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// `i^k` for integer `k` (any sign).
fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Spherical Hankel `h_m(z)` from the closed-form coefficient sum.
fn spherical_hankel_closed_form(m: u32, z: Complex64) -> Complex64 {
    let inv_z = z.inv();
    let i_over_z = Complex64::new(0.0, 1.0) * inv_z;
    let mut sum = CompensatedSum::default();
    let mut a_k = 1.0f64;
    let mut pow = Complex64::new(1.0, 0.0);
    let mf = m as f64;
    for k in 0..=m {
        sum.add(pow * a_k);
        let kf = k as f64;
        a_k *= (mf + kf + 1.0) * (mf - kf) / (2.0 * (kf + 1.0));
        pow *= i_over_z;
    }
    (Complex64::new(0.0, z.re).exp() * (-z.im).exp()) * inv_z * i_pow(-(m as i64) - 1) * sum.value()
}

/// `H_{m+1/2}(z) = J_{m+1/2}(z) + i Y_{m+1/2}(z)` for complex `z != 0`
/// (principal branch of `sqrt(2z/pi)`).
pub fn spherical_hankel_exact(m: u32, z: Complex64) -> Result<Complex64> {
    spherical_hankel_exact_with(m, z, super::SpecialFnConfig::default().closed_form_max_m)
}

pub(crate) fn spherical_hankel_exact_with(m: u32, z: Complex64, closed_form_max_m: u32) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(domain("Hankel function is singular at z = 0", 0.0));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain("argument must be finite", z.re));
    }
    let prefactor = (z * (2.0 / PI)).sqrt();
    let value = if m <= closed_form_max_m {
        prefactor * spherical_hankel_closed_form(m, z)
    } else if z.im == 0.0 && z.re > 0.0 {
        half_integer_jy(m, z.re)?.hankel().to_complex()
    } else {
        prefactor * spherical_hankel_forward(m, z).to_complex()
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("H_{{{m}+1/2}}({z}) exceeds binary64 range")))
    }
}

/// Forward recurrence for `h_m` at complex `z`; `h` is the dominant solution
/// beyond the turning point so the recurrence is stable there.
fn spherical_hankel_forward(m: u32, z: Complex64) -> ScaledComplex {
    let mut prev = ScaledComplex::from_complex(spherical_hankel_closed_form(0, z));
    if m == 0 {
        return prev;
    }
    let mut cur = ScaledComplex::from_complex(spherical_hankel_closed_form(1, z));
    let inv_z = z.inv();
    for k in 1..m {
        let next = (cur * (inv_z * (2 * k + 1) as f64)).sub(prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Starting index for the backward ratio recurrence.
fn miller_start(m: u32, z: f64) -> u64 {
    let base = (m as f64 + 1.0).max(z.ceil());
    (base + 20.0 + 12.0 * z.cbrt()).ceil() as u64
}

/// `j_{m+1}(z) / j_m(z)` by backward recurrence of the ratio.
fn spherical_j_ratio(m: u32, z: f64) -> f64 {
    let n = miller_start(m, z);
    let inv_z = 1.0 / z;
    let mut rho = z / (2 * n + 3) as f64;
    let mut k = n;
    while k > m as u64 {
        let denom = (2 * k + 1) as f64 * inv_z - rho;
        rho = if denom == 0.0 { f64::MAX } else { 1.0 / denom };
        k -= 1;
    }
    rho
}

/// Forward recurrence for `(y_m, y_{m+1})` sharing one binary exponent.
fn spherical_y_pair(m: u32, z: f64) -> (f64, f64, i64) {
    let (s, c) = z.sin_cos();
    let mut exp = 0i64;
    let mut a = -c / z;
    let mut b = -c / (z * z) - s / z;
    // tiny z: start already scaled
    if !(a.is_finite() && b.is_finite()) {
        let sa = Scaled::from_f64(-c) / Scaled::from_f64(z);
        let sb = (Scaled::from_f64(-c) / (Scaled::from_f64(z) * Scaled::from_f64(z))).add(Scaled::from_f64(-s) / Scaled::from_f64(z));
        exp = sb.exp;
        a = sa.mant * 2f64.powi((sa.exp - exp) as i32);
        b = sb.mant;
    }
    let inv_z = 1.0 / z;
    const RESCALE: f64 = 1e250;
    for k in 1..=m as u64 {
        let next = (2 * k + 1) as f64 * inv_z * b - a;
        a = b;
        b = next;
        if b.abs() > RESCALE || !b.is_finite() {
            let f = 2f64.powi(-700);
            a *= f;
            b *= f;
            exp += 700;
        }
    }
    (a, b, exp)
}

/// `J_{m+1/2}(z)`, `Y_{m+1/2}(z)` and derivatives for real `z > 0`.
pub fn half_integer_jy(m: u32, z: f64) -> Result<HalfIntegerJY> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("half-integer Bessel functions need a finite z > 0", z));
    }
    let (ym_mant, ym1_mant, e) = spherical_y_pair(m, z);
    let y_m = Scaled::new(ym_mant, e);
    let y_m1 = Scaled::new(ym1_mant, e);

    let rho = spherical_j_ratio(m, z);
    let inv_z = Scaled::from_f64(1.0 / z);
    let inv_z2 = inv_z * inv_z;
    // Wronskian: j_{m+1} y_m - j_m y_{m+1} = z^{-2}
    let (j_m, j_m1) = if rho.abs() <= 1.0 {
        let d = Scaled::new(rho * ym_mant - ym1_mant, e);
        let j_m = inv_z2 / d;
        (j_m, j_m * rho)
    } else {
        let d = Scaled::new(ym_mant - ym1_mant / rho, e);
        let j_m1 = inv_z2 / d;
        (j_m1 * (1.0 / rho), j_m1)
    };

    // derivatives of the spherical functions: f_m' = (m/z) f_m - f_{m+1}
    let mz = m as f64 / z;
    let dj_sph = (j_m * mz).sub(j_m1);
    let dy_sph = (y_m * mz).sub(y_m1);

    // J_nu = sqrt(2z/pi) j_m,  J_nu' = sqrt(2z/pi) (j_m' + j_m / (2z))
    let c = (2.0 * z / PI).sqrt();
    let half_inv_z = 0.5 / z;
    Ok(HalfIntegerJY {
        m,
        z,
        j: j_m * c,
        y: y_m * c,
        dj: dj_sph.add(j_m * half_inv_z) * c,
        dy: dy_sph.add(y_m * half_inv_z) * c,
    })
}
