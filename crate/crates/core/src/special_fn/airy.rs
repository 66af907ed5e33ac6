//! Airy functions `Ai`, `Bi` and their derivatives on the real line.
//!
//! Maclaurin sums (in double-double, so that the `Ai = c1 f - c2 g`
//! cancellation for positive `x` costs nothing) inside `|x| <= x_switch`,
//! optimally truncated asymptotic expansions outside.

use super::dd::DD;
use super::SpecialFnConfig;
use crate::error::{domain, Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

/// `Ai(0)`, double-double.
const AI0: DD = DD::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// `-Ai'(0)`, double-double.
const MINUS_AIP0: DD = DD::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const SQRT3: DD = DD::new(1.732_050_807_568_877_2, 1.003_508_422_180_690_3e-16);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
    /// Relative to `|Ai|`, `|Bi|` for `x >= 0` and to the modulus
    /// `sqrt(Ai^2 + Bi^2)` on the oscillatory side.
    pub est_rel_error: f64,
}

/// For `x > 0` the asymptotic side returns `Ai e^{xi}`, `Bi e^{-xi}` (and
/// derivatives scaled alike) so callers can work in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScaledAiry {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
    /// `xi = (2/3) x^{3/2}` for `x > 0`, zero otherwise.
    pub xi: f64,
    pub est_rel_error: f64,
}

pub fn airy(x: f64) -> Result<Airy> {
    airy_with(x, &SpecialFnConfig::default())
}

pub fn airy_with(x: f64, cfg: &SpecialFnConfig) -> Result<Airy> {
    let s = airy_scaled(x, cfg)?;
    if s.xi == 0.0 {
        return Ok(Airy { ai: s.ai, aip: s.aip, bi: s.bi, bip: s.bip, est_rel_error: s.est_rel_error });
    }
    let down = (-s.xi).exp();
    let up = s.xi.exp();
    let out = Airy {
        ai: s.ai * down,
        aip: s.aip * down,
        bi: s.bi * up,
        bip: s.bip * up,
        est_rel_error: s.est_rel_error,
    };
    if !(out.bi.is_finite() && out.bip.is_finite()) {
        return Err(Error::Overflow(format!("Bi({x}) exceeds binary64 range")));
    }
    Ok(out)
}

pub(crate) fn airy_scaled(x: f64, cfg: &SpecialFnConfig) -> Result<ScaledAiry> {
    if !x.is_finite() {
        return Err(domain("Airy argument must be finite", x));
    }
    if x.abs() <= cfg.airy_x_switch {
        let a = maclaurin(x);
        Ok(ScaledAiry { ai: a.ai, aip: a.aip, bi: a.bi, bip: a.bip, xi: 0.0, est_rel_error: a.est_rel_error })
    } else if x > 0.0 {
        Ok(asymptotic_positive(x))
    } else {
        let a = asymptotic_negative(-x);
        Ok(ScaledAiry { ai: a.ai, aip: a.aip, bi: a.bi, bip: a.bip, xi: 0.0, est_rel_error: a.est_rel_error })
    }
}

fn maclaurin(x: f64) -> Airy {
    // f = sum x^{3k} / (2*3)(5*6)..., g = sum x^{3k+1} / (3*4)(6*7)...
    let (x2h, x2l) = {
        let p = x * x;
        (p, x.mul_add(x, -p))
    };
    let x3 = DD::new(x2h, x2l).mul_f64(x);
    let xd = DD::from_f64(x);

    let mut f = DD::from_f64(1.0);
    let mut g = xd;
    let mut fp = DD::ZERO;
    let mut gp = DD::from_f64(1.0);
    let mut tf = DD::from_f64(1.0);
    let mut tg = xd;
    let mut tfp = DD::from_f64(0.5) * DD::new(x2h, x2l);
    let mut tgp = DD::from_f64(1.0);
    let mut abs_total = 1.0 + x.abs();
    fp = fp + tfp;

    for k in 1..400u32 {
        let kf = k as f64;
        tf = (tf * x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        tg = (tg * x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        if k >= 2 {
            tfp = (tfp * x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp = fp + tfp;
        }
        tgp = (tgp * x3).div_f64((3.0 * kf) * (3.0 * kf - 2.0));
        f = f + tf;
        g = g + tg;
        gp = gp + tgp;
        abs_total += tf.abs() + tg.abs();
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if k > 3 && tf.abs() + tg.abs() + tfp.abs() + tgp.abs() < 1e-34 * scale {
            break;
        }
    }

    let ai = AI0 * f - MINUS_AIP0 * g;
    let aip = AI0 * fp - MINUS_AIP0 * gp;
    let bi = SQRT3 * (AI0 * f + MINUS_AIP0 * g);
    let bip = SQRT3 * (AI0 * fp + MINUS_AIP0 * gp);
    let (ai, aip, bi, bip) = (ai.to_f64(), aip.to_f64(), bi.to_f64(), bip.to_f64());

    let env = if x >= 0.0 { ai.abs().min(bi.abs()) } else { ai.hypot(bi) };
    let est = 2.0 * f64::EPSILON + 1e-31 * abs_total / env;
    Airy { ai, aip, bi, bip, est_rel_error: est }
}

/// Coefficients `u_k`, `v_k` of the Airy asymptotic expansions.
fn uv_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0f64; n];
    let mut v = vec![1.0f64; n];
    for k in 1..n {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
    }
    (u, v)
}

/// Optimally truncated `sum_k s^k c_k / xi^k` with `s = +-1`.
/// Returns `(sum, first_omitted_term_magnitude)`.
fn truncated_sum(c: &[f64], xi: f64, sign: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut pow = 1.0;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pow;
        if term.abs() >= prev {
            return (sum, term.abs().min(prev));
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() && k > 0 {
            return (sum, term.abs());
        }
        prev = term.abs();
        pow *= sign / xi;
    }
    (sum, prev)
}

/// Even/odd split `sum (-1)^k c_{2k}/xi^{2k}`, `sum (-1)^k c_{2k+1}/xi^{2k+1}`.
fn split_sums(c: &[f64], xi: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut q = 0.0;
    let mut prev = f64::INFINITY;
    let mut pow = 1.0;
    let mut omitted = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        let term = ck * pow;
        if term.abs() >= prev {
            omitted = prev.min(term.abs());
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        prev = term.abs();
        omitted = prev;
        if term.abs() < 1e-18 && k > 1 {
            break;
        }
        pow /= xi;
    }
    (p, q, omitted)
}

fn asymptotic_positive(x: f64) -> ScaledAiry {
    let (u, v) = uv_coefficients(60);
    let xi = 2.0 / 3.0 * x * x.sqrt();
    let x14 = x.sqrt().sqrt();
    let sp = PI.sqrt();
    let (su_alt, eu_alt) = truncated_sum(&u, xi, -1.0);
    let (sv_alt, ev_alt) = truncated_sum(&v, xi, -1.0);
    let (su, eu) = truncated_sum(&u, xi, 1.0);
    let (sv, ev) = truncated_sum(&v, xi, 1.0);
    let est = eu_alt.max(ev_alt).max(eu).max(ev) * 1.5 + 2.0 * f64::EPSILON;
    ScaledAiry {
        ai: su_alt / (2.0 * sp * x14),
        aip: -x14 * sv_alt / (2.0 * sp),
        bi: su / (sp * x14),
        bip: x14 * sv / sp,
        xi,
        est_rel_error: est,
    }
}

fn asymptotic_negative(t: f64) -> Airy {
    let (u, v) = uv_coefficients(60);
    let xi = 2.0 / 3.0 * t * t.sqrt();
    let t14 = t.sqrt().sqrt();
    let sp = PI.sqrt();
    let (pu, qu, eu) = split_sums(&u, xi);
    let (pv, qv, ev) = split_sums(&v, xi);
    let (s, c) = (xi - FRAC_PI_4).sin_cos();
    ScaledAiry {
        ai: (c * pu + s * qu) / (sp * t14),
        aip: t14 * (s * pv - c * qv) / sp,
        bi: (-s * pu + c * qu) / (sp * t14),
        bip: t14 * (c * pv + s * qv) / sp,
        xi: 0.0,
        est_rel_error: 1.5 * eu.max(ev) + 4.0 * f64::EPSILON * xi,
    }
    .into()
}

impl From<ScaledAiry> for Airy {
    fn from(s: ScaledAiry) -> Airy {
        Airy { ai: s.ai, aip: s.aip, bi: s.bi, bip: s.bip, est_rel_error: s.est_rel_error }
    }
}
