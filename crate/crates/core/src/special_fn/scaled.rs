//! Numbers carried as `mantissa * 2^exp` with a separate integer exponent.
//!
//! Large-order Bessel functions overflow binary64 long before the kernels
//! built from them do (`J` underflows while `Y` overflows, their products stay
//! moderate), so the recurrences and the kernel assembly work in this form.

use num_complex::Complex64;
use std::ops::{Div, Mul, Neg};

/// Splits a finite nonzero `x` into `(m, e)` with `x = m * 2^e`, `0.5 <= |m| < 1`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(m_bits), e)
}

/// `x * 2^e` without intermediate overflow; saturates to 0 or infinity.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: f64,
    pub exp: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, exp: 0 };

    pub fn new(mant: f64, exp: i64) -> Self {
        let (m, e) = frexp(mant);
        if m == 0.0 {
            return Self::ZERO;
        }
        Scaled { mant: m, exp: exp + e }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        self.mant.abs().ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    pub fn abs(self) -> Scaled {
        Scaled { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.exp.max(o.exp);
        Scaled::new(ldexp(self.mant, self.exp - e) + ldexp(o.mant, o.exp - e), e)
    }

    pub fn sub(self, o: Scaled) -> Scaled {
        self.add(-o)
    }

    pub fn to_complex(self) -> ScaledComplex {
        ScaledComplex::new(Complex64::new(self.mant, 0.0), self.exp)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, exp: self.exp }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled::new(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, o: f64) -> Scaled {
        Scaled::new(self.mant * o, self.exp)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled::new(self.mant / o.mant, self.exp - o.exp)
    }
}

/// Complex counterpart of [`Scaled`]; the larger component of the mantissa
/// lies in `[0.5, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mant: Complex64,
    pub exp: i64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex { mant: Complex64::new(0.0, 0.0), exp: 0 };

    pub fn new(mant: Complex64, exp: i64) -> Self {
        let big = mant.re.abs().max(mant.im.abs());
        if big == 0.0 {
            return Self::ZERO;
        }
        let (_, e) = frexp(big);
        ScaledComplex { mant: Complex64::new(ldexp(mant.re, -e), ldexp(mant.im, -e)), exp: exp + e }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0)
    }

    pub fn from_parts(re: Scaled, im: Scaled) -> Self {
        let e = re.exp.max(im.exp);
        let e = if re.is_zero() { im.exp } else if im.is_zero() { re.exp } else { e };
        ScaledComplex::new(
            Complex64::new(ldexp(re.mant, re.exp - e), ldexp(im.mant, im.exp - e)),
            e,
        )
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(ldexp(self.mant.re, self.exp), ldexp(self.mant.im, self.exp))
    }

    pub fn is_zero(self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn norm(self) -> Scaled {
        Scaled::new(self.mant.norm(), self.exp)
    }

    pub fn conj(self) -> ScaledComplex {
        ScaledComplex { mant: self.mant.conj(), exp: self.exp }
    }

    pub fn add(self, o: ScaledComplex) -> ScaledComplex {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.exp.max(o.exp);
        let a = self.mant * ldexp(1.0, self.exp - e);
        let b = o.mant * ldexp(1.0, o.exp - e);
        ScaledComplex::new(a + b, e)
    }

    pub fn sub(self, o: ScaledComplex) -> ScaledComplex {
        self.add(ScaledComplex { mant: -o.mant, exp: o.exp })
    }

    pub fn scale(self, s: f64) -> ScaledComplex {
        ScaledComplex::new(self.mant * s, self.exp)
    }
}

impl Mul for ScaledComplex {
    type Output = ScaledComplex;
    fn mul(self, o: ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Mul<Complex64> for ScaledComplex {
    type Output = ScaledComplex;
    fn mul(self, o: Complex64) -> ScaledComplex {
        ScaledComplex::new(self.mant * o, self.exp)
    }
}

impl Div for ScaledComplex {
    type Output = ScaledComplex;
    fn div(self, o: ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(self.mant / o.mant, self.exp - o.exp)
    }
}
