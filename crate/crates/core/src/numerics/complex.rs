use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Float;

/// Complex number as a pair of MPFR floats.
#[derive(Debug, Clone, PartialEq)]
pub struct HpComplex {
    pub re: Float,
    pub im: Float,
}

impl HpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        HpComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        HpComplex { re, im }
    }

    /// `r e^{i phi}`.
    pub fn from_polar(r: &Float, phi: &Float) -> Self {
        let prec = r.prec().max(phi.prec());
        let (s, c) = Float::with_val(prec, phi).sin_cos(Float::new(prec));
        HpComplex::new(c * r, s * r)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        HpComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        let mut out = Float::with_val(prec, self.re.square_ref());
        out += Float::with_val(prec, self.im.square_ref());
        out
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in (-π, π].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, k: &Float) -> Self {
        HpComplex::new(
            Float::with_val(self.re.prec(), &self.re * k),
            Float::with_val(self.im.prec(), &self.im * k),
        )
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let modulus = Float::with_val(prec, self.re.exp_ref());
        HpComplex::from_polar(&modulus, &self.im)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        HpComplex::new(Float::with_val(prec, self.abs().ln_ref()), self.arg())
    }

    /// Principal power `self^w` for real `w`; `0^w = 0` for `w > 0`.
    pub fn powf(&self, w: &Float) -> Self {
        let prec = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return HpComplex::zero(prec);
        }
        let r = Float::with_val(prec, self.abs().pow(w));
        let phi = Float::with_val(prec, self.arg() * w);
        HpComplex::from_polar(&r, &phi)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HpComplex::new(
            Float::with_val(self.re.prec(), &self.re / &n),
            -Float::with_val(self.im.prec(), &self.im / &n),
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        self * &other.recip()
    }
}

impl Add for &HpComplex {
    type Output = HpComplex;
    fn add(self, rhs: &HpComplex) -> HpComplex {
        HpComplex::new(
            Float::with_val(self.re.prec(), &self.re + &rhs.re),
            Float::with_val(self.im.prec(), &self.im + &rhs.im),
        )
    }
}

impl Sub for &HpComplex {
    type Output = HpComplex;
    fn sub(self, rhs: &HpComplex) -> HpComplex {
        HpComplex::new(
            Float::with_val(self.re.prec(), &self.re - &rhs.re),
            Float::with_val(self.im.prec(), &self.im - &rhs.im),
        )
    }
}

impl Mul for &HpComplex {
    type Output = HpComplex;
    fn mul(self, rhs: &HpComplex) -> HpComplex {
        let prec = self.prec();
        let mut re = Float::with_val(prec, &self.re * &rhs.re);
        re -= &self.im * &rhs.im;
        let mut im = Float::with_val(prec, &self.re * &rhs.im);
        im += &self.im * &rhs.re;
        HpComplex::new(re, im)
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }
}
