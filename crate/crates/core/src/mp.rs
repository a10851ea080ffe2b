//! Multiprecision complex numbers on top of MPFR floats.
//!
//! Every value carries its own precision; binary operations work at the
//! larger precision of the two operands.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Rational};

/// Working precision in bits.
pub type Prec = u32;

pub fn pi(prec: Prec) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn float(prec: Prec, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn rational_to_float(prec: Prec, r: &Rational) -> Float {
    Float::with_val(prec, r)
}

/// Decimal rendering with enough digits for the value's precision.
pub fn to_decimal(x: &Float) -> String {
    let digits = ((x.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1;
    x.to_string_radix(10, Some(digits))
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: Prec) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: Prec) -> Self {
        Complex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: Prec) -> Self {
        Complex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_f64(prec: Prec, re: f64, im: f64) -> Self {
        Complex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex::new(re, im)
    }

    pub fn from_rational(prec: Prec, r: &Rational) -> Self {
        Complex::from_real(Float::with_val(prec, r))
    }

    /// `e(num/den) = exp(2 pi i num/den)`.
    pub fn unit_root(prec: Prec, num: u64, den: u64) -> Self {
        let mut angle = pi(prec + 8) * 2u32;
        angle *= Float::with_val(prec + 8, num);
        angle /= Float::with_val(prec + 8, den);
        let mut s = angle;
        let mut c = Float::new(prec + 8);
        s.sin_cos_mut(&mut c);
        Complex::new(Float::with_val(prec, &c), Float::with_val(prec, &s))
    }

    pub fn prec(&self) -> Prec {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: Prec) -> Self {
        Complex::new(
            Float::with_val(prec, &self.re),
            Float::with_val(prec, &self.im),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.clone().hypot(&self.im))
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.clone().atan2(&self.re))
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec().max(k.prec());
        Complex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn mul_i(&self) -> Self {
        Complex::new(-self.im.clone(), self.re.clone())
    }

    pub fn recip(&self) -> Self {
        Complex::one(self.prec()) / self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let mut s = self.im.clone();
        let mut c = Float::new(p);
        s.sin_cos_mut(&mut c);
        Complex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s))
    }

    /// Principal logarithm, `log|z| + i arg z`.
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        let p = self.prec();
        let half = self.ln().scale(&Float::with_val(p, 0.5));
        half.exp()
    }

    /// Principal power `self^w = exp(w log self)`.
    pub fn pow(&self, w: &Complex) -> Self {
        (w * &self.ln()).exp()
    }

    /// `x^(-s)` for real `x > 0`.
    pub fn real_pow_neg(x: &Float, s: &Complex) -> Self {
        let lx = Float::with_val(s.prec().max(x.prec()), x.ln_ref());
        (-s.scale(&lx)).exp()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, rhs: &Complex) -> Complex {
                (&self).$method(rhs)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $method(self, rhs: Complex) -> Complex {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        Complex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Complex::new(ac - bd, ad + bc)
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let p = self.prec().max(rhs.prec());
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Complex::new(
            Float::with_val(p, &num.re / &n),
            Float::with_val(p, &num.im / &n),
        )
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -(self.clone())
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        *self = &*self * rhs;
    }
}
