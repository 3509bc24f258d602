//! Multiprecision real and complex scalars over MPFR.
//!
//! Every value carries its own mantissa precision. Binary operations round to
//! the larger precision of the two operands; mixing with `f64` keeps the
//! precision of the multiprecision operand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Real(Float::with_val(prec, 1))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Real(Float::with_val(prec, v))
    }

    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Real(Float::with_val(prec, p)) / Real(Float::with_val(prec, q))
    }

    /// Parses a decimal literal (`-0.25`, `1e-3`) or an exact ratio (`-1/3`).
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = Self::parse(p, prec)?;
            let q = Self::parse(q, prec)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(p / q);
        }
        let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        Ok(Real(Float::with_val(prec, parsed)))
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, Constant::Pi))
    }

    /// 2^k at the given precision.
    pub fn pow2(k: i32, prec: u32) -> Self {
        Real(Float::with_val(prec, 1) << k)
    }

    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Real(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    pub fn signum(&self) -> f64 {
        if self.0.is_zero() {
            0.0
        } else if self.0.is_sign_negative() {
            -1.0
        } else {
            1.0
        }
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn cbrt(&self) -> Self {
        Real(self.0.clone().cbrt())
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn sin(&self) -> Self {
        Real(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        Real(self.0.clone().cos())
    }

    pub fn sinh(&self) -> Self {
        Real(self.0.clone().sinh())
    }

    pub fn cosh(&self) -> Self {
        Real(self.0.clone().cosh())
    }

    pub fn tanh(&self) -> Self {
        Real(self.0.clone().tanh())
    }

    pub fn atan2(&self, x: &Real) -> Self {
        Real(self.0.clone().atan2(&x.0))
    }

    pub fn hypot(&self, other: &Real) -> Self {
        Real(self.0.clone().hypot(&other.0))
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn powi(&self, n: i32) -> Self {
        Real(self.0.clone().pow(n))
    }

    pub fn powf(&self, e: &Real) -> Self {
        Real(self.0.clone().pow(&e.0))
    }

    pub fn square(&self) -> Self {
        Real(self.0.clone().square())
    }

    pub fn max(self, other: Real) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn total_cmp(&self, other: &Real) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    /// Scientific-notation decimal string with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        format!("{:.*e}", digits.max(1), self.0)
    }

    /// Decimal digits carried by the mantissa.
    pub fn full_digits(&self) -> usize {
        (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_sci(p + 1)),
            None => write!(f, "{}", self.to_sci(self.full_digits())),
        }
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec().max(rhs.prec());
                Real(Float::with_val(p, $tr::$m(&self.0, &rhs.0)))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                $tr::$m(self, &rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                $tr::$m(&self, rhs)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                $tr::$m(&self, &rhs)
            }
        }
        impl $tr<f64> for &Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                Real(Float::with_val(self.prec(), $tr::$m(&self.0, rhs)))
            }
        }
        impl $tr<f64> for Real {
            type Output = Real;
            fn $m(self, rhs: f64) -> Real {
                $tr::$m(&self, rhs)
            }
        }
        impl $tr<&Real> for f64 {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(Float::with_val(rhs.prec(), $tr::$m(self, &rhs.0)))
            }
        }
        impl $tr<Real> for f64 {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                $tr::$m(self, &rhs)
            }
        }
        impl $atr<&Real> for Real {
            fn $am(&mut self, rhs: &Real) {
                *self = $tr::$m(&*self, rhs);
            }
        }
        impl $atr<Real> for Real {
            fn $am(&mut self, rhs: Real) {
                *self = $tr::$m(&*self, &rhs);
            }
        }
        impl $atr<f64> for Real {
            fn $am(&mut self, rhs: f64) {
                *self = $tr::$m(&*self, rhs);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign);
real_binop!(Sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    /// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`).
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty complex literal".into()));
        }
        let imag = t.ends_with('i') || t.ends_with('j');
        if !imag {
            return Ok(Complex::from_real(Real::parse(&t, prec)?));
        }
        let body = &t[..t.len() - 1];
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let ch = bytes[k];
            if (ch == b'+' || ch == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let im_of = |s: &str| -> Result<Real> {
            match s {
                "" | "+" => Ok(Real::one(prec)),
                "-" => Ok(-Real::one(prec)),
                _ => Real::parse(s, prec),
            }
        };
        match split {
            Some(k) => Ok(Complex::new(Real::parse(&body[..k], prec)?, im_of(&body[k..])?)),
            None => Ok(Complex::new(Real::zero(prec), im_of(body)?)),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> Real {
        self.re.hypot(&self.im)
    }

    pub fn arg(&self) -> Real {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        Complex::new(&m * self.im.cos(), &m * self.im.sin())
    }

    /// Principal logarithm, argument in (−π, π].
    pub fn ln(&self) -> Self {
        Complex::new(self.abs().ln(), self.arg())
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.re.is_zero() && self.im.is_zero() {
            return Complex::zero(p);
        }
        let r = self.abs();
        let t = ((&r + self.re.abs()) * 0.5).sqrt();
        if !self.re.is_sign_negative() {
            Complex::new(t.clone(), &self.im / (t * 2.0))
        } else {
            let re = self.im.abs() / (&t * 2.0);
            let im = if self.im.is_sign_negative() { -t } else { t };
            Complex::new(re, im)
        }
    }

    pub fn powi(&self, n: i64) -> Self {
        let p = self.prec();
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut acc = Complex::one(p);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn from_c64(z: num_complex::Complex64, prec: u32) -> Self {
        Complex::from_f64(z.re, z.im, prec)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { "-" } else { "+" };
        match f.precision() {
            Some(p) => write!(f, "{:.*}{}{:.*}i", p, self.re, sign, p, self.im.abs()),
            None => write!(f, "{}{}{}i", self.re, sign, self.im.abs()),
        }
    }
}

impl From<Real> for Complex {
    fn from(r: Real) -> Self {
        Complex::from_real(r)
    }
}

macro_rules! complex_forward {
    ($tr:ident, $m:ident, $rhs:ty, $atr:ident, $am:ident) => {
        impl $tr<$rhs> for Complex {
            type Output = Complex;
            fn $m(self, rhs: $rhs) -> Complex {
                $tr::$m(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a $rhs> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &'a $rhs) -> Complex {
                $tr::$m(&self, rhs)
            }
        }
        impl<'a> $tr<$rhs> for &'a Complex {
            type Output = Complex;
            fn $m(self, rhs: $rhs) -> Complex {
                $tr::$m(self, &rhs)
            }
        }
        impl $atr<$rhs> for Complex {
            fn $am(&mut self, rhs: $rhs) {
                *self = $tr::$m(&*self, &rhs);
            }
        }
        impl<'a> $atr<&'a $rhs> for Complex {
            fn $am(&mut self, rhs: &'a $rhs) {
                *self = $tr::$m(&*self, rhs);
            }
        }
    };
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let d = rhs.norm_sqr();
        Complex::new((&self.re * &rhs.re + &self.im * &rhs.im) / &d, (&self.im * &rhs.re - &self.re * &rhs.im) / &d)
    }
}

impl Add<&Real> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Real) -> Complex {
        Complex::new(&self.re + rhs, self.im.clone())
    }
}

impl Sub<&Real> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Real) -> Complex {
        Complex::new(&self.re - rhs, self.im.clone())
    }
}

impl Mul<&Real> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Real) -> Complex {
        self.scale(rhs)
    }
}

impl Div<&Real> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Real) -> Complex {
        Complex::new(&self.re / rhs, &self.im / rhs)
    }
}

impl Add<&f64> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &f64) -> Complex {
        Complex::new(&self.re + *rhs, self.im.clone())
    }
}

impl Sub<&f64> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &f64) -> Complex {
        Complex::new(&self.re - *rhs, self.im.clone())
    }
}

impl Mul<&f64> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &f64) -> Complex {
        Complex::new(&self.re * *rhs, &self.im * *rhs)
    }
}

impl Div<&f64> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &f64) -> Complex {
        Complex::new(&self.re / *rhs, &self.im / *rhs)
    }
}

complex_forward!(Add, add, Complex, AddAssign, add_assign);
complex_forward!(Sub, sub, Complex, SubAssign, sub_assign);
complex_forward!(Mul, mul, Complex, MulAssign, mul_assign);
complex_forward!(Div, div, Complex, DivAssign, div_assign);
complex_forward!(Add, add, Real, AddAssign, add_assign);
complex_forward!(Sub, sub, Real, SubAssign, sub_assign);
complex_forward!(Mul, mul, Real, MulAssign, mul_assign);
complex_forward!(Div, div, Real, DivAssign, div_assign);
complex_forward!(Add, add, f64, AddAssign, add_assign);
complex_forward!(Sub, sub, f64, SubAssign, sub_assign);
complex_forward!(Mul, mul, f64, MulAssign, mul_assign);
complex_forward!(Div, div, f64, DivAssign, div_assign);

impl Sub<&Complex> for &Real {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(self - &rhs.re, -&rhs.im)
    }
}

impl Sub<Complex> for Real {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Div<&Complex> for &Real {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        rhs.recip().scale(self)
    }
}

impl Div<Complex> for Real {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        &self / &rhs
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

/// Minimal field interface shared by the dense linear solver.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    fn zero_with(prec: u32) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn modulus(&self) -> Real;
    fn precision(&self) -> u32;
}

impl Field for Real {
    fn zero_with(prec: u32) -> Self {
        Real::zero(prec)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn modulus(&self) -> Real {
        self.abs()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

impl Field for Complex {
    fn zero_with(prec: u32) -> Self {
        Complex::zero(prec)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn modulus(&self) -> Real {
        self.abs()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}
