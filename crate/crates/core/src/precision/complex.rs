use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

use super::Real;
use crate::error::{Error, Result};

/// Extended-precision complex number backed by two MPFR floats.
///
/// Binary operations take the precision of the left operand.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: u32) -> Self {
        Complex::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Complex::from_f64(prec, 0.0, 1.0)
    }

    /// `e^{i pi p / q}`, exact when the angle is a multiple of `pi/2`.
    pub fn cis_pi_rational(prec: u32, p: i64, q: i64) -> Self {
        assert!(q != 0);
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let turn = 2 * q;
        let p = p.rem_euclid(turn);
        if (2 * p) % q == 0 {
            return match (2 * p) / q {
                0 => Complex::from_f64(prec, 1.0, 0.0),
                1 => Complex::from_f64(prec, 0.0, 1.0),
                2 => Complex::from_f64(prec, -1.0, 0.0),
                _ => Complex::from_f64(prec, 0.0, -1.0),
            };
        }
        let angle = Float::with_val(prec, Constant::Pi) * p / q;
        Complex::cis(&angle)
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex { re: c, im: s }
    }

    pub fn from_polar(r: &Real, theta: &Real) -> Self {
        Complex::cis(theta).scale(r)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Turns a non-finite value into an error naming the operation.
    pub fn finite(self, op: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(op))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul_i(&self) -> Self {
        Complex {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn mul_neg_i(&self) -> Self {
        Complex {
            re: self.im.clone(),
            im: -self.re.clone(),
        }
    }

    /// `-conj(z)`: reflection in the imaginary axis.
    pub fn reflect(&self) -> Self {
        Complex {
            re: -self.re.clone(),
            im: self.im.clone(),
        }
    }

    pub fn scale(&self, k: &Real) -> Self {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn norm_sqr(&self) -> Real {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Complex {
            re: Float::with_val(self.prec(), &self.re / &n),
            im: -Float::with_val(self.prec(), &self.im / &n),
        }
    }

    pub fn exp(&self) -> Self {
        let m = Float::with_val(self.prec(), self.re.exp_ref());
        Complex::cis(&self.im).scale(&m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        Complex {
            re: Float::with_val(p, r.ln_ref()),
            im: self.arg(),
        }
    }

    /// Principal square root (cut along the negative real axis, `Re >= 0`).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Complex::zero(p);
        }
        let r = self.abs();
        if self.re.is_sign_positive() {
            let t = Float::with_val(p, &r + &self.re) / 2u32;
            let t = t.sqrt();
            let im = Float::with_val(p, &self.im / &t) / 2u32;
            Complex { re: t, im }
        } else {
            let t = Float::with_val(p, &r - &self.re) / 2u32;
            let t = t.sqrt();
            let re = Float::with_val(p, self.im.abs_ref()) / &t / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            Complex { re, im }
        }
    }

    /// Principal power `exp(a log z)` for real `a`.
    pub fn powf(&self, a: &Real) -> Self {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        self.ln().scale(a).exp()
    }

    /// Principal power with complex exponent.
    pub fn powc(&self, a: &Complex) -> Self {
        if self.is_zero() {
            return Complex::zero(self.prec());
        }
        (&self.ln() * a).exp()
    }

    pub fn powi(&self, k: i32) -> Self {
        let p = self.prec();
        if k < 0 {
            return self.powi(-k).recip();
        }
        let mut result = Complex::one(p);
        let mut base = self.clone();
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Distance between two points, as `f64`; for geometry bookkeeping only.
    pub fn dist_f64(&self, other: &Complex) -> f64 {
        let (a, b) = self.to_f64();
        let (c, d) = other.to_f64();
        (a - c).hypot(b - d)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "({re:.17e} {im:+.17e}i)")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im.is_sign_negative() {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -self.clone()
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        Complex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Complex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let p = self.prec();
        let n = rhs.norm_sqr();
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        Complex {
            re: (ac + bd) / &n,
            im: (bc - ad) / &n,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex { (&self).$m(&rhs) }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex { (&self).$m(rhs) }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

macro_rules! real_scalar_ops {
    ($($t:ty),*) => {$(
        impl Add<$t> for &Complex {
            type Output = Complex;
            fn add(self, rhs: $t) -> Complex {
                let p = self.prec();
                Complex { re: Float::with_val(p, &self.re + rhs), im: self.im.clone() }
            }
        }
        impl Add<$t> for Complex {
            type Output = Complex;
            fn add(self, rhs: $t) -> Complex { &self + rhs }
        }
        impl Sub<$t> for &Complex {
            type Output = Complex;
            fn sub(self, rhs: $t) -> Complex {
                let p = self.prec();
                Complex { re: Float::with_val(p, &self.re - rhs), im: self.im.clone() }
            }
        }
        impl Sub<$t> for Complex {
            type Output = Complex;
            fn sub(self, rhs: $t) -> Complex { &self - rhs }
        }
        impl Mul<$t> for &Complex {
            type Output = Complex;
            fn mul(self, rhs: $t) -> Complex {
                let p = self.prec();
                Complex {
                    re: Float::with_val(p, &self.re * rhs),
                    im: Float::with_val(p, &self.im * rhs),
                }
            }
        }
        impl Mul<$t> for Complex {
            type Output = Complex;
            fn mul(self, rhs: $t) -> Complex { &self * rhs }
        }
        impl Div<$t> for &Complex {
            type Output = Complex;
            fn div(self, rhs: $t) -> Complex {
                let p = self.prec();
                Complex {
                    re: Float::with_val(p, &self.re / rhs),
                    im: Float::with_val(p, &self.im / rhs),
                }
            }
        }
        impl Div<$t> for Complex {
            type Output = Complex;
            fn div(self, rhs: $t) -> Complex { &self / rhs }
        }
    )*};
}
real_scalar_ops!(f64, i32, u32, &Real);

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        self.re += rhs.re;
        self.im += rhs.im;
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

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64(P, re, im)
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs_f64() <= tol
    }

    #[test]
    fn field_operations() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        assert!(close(&(&a * &b), &c(5.625, 5.0), 1e-50));
        assert!(close(&(&(&a / &b) * &b), &a, 1e-50));
        assert!(close(&(&a + &b), &c(1.25, 1.0), 1e-50));
        assert!(close(&a.recip(), &(&Complex::one(P) / &a), 1e-50));
    }

    #[test]
    fn principal_branches() {
        let s = c(-4.0, 0.0).sqrt();
        assert!(close(&s, &c(0.0, 2.0), 1e-50));
        let s = c(-4.0, -0.0).sqrt();
        assert!(close(&s, &c(0.0, -2.0), 1e-50));
        let z = c(-3.0, 4.0);
        let r = z.sqrt();
        assert!(r.re.is_sign_positive());
        assert!(close(&r.square(), &z, 1e-50));
        let l = c(-1.0, 0.0).ln();
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(close(&z.ln().exp(), &z, 1e-50));
    }

    #[test]
    fn exact_quarter_turns() {
        let z = Complex::cis_pi_rational(P, 5, 2);
        assert!(z.re.is_zero());
        assert_eq!(z.im.to_f64(), 1.0);
        let z = Complex::cis_pi_rational(P, -3, 1);
        assert_eq!(z.to_f64(), (-1.0, 0.0));
        let z = Complex::cis_pi_rational(P, 1, 6);
        assert!((z.re.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn integer_powers() {
        let z = c(0.3, -1.1);
        let direct = &(&z * &z) * &z;
        assert!(close(&z.powi(3), &direct, 1e-50));
        assert!(close(&(&z.powi(-2) * &z.powi(2)), &Complex::one(P), 1e-50));
        let third = Float::with_val(P, 1) / 3u32;
        assert!(close(&z.powf(&third).powi(3), &z, 1e-50));
    }
}
