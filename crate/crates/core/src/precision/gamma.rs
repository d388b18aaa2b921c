use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::{Complex, PrecisionContext, Real};
use crate::error::{Error, Result};

/// Complex Gamma function.
///
/// Spouge's approximation for `Re z >= 1/2` and the reflection formula
/// otherwise. With parameter `a` the relative truncation error is below
/// `a^{-1/2} (2 pi)^{-(a + 1/2)}`, so `a` is picked from the working digits.
/// The coefficients alternate and grow like `e^a`, so the sum is accumulated
/// at roughly twice the working precision.
pub fn gamma(z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if z.im.is_zero() && z.re.is_integer() && !z.re.is_sign_positive() || z.is_zero() {
        return Err(Error::Pole(format!("{z}")));
    }
    let out_prec = ctx.bits();
    let wp = 2 * out_prec + 64;
    let z = z.with_prec(wp);
    let half = Float::with_val(wp, 0.5);
    if z.re < half {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let pi = Float::with_val(wp, Constant::Pi);
        let one_minus = &Complex::one(wp) - &z;
        let g = spouge(&one_minus, wp, ctx)?;
        let s = sin(&z.scale(&pi));
        if s.is_zero() {
            return Err(Error::Pole(format!("{z}")));
        }
        let denom = &s * &g;
        let out = &Complex::from_real(pi) / &denom;
        return out.with_prec(out_prec).finite("gamma");
    }
    spouge(&z, wp, ctx)?.with_prec(out_prec).finite("gamma")
}

fn sin(z: &Complex) -> Complex {
    // sin z = (e^{iz} - e^{-iz}) / (2i)
    let e = z.mul_i().exp();
    let e_inv = e.recip();
    (&e - &e_inv).mul_neg_i() / 2u32
}

/// Spouge's formula for `Gamma(z)` with `Re z >= 1/2`.
fn spouge(z: &Complex, wp: u32, ctx: &PrecisionContext) -> Result<Complex> {
    let digits = (ctx.decimal_digits() + ctx.guard_digits()) as f64 + 3.0;
    let a = (digits * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI).ln()).ceil() as u32 + 1;
    let x = z - 1u32;
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut sum = Complex::from_real(two_pi.sqrt());
    let mut fact: Real = Float::with_val(wp, 1);
    for k in 1..a {
        if k > 1 {
            fact *= k - 1;
        }
        let base = Float::with_val(wp, a - k);
        let ex = Float::with_val(wp, k) - 0.5f64;
        let mut c = base.clone().pow(&ex) * base.exp();
        c /= &fact;
        if k % 2 == 0 {
            c = -c;
        }
        let denom = &x + k;
        sum += &Complex::from_real(c) / &denom;
    }
    let xa = &x + a;
    let power = xa.powc(&(&x + 0.5f64));
    let decay = (-xa).exp();
    (&(&power * &decay) * &sum).finite("gamma")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers_and_half() {
        let ctx = PrecisionContext::standard();
        let g1 = gamma(&ctx.complex(1.0, 0.0), &ctx).unwrap();
        assert!((&g1 - &ctx.one()).abs_f64() < 1e-38);
        let g5 = gamma(&ctx.complex(5.0, 0.0), &ctx).unwrap();
        assert!((g5.re.to_f64() - 24.0).abs() < 1e-30);
        let gh = gamma(&ctx.complex(0.5, 0.0), &ctx).unwrap();
        let sqrt_pi = ctx.pi().sqrt();
        let err = Float::with_val(ctx.bits(), &gh.re - &sqrt_pi).abs();
        assert!(err.to_f64() < 1e-38);
        assert!(gh.im.is_zero() || gh.im.to_f64().abs() < 1e-38);
    }

    #[test]
    fn poles_are_errors() {
        let ctx = PrecisionContext::standard();
        for k in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(&ctx.complex(k, 0.0), &ctx), Err(Error::Pole(_))));
        }
        assert!(gamma(&ctx.complex(-1.0, 1e-30), &ctx).is_ok());
    }

    #[test]
    fn matches_mpfr_on_the_real_line() {
        let ctx = PrecisionContext::new(80, 10).unwrap();
        for x in [0.1, 1.0 / 3.0, 2.0 / 3.0, 1.7, 9.25, -2.5, -0.3] {
            let g = gamma(&ctx.complex(x, 0.0), &ctx).unwrap();
            let want = Float::with_val(ctx.bits(), x).gamma();
            let rel = Float::with_val(ctx.bits(), &g.re - &want).abs() / want.abs();
            assert!(rel.to_f64() < 1e-78, "x={x} rel={}", rel.to_f64());
        }
    }
}
