use rug::Float;

use super::{RecurrenceCoefficients, WeightSpec};
use crate::error::Result;
use crate::precision::{Complex, PrecisionContext, Real};
use crate::quadrature::{adaptive, composite};

/// `int_Gamma h(s) e^{i s^r} ds` by adaptive quadrature along the two rays,
/// truncated where the integrand drops below `10^{-tol_digits}` of its peak.
/// Returns the integral and `int_Gamma |h(s) e^{i s^r}| |ds|`.
///
/// The exponential is evaluated as given, without using that it is real on
/// the rays, so the result is independent of the closed-form moments.
pub fn ray_integral<H>(spec: &WeightSpec, ctx: &PrecisionContext, h: &H, tol_digits: u32) -> Result<(Complex, Real)>
where
    H: Fn(&Complex) -> Complex,
{
    let prec = ctx.bits();
    let mut value = Complex::zero(prec);
    let mut size = Float::new(prec);
    for (ray, sign) in [(spec.ray_high_turns(), 1i32), (spec.ray_low_turns(), -1i32)] {
        let dir = Complex::cis_pi_rational(prec, ray.0, ray.1);
        let r = spec.r() as i32;
        let f = |t: &Real| -> Result<Complex> {
            let s = dir.scale(t);
            let e = s.powi(r).mul_i().exp();
            Ok(&(&h(&s) * &e) * &dir)
        };
        let cutoff = 10f64.powi(-(tol_digits as i32) - 5);
        let mut peak: f64 = 0.0;
        let mut t_end = 1.0;
        loop {
            let v = f(&Float::with_val(prec, t_end))?.abs_f64();
            peak = peak.max(v);
            if t_end > 2.0 && v * t_end < cutoff * peak {
                break;
            }
            if t_end > 200.0 {
                break;
            }
            t_end += 0.25;
        }
        let a = Float::new(prec);
        let b = Float::with_val(prec, t_end);
        let abs_f = |t: &Real| -> Result<Complex> { Ok(Complex::from_real(f(t)?.abs())) };
        let scale = composite(&abs_f, &a, &b, 20, 32)?;
        let tol = Float::with_val(prec, &scale.re * ctx.pow10(-(tol_digits as i32)));
        let part = adaptive(&f, &a, &b, 20, &tol, 40)?;
        if sign > 0 {
            value += &part;
        } else {
            value -= &part;
        }
        size += &scale.re;
    }
    Ok((value, size))
}

/// Closed-form-free `M_k` via [`ray_integral`].
pub fn ray_moment(k: usize, spec: &WeightSpec, ctx: &PrecisionContext) -> Result<Complex> {
    let digits = ctx.decimal_digits() / 2 + 10;
    let (v, _) = ray_integral(spec, ctx, &|s: &Complex| s.powi(k as i32), digits)?;
    Ok(v)
}

/// `|int_Gamma pi_n(s) s^k e^{i s^r} ds| / int_Gamma |pi_n(s) s^k e^{i s^r}| |ds|`.
pub fn verify_orthogonality(rc: &RecurrenceCoefficients, k: usize, spec: &WeightSpec, ctx: &PrecisionContext) -> Result<f64> {
    let digits = ctx.decimal_digits() / 2 + 10;
    let h = |s: &Complex| &rc.pi_eval(s) * &s.powi(k as i32);
    let (v, size) = ray_integral(spec, ctx, &h, digits)?;
    Ok((v.abs() / size).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opq::{build_recurrence, moment, MomentSequence};

    #[test]
    fn ray_moments_match_closed_form() {
        let ctx = PrecisionContext::new(40, 10).unwrap();
        let spec = WeightSpec::new(3).unwrap();
        for k in [0, 1, 2, 5] {
            let a = ray_moment(k, &spec, &ctx).unwrap();
            let b = moment(k, &spec, &ctx).unwrap();
            assert!((&a - &b).abs_f64() < 1e-20 * b.abs_f64().max(1.0), "k={k}");
        }
    }

    #[test]
    fn orthogonal_below_degree_not_at_degree() {
        let n = 5;
        let ctx = PrecisionContext::for_degree(n);
        let spec = WeightSpec::new(3).unwrap();
        let m = MomentSequence::new(spec, 2 * n, &ctx).unwrap();
        let rc = build_recurrence(&m, n).unwrap();
        let small = verify_orthogonality(&rc, 4, &spec, &ctx).unwrap();
        assert!(small < 1e-30, "{small:e}");
        let big = verify_orthogonality(&rc, 5, &spec, &ctx).unwrap();
        assert!(big > 1e-3, "{big:e}");
    }
}
