use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::{Complex, PrecisionContext, Real};
use crate::error::Result;

/// Airy function `Ai(z)`.
pub fn airy_ai(z: &Complex, ctx: &PrecisionContext) -> Complex {
    airy_pair(z, ctx).0
}

/// Derivative `Ai'(z)`.
pub fn airy_ai_prime(z: &Complex, ctx: &PrecisionContext) -> Complex {
    airy_pair(z, ctx).1
}

/// Radius beyond which the asymptotic expansion is used.
///
/// Optimal truncation of the asymptotic series leaves a relative error of
/// about `e^{-2|zeta|}` with `zeta = (2/3) z^{3/2}`; the radius makes that
/// smaller than the working epsilon.
pub fn airy_switchover_radius(ctx: &PrecisionContext) -> f64 {
    let d = (ctx.decimal_digits() + ctx.guard_digits()) as f64 + 2.0;
    (0.75 * d * std::f64::consts::LN_10).powf(2.0 / 3.0)
}

/// `(Ai(z), Ai'(z))`.
pub fn airy_pair(z: &Complex, ctx: &PrecisionContext) -> (Complex, Complex) {
    let prec = ctx.bits();
    let z = z.with_prec(prec);
    let rho = airy_switchover_radius(ctx);
    if z.abs_f64() <= rho {
        let (a, b) = maclaurin(&z, ctx);
        return (a.with_prec(prec), b.with_prec(prec));
    }
    let third = 2.0 * std::f64::consts::PI / 3.0;
    if z.arg().to_f64().abs() <= third {
        return asymptotic(&z, ctx);
    }
    // Ai(z) = -w Ai(wz) - w^2 Ai(w^2 z), both rotated arguments land in |arg| <= 2pi/3
    let w = Complex::cis_pi_rational(prec, 2, 3);
    let w2 = Complex::cis_pi_rational(prec, 4, 3);
    let (a1, d1) = asymptotic(&(&w * &z), ctx);
    let (a2, d2) = asymptotic(&(&w2 * &z), ctx);
    let ai = -(&(&w * &a1) + &(&w2 * &a2));
    let aip = -(&(&w2 * &d1) + &(&w * &d2));
    (ai, aip)
}

fn origin_constants(prec: u32) -> (Real, Real) {
    let three = Float::with_val(prec, 3);
    let c1 = three.clone().pow(Float::with_val(prec, -2) / 3u32)
        / Float::with_val(prec, Float::with_val(prec, 2) / 3u32).gamma();
    let c2 = three.pow(Float::with_val(prec, -1) / 3u32)
        / Float::with_val(prec, Float::with_val(prec, 1) / 3u32).gamma();
    (c1, c2)
}

/// Maclaurin series `Ai = c1 f - c2 g`. The terms grow to about
/// `e^{(2/3)|z|^{3/2}}` before decaying while the result may be that small,
/// so the sum carries matching extra digits.
fn maclaurin(z: &Complex, ctx: &PrecisionContext) -> (Complex, Complex) {
    let r = z.abs_f64();
    let extra = (4.0 / 3.0) * r.powf(1.5) / std::f64::consts::LN_10 + 10.0;
    let wctx = ctx.with_extra_digits(extra.ceil() as u32);
    let wp = wctx.bits();
    let z = z.with_prec(wp);
    let z3 = z.powi(3);
    let (c1, c2) = origin_constants(wp);
    let eps = wctx.working_epsilon();

    let mut f = Complex::one(wp);
    let mut g = z.clone();
    let mut fp = Complex::zero(wp);
    let mut gp = Complex::one(wp);
    let mut t = Complex::one(wp);
    let mut s = z.clone();
    let mut tp = Complex::zero(wp);
    let mut sp = Complex::one(wp);
    let mut k: u32 = 1;
    loop {
        t = &(&t * &z3) / ((3 * k - 1) * 3 * k);
        s = &(&s * &z3) / (3 * k * (3 * k + 1));
        tp = if k == 1 {
            z.square() / 2u32
        } else {
            &(&tp * &z3) / ((3 * k - 3) * (3 * k - 1))
        };
        sp = &(&sp * &z3) / (3 * k * (3 * k - 2));
        f += &t;
        g += &s;
        fp += &tp;
        gp += &sp;
        let small = |term: &Complex, total: &Complex| {
            term.abs() <= Float::with_val(wp, total.abs() * &eps) || term.is_zero()
        };
        if 3.0 * k as f64 > r && small(&t, &f) && small(&s, &g) && small(&tp, &fp) && small(&sp, &gp) {
            break;
        }
        k += 1;
    }
    let ai = &f.scale(&c1) - &g.scale(&c2);
    let aip = &fp.scale(&c1) - &gp.scale(&c2);
    (ai, aip)
}

/// Asymptotic expansions for `|arg z| <= 2 pi / 3`, summed to the smallest term.
fn asymptotic(z: &Complex, ctx: &PrecisionContext) -> (Complex, Complex) {
    let prec = ctx.bits();
    let wp = prec + 32;
    let z = z.with_prec(wp);
    let eps = ctx.working_epsilon();
    let sqrt_z = z.sqrt();
    let zeta = (&(&z * &sqrt_z) * 2u32) / 3u32;
    let zeta_inv = zeta.recip();
    let quarter = z.sqrt().sqrt();
    let two_sqrt_pi = Float::with_val(wp, Constant::Pi).sqrt() * 2u32;
    let e = (-&zeta).exp();

    let mut u = Float::with_val(wp, 1);
    let mut sum_u = Complex::one(wp);
    let mut sum_v = Complex::one(wp);
    let mut pw = Complex::one(wp);
    let mut last = f64::INFINITY;
    let mut k: u32 = 1;
    loop {
        let kk = k as f64;
        u = u * ((6 * k - 5) as f64) * ((6 * k - 3) as f64) * ((6 * k - 1) as f64)
            / ((2 * k - 1) as f64 * 216.0 * kk);
        let v = -Float::with_val(wp, &u * (6 * k + 1)) / (6 * k - 1);
        pw = -(&pw * &zeta_inv);
        let tu = pw.scale(&u);
        let tv = pw.scale(&v);
        let size = tu.abs_f64().max(tv.abs_f64());
        if size > last {
            break;
        }
        sum_u += &tu;
        sum_v += &tv;
        last = size;
        if size < eps.to_f64() * 1e-3 || k > 4000 {
            break;
        }
        k += 1;
    }
    let base = &e / &Complex::from_real(two_sqrt_pi);
    let ai = &(&base / &quarter) * &sum_u;
    let aip = -(&(&base * &quarter) * &sum_v);
    (ai.with_prec(prec), aip.with_prec(prec))
}

/// Compares the series and the asymptotic representation on the switchover
/// circle and returns the largest relative disagreement.
pub fn verify_airy_switchover(ctx: &PrecisionContext) -> Result<f64> {
    let rho = airy_switchover_radius(ctx);
    let prec = ctx.bits();
    let mut worst: f64 = 0.0;
    for j in -4..=4 {
        let theta = Float::with_val(prec, Constant::Pi) * (j as f64 / 6.0);
        let z = Complex::from_polar(&Float::with_val(prec, rho), &theta);
        let (a, ap) = maclaurin(&z, ctx);
        let (b, bp) = asymptotic(&z, ctx);
        let ra = (&a - &b).abs_f64() / b.abs_f64();
        let rp = (&ap - &bp).abs_f64() / bp.abs_f64();
        worst = worst.max(ra).max(rp);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let ctx = PrecisionContext::standard();
        let (a, ap) = airy_pair(&ctx.zero(), &ctx);
        assert!((a.re.to_f64() - 0.355_028_053_887_817_2).abs() < 1e-16);
        assert!((ap.re.to_f64() + 0.258_819_403_792_806_8).abs() < 1e-16);
    }

    #[test]
    fn representations_agree_on_switchover_circle() {
        let ctx = PrecisionContext::standard();
        let worst = verify_airy_switchover(&ctx).unwrap();
        assert!(worst < 1e-36, "worst {worst:e}");
    }
}
