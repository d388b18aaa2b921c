use rug::ops::Pow;
use rug::Float;

use super::{stationary_rule, OscillatoryIntegralSpec};
use crate::error::{Error, Result};
use crate::opq::{ray_integral, WeightSpec};
use crate::precision::{Complex, Real};
use crate::quadrature::{adaptive, composite};

/// `int_a^b f(x) e^{i omega x^r} dx` on the real interval at four times the
/// working digits: equal panels of about a quarter oscillation each, every
/// panel refined adaptively until halving changes it by less than
/// `10^{-(digits + 10)}` of `int |f|`.
pub fn real_interval_oracle(spec: &OscillatoryIntegralSpec) -> Result<Complex> {
    let ctx = spec.ctx.scaled(4);
    let prec = ctx.bits();
    let a = Float::with_val(prec, &spec.a);
    let b = Float::with_val(prec, &spec.b);
    let omega = Float::with_val(prec, &spec.omega);
    let r = spec.r;
    let f = |x: &Real| -> Result<Complex> {
        let z = Complex::from_real(x.clone());
        let phase = Float::with_val(prec, x.pow(r)) * &omega;
        let e = Complex::new(Float::with_val(prec, phase.cos_ref()), Float::with_val(prec, phase.sin_ref()));
        Ok(&spec.amplitude.eval(&z) * &e)
    };
    let abs_f = |x: &Real| -> Result<Complex> { Ok(Complex::from_real(spec.amplitude.eval(&Complex::from_real(x.clone())).abs())) };
    let size = composite(&abs_f, &a, &b, 20, 8)?.re;
    let tol = Float::with_val(prec, &size * ctx.pow10(-(spec.ctx.decimal_digits() as i32 + 10)));
    // total variation of the phase omega x^r over [a, b]
    let sweep = spec.omega.to_f64() * (spec.a.to_f64().abs().powi(r as i32) + spec.b.to_f64().powi(r as i32));
    let panels = ((sweep / (std::f64::consts::PI / 2.0)).ceil() as usize).clamp(1, 1 << 16);
    let width = Float::with_val(prec, &b - &a) / panels as u32;
    let mut total = Complex::zero(prec);
    for p in 0..panels {
        let lo = Float::with_val(prec, &a + Float::with_val(prec, &width * p as u32));
        let hi = if p + 1 == panels { b.clone() } else { Float::with_val(prec, &lo + &width) };
        let share = Float::with_val(prec, &tol / panels as u32);
        total += adaptive(&f, &lo, &hi, 20, &share, 30)?;
    }
    Ok(total)
}

/// `int_Gamma f(z) e^{i omega z^r} dz` through the stationary point, by
/// adaptive quadrature along the two rays at twice the working digits,
/// after `z = omega^{-1/r} u`. Returns the value and `int |...| |dz|`.
pub fn stationary_oracle(spec: &OscillatoryIntegralSpec) -> Result<(Complex, Real)> {
    let ctx = spec.ctx.scaled(2);
    let prec = ctx.bits();
    let e = Float::with_val(prec, -1) / spec.r;
    let s = Float::with_val(prec, Float::with_val(prec, spec.omega.ln_ref()) * e).exp();
    let h = |u: &Complex| spec.amplitude.eval(&u.scale(&s)).scale(&s);
    ray_integral(&WeightSpec::new(spec.r)?, &ctx, &h, spec.ctx.decimal_digits() + 10)
}

/// Least-squares slope of `log |error|` against `log omega` for the
/// stationary-point contribution alone.
#[derive(Debug, Clone)]
pub struct OrderFit {
    pub n: usize,
    pub r: u32,
    pub slope: f64,
    /// `-(2n + 1) / r`.
    pub expected: f64,
    /// `(omega, |error|)` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
    /// Frequencies whose error fell below the oracle noise floor.
    pub excluded: Vec<f64>,
}

impl OrderFit {
    pub fn relative_deviation(&self) -> f64 {
        ((self.slope - self.expected) / self.expected).abs()
    }
}

pub fn convergence_order(template: &OscillatoryIntegralSpec, n: usize, omegas: &[f64]) -> Result<OrderFit> {
    if omegas.len() < 2 {
        return Err(Error::InvalidInput("need at least two frequencies".into()));
    }
    let floor = 10f64.powi(-(template.ctx.decimal_digits() as i32) + 5);
    let mut samples = Vec::new();
    let mut excluded = Vec::new();
    for &omega in omegas {
        let spec = template.with_omega(omega);
        let rule = stationary_rule(n, spec.r, &spec.omega)?;
        let approx = spec.stationary(&rule)?;
        let (exact, size) = stationary_oracle(&spec)?;
        let err = (&approx - &exact.with_prec(approx.prec())).abs_f64();
        if err <= floor * size.to_f64() {
            excluded.push(omega);
        } else {
            samples.push((omega, err));
        }
    }
    if samples.len() < 2 {
        return Err(Error::NoiseFloor { count: excluded.len() });
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(w, e)| (w.ln(), e.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(OrderFit {
        n,
        r: template.r,
        slope: sxy / sxx,
        expected: -((2 * n + 1) as f64) / template.r as f64,
        samples,
        excluded,
    })
}
