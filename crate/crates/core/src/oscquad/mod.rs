//! `int_a^b f(x) e^{i omega x^r} dx` with `a < 0 < b`, split along steepest
//! descent paths into two endpoint integrals, each a Gauss–Laguerre sum, and
//! the integral through the stationary point, a Gaussian sum with the
//! complex rule for `e^{i z^r}`.

mod amplitude;
mod laguerre;
mod oracle;

pub use amplitude::Amplitude;
pub use laguerre::laguerre_rule;
pub use oracle::{convergence_order, real_interval_oracle, stationary_oracle, OrderFit};

use rug::ops::Pow;
use rug::Float;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::opq::{construct, QuadratureRule, Regime, WeightSpec};
use crate::precision::{format_real, Complex, PrecisionContext, Real};

#[derive(Debug, Clone)]
pub struct OscillatoryIntegralSpec {
    pub a: Real,
    pub b: Real,
    pub omega: Real,
    pub r: u32,
    pub amplitude: Amplitude,
    pub ctx: PrecisionContext,
}

impl OscillatoryIntegralSpec {
    pub fn new(a: f64, b: f64, omega: f64, r: u32, amplitude: Amplitude, ctx: PrecisionContext) -> Result<Self> {
        Self::from_reals(ctx.real(a), ctx.real(b), ctx.real(omega), r, amplitude, ctx)
    }

    /// Endpoints and frequency given as decimal strings, read at the
    /// working precision.
    pub fn parse(a: &str, b: &str, omega: &str, r: u32, amplitude: Amplitude, ctx: PrecisionContext) -> Result<Self> {
        Self::from_reals(ctx.parse(a)?, ctx.parse(b)?, ctx.parse(omega)?, r, amplitude, ctx)
    }

    pub fn from_reals(a: Real, b: Real, omega: Real, r: u32, amplitude: Amplitude, ctx: PrecisionContext) -> Result<Self> {
        let spec = OscillatoryIntegralSpec {
            a,
            b,
            omega,
            r,
            amplitude,
            ctx,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_sign_negative() && !self.a.is_zero()) || !(self.b.is_sign_positive() && !self.b.is_zero()) {
            return Err(Error::InvalidInput(format!(
                "need a < 0 < b, got [{}, {}]",
                self.a.to_f64(),
                self.b.to_f64()
            )));
        }
        if !(self.omega.is_sign_positive() && !self.omega.is_zero()) {
            return Err(Error::InvalidInput("omega must be positive".into()));
        }
        if self.r < 2 {
            return Err(Error::InvalidInput(format!("r must be at least 2, got {}", self.r)));
        }
        Ok(())
    }

    pub fn with_omega(&self, omega: f64) -> Self {
        OscillatoryIntegralSpec {
            omega: self.ctx.real(omega),
            ..self.clone()
        }
    }

    /// Distance from `z` to the real interval `[a, b]`.
    fn distance_to_interval(&self, z: &Complex) -> f64 {
        let (x, y) = z.to_f64();
        let dx = (self.a.to_f64() - x).max(0.0).max(x - self.b.to_f64());
        dx.hypot(y)
    }

    fn check_budget(&self, z: &Complex) -> Result<()> {
        let radius = self.amplitude.radius();
        if radius.is_finite() && self.distance_to_interval(z) > radius {
            return Err(Error::AnalyticityBudget {
                point: format!("{z}"),
                radius,
            });
        }
        Ok(())
    }

    /// Point at parameter `t` of the descent path from endpoint `c`, on
    /// which `e^{i omega x^r} = e^{i omega c^r} e^{-t}`.
    fn path_point(&self, c: &Real, t: &Real) -> Complex {
        let prec = self.ctx.bits();
        let cr = Float::with_val(prec, c.pow(self.r));
        let it = Complex::new(Float::new(prec), Float::with_val(prec, t / &self.omega));
        let root = |w: Complex| w.powf(&(Float::with_val(prec, 1) / self.r));
        if c.is_sign_positive() {
            root(&Complex::from_real(cr) + &it)
        } else if self.r % 2 == 1 {
            // a^r < 0: x = -(|a|^r - i t/omega)^{1/r}
            -root(&Complex::from_real(-cr) - &it)
        } else {
            -root(&Complex::from_real(cr) + &it)
        }
    }

    /// `int` from `c` to infinity along the descent path, by the Laguerre
    /// rule in `t`: `e^{i omega c^r} sum_j w_j f(x(t_j)) x'(t_j)` with
    /// `x' = i / (omega r x^{r-1})`.
    fn endpoint(&self, c: &Real, rule: &QuadratureRule) -> Result<Complex> {
        let ctx = &self.ctx;
        let prec = ctx.bits();
        // the path is truncated where the weight drops below 10^-digits
        let t_max = ctx.decimal_digits() as f64 * std::f64::consts::LN_10;
        for k in 0..=64 {
            let z = self.path_point(c, &ctx.real(t_max * k as f64 / 64.0));
            self.check_budget(&z)?;
        }
        let mut sum = Complex::zero(prec);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let x = self.path_point(c, &Float::with_val(prec, &t.re));
            let dx = Complex::i(prec) / &(&x.powi(self.r as i32 - 1) * &Complex::from_real(Float::with_val(prec, &self.omega * self.r)));
            sum += &(&w.with_prec(prec) * &self.amplitude.eval_in(&x, ctx)) * &dx;
        }
        let phase = Complex::new(Float::new(prec), Float::with_val(prec, c.pow(self.r)) * &self.omega).exp();
        Ok(&phase * &sum)
    }

    /// The stationary-point contribution from `rule`, already scaled to this
    /// frequency.
    fn stationary(&self, rule: &QuadratureRule) -> Result<Complex> {
        let ctx = &self.ctx;
        let prec = ctx.bits();
        // nodes and the truncated stationary contour must sit in the budget
        let reach = (ctx.decimal_digits() as f64 * std::f64::consts::LN_10 / self.omega.to_f64()).powf(1.0 / self.r as f64);
        let spec = WeightSpec::new(self.r)?;
        for ray in [spec.ray_high_turns(), spec.ray_low_turns()] {
            let dir = Complex::cis_pi_rational(prec, ray.0, ray.1);
            self.check_budget(&dir.scale(&ctx.real(reach)))?;
        }
        let mut sum = Complex::zero(prec);
        for (z, w) in rule.nodes.iter().zip(&rule.weights) {
            let z = z.with_prec(prec);
            self.check_budget(&z)?;
            sum += &w.with_prec(prec) * &self.amplitude.eval_in(&z, ctx);
        }
        Ok(sum)
    }
}

/// `n`-point rule for `int_Gamma h(z) e^{i omega z^r} dz`: the unit-frequency
/// rule with nodes and weights multiplied by `omega^{-1/r}`.
pub fn stationary_rule(n: usize, r: u32, omega: &Real) -> Result<QuadratureRule> {
    let c = construct(WeightSpec::new(r)?, n, None)?;
    let prec = c.ctx.bits();
    let e = Float::with_val(prec, 1) / r;
    let scale = Float::with_val(prec, Float::with_val(prec, omega.ln_ref()) * e).exp();
    let inv = Float::with_val(prec, 1) / &scale;
    let rule = c.rule;
    Ok(QuadratureRule {
        nodes: rule.nodes.iter().map(|z| z.scale(&inv)).collect(),
        weights: rule.weights.iter().map(|w| w.scale(&inv)).collect(),
        regime: Regime::Stationary { r },
        scale,
        ctx: c.ctx,
    })
}

/// The value of the integral and its three contributions.
#[derive(Debug, Clone)]
pub struct OscResult {
    pub value: Complex,
    /// From `a` out along its descent path.
    pub endpoint_a: Complex,
    /// From infinity back to `b`, hence with the sign of that orientation.
    pub endpoint_b: Complex,
    pub stationary: Complex,
    pub n_endpoint: usize,
    pub n_stationary: usize,
}

impl OscResult {
    /// `{value_re, value_im, contributions: {endpoint_a, endpoint_b,
    /// stationary}, n_endpoint, n_stationary}`.
    pub fn to_json(&self, digits: u32) -> Value {
        let c = |z: &Complex| json!({ "re": format_real(&z.re, digits), "im": format_real(&z.im, digits) });
        json!({
            "value_re": format_real(&self.value.re, digits),
            "value_im": format_real(&self.value.im, digits),
            "contributions": {
                "endpoint_a": c(&self.endpoint_a),
                "endpoint_b": c(&self.endpoint_b),
                "stationary": c(&self.stationary),
            },
            "n_endpoint": self.n_endpoint,
            "n_stationary": self.n_stationary,
        })
    }
}

pub fn evaluate(spec: &OscillatoryIntegralSpec, n_endpoint: usize, n_stationary: usize) -> Result<OscResult> {
    spec.validate()?;
    let lag = laguerre_rule(n_endpoint, &spec.ctx)?;
    let st = stationary_rule(n_stationary, spec.r, &spec.omega)?;
    let endpoint_a = spec.endpoint(&spec.a, &lag)?;
    let endpoint_b = -spec.endpoint(&spec.b, &lag)?;
    let stationary = spec.stationary(&st)?;
    let value = &(&endpoint_a + &endpoint_b) + &stationary;
    Ok(OscResult {
        value,
        endpoint_a,
        endpoint_b,
        stationary,
        n_endpoint,
        n_stationary,
    })
}
