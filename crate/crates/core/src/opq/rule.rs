use std::io::Write;

use rug::Float;

use super::zeros::relative_residual;
use super::{build_recurrence, zeros, MomentSequence, RecurrenceCoefficients, WeightSpec, ZeroOptions};
use crate::error::{Error, Result};
use crate::linalg::solve_with_condition;
use crate::precision::{format_real, Complex, PrecisionContext, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Complex rule for the stationary point of `e^{i z^r}`.
    Stationary { r: u32 },
    /// Real rule on a half-line for an endpoint contribution.
    Endpoint,
}

/// `sum_j w_j h(z_j)` approximates the integral of `h` against the weight.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex>,
    pub weights: Vec<Complex>,
    pub regime: Regime,
    /// Factor the nodes were divided by relative to the unscaled rule
    /// (`lambda_n` for `P_n`, `omega^{1/r}` for a frequency), 1 otherwise.
    pub scale: Real,
    pub ctx: PrecisionContext,
}

impl QuadratureRule {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn apply<F>(&self, h: F) -> Complex
    where
        F: Fn(&Complex) -> Complex,
    {
        let mut s = Complex::zero(self.ctx.bits());
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            s += w * &h(z);
        }
        s
    }
}

/// Weights from the Vandermonde system `sum_j w_j z_j^k = M_k`, `k < n`.
/// Returns the weights and the number of decimal digits the solve can lose
/// (`log10` of the condition number).
pub fn gauss_weights(nodes: &[Complex], moments: &MomentSequence) -> Result<(Vec<Complex>, f64)> {
    let n = nodes.len();
    if moments.len() < n {
        return Err(Error::InvalidInput("not enough moments for the weight solve".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if nodes[i] == nodes[j] {
                return Err(Error::InvalidInput(format!("nodes {i} and {j} coincide")));
            }
        }
    }
    let ctx = moments.ctx();
    let prec = ctx.bits();
    let mut rows = Vec::with_capacity(n);
    let mut power: Vec<Complex> = vec![Complex::one(prec); n];
    for _ in 0..n {
        rows.push(power.clone());
        power = power.iter().zip(nodes).map(|(p, z)| p * z).collect();
    }
    let (w, lost) = solve_with_condition(rows, &moments.values()[..n])?;
    if lost > ctx.guard_digits() as f64 {
        return Err(Error::IllConditioned {
            lost_digits: lost,
            guard_digits: ctx.guard_digits(),
        });
    }
    Ok((w, lost))
}

/// `max_k |sum_j w_j z_j^k - M_k| / sum_j |w_j| |z_j|^k` over `k <= k_max`.
pub fn exactness_residual(rule: &QuadratureRule, moments: &MomentSequence, k_max: usize) -> f64 {
    let prec = rule.ctx.bits();
    let mut power: Vec<Complex> = vec![Complex::one(prec); rule.n()];
    let mut worst: f64 = 0.0;
    for k in 0..=k_max.min(moments.len() - 1) {
        let mut s = Complex::zero(prec);
        let mut scale = Float::new(prec);
        for (p, w) in power.iter().zip(&rule.weights) {
            let t = w * p;
            scale += t.abs();
            s += &t;
        }
        let err = (&s - moments.get(k)).abs() / scale;
        worst = worst.max(err.to_f64());
        power = power.iter().zip(&rule.nodes).map(|(p, z)| p * z).collect();
    }
    worst
}

/// `lambda_n = (n / r)^{1/r}`.
pub fn lambda_n(n: usize, r: u32, ctx: &PrecisionContext) -> Real {
    let x = ctx.ratio(n as i64, r as i64);
    let e = ctx.ratio(1, r as i64);
    Float::with_val(ctx.bits(), x.ln() * e).exp()
}

/// Zeros of `P_n(z) = lambda_n^{-n} pi_n(lambda_n z)`.
pub fn rescale_nodes(nodes: &[Complex], n: usize, r: u32, ctx: &PrecisionContext) -> Vec<Complex> {
    let l = lambda_n(n, r, ctx);
    nodes.iter().map(|z| z / &l).collect()
}

/// Everything built for one degree: moments, recurrence, the Gaussian rule,
/// and the diagnostics that decided the precision.
#[derive(Debug, Clone)]
pub struct Construction {
    pub ctx: PrecisionContext,
    pub moments: MomentSequence,
    pub recurrence: RecurrenceCoefficients,
    pub rule: QuadratureRule,
    pub lost_digits: f64,
    pub exactness: f64,
    pub zero_residual: f64,
    /// Number of precision levels tried (1 means the schedule was enough).
    pub attempts: u32,
}

/// Builds the degree-`n` rule at the scheduled precision, verifies zero
/// residuals and exactness through degree `2n - 1`, and doubles the working
/// digits on failure, at most twice. Degenerate functionals are not retried.
pub fn construct(spec: WeightSpec, n: usize, base: Option<PrecisionContext>) -> Result<Construction> {
    let mut ctx = base.unwrap_or_else(|| PrecisionContext::for_degree(n));
    let mut last_err = None;
    for attempt in 1..=3 {
        match build_once(spec, n, &ctx) {
            Ok(mut c) => {
                let d = ctx.decimal_digits() as f64;
                let ok_zero = c.zero_residual <= 10f64.powf(-d / 2.0);
                let ok_exact = c.exactness <= 10f64.powf(-d / 3.0);
                if ok_zero && ok_exact {
                    c.attempts = attempt;
                    return Ok(c);
                }
                last_err = Some(Error::Precision(format!(
                    "degree {n} at {} digits: zero residual {:e}, exactness {:e}",
                    ctx.decimal_digits(),
                    c.zero_residual,
                    c.exactness
                )));
            }
            Err(e @ Error::DegenerateFunctional { .. }) => return Err(e),
            Err(e) => last_err = Some(e),
        }
        ctx = ctx.doubled();
    }
    Err(last_err.unwrap())
}

fn build_once(spec: WeightSpec, n: usize, ctx: &PrecisionContext) -> Result<Construction> {
    let moments = MomentSequence::new(spec, 2 * n, ctx)?;
    let recurrence = build_recurrence(&moments, n)?;
    let nodes = zeros(&recurrence, ZeroOptions::default())?;
    let zero_residual = relative_residual(&recurrence, &nodes).to_f64();
    let (weights, lost_digits) = gauss_weights(&nodes, &moments)?;
    let rule = QuadratureRule {
        nodes,
        weights,
        regime: Regime::Stationary { r: spec.r() },
        scale: ctx.real(1.0),
        ctx: *ctx,
    };
    let exactness = exactness_residual(&rule, &moments, 2 * n - 1);
    Ok(Construction {
        ctx: *ctx,
        moments,
        recurrence,
        rule,
        lost_digits,
        exactness,
        zero_residual,
        attempts: 1,
    })
}

/// CSV with columns `index,node_re,node_im,weight_re,weight_im`, values as
/// decimal strings at the reported precision.
pub fn write_rule_csv<W: Write>(rule: &QuadratureRule, mut out: W) -> Result<()> {
    let d = rule.ctx.decimal_digits();
    writeln!(out, "index,node_re,node_im,weight_re,weight_im")?;
    for (i, (z, w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            format_real(&z.re, d),
            format_real(&z.im, d),
            format_real(&w.re, d),
            format_real(&w.im, d)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_rule() {
        let c = construct(WeightSpec::new(3).unwrap(), 1, None).unwrap();
        assert!((&c.rule.nodes[0] - &c.recurrence.alpha[0]).abs_f64() < 1e-50);
        assert!(c.rule.nodes[0].re.to_f64().abs() < 1e-50);
        assert!((&c.rule.weights[0] - c.moments.get(0)).abs_f64() < 1e-50);
    }

    #[test]
    fn lambda_closed_form() {
        let ctx = PrecisionContext::standard();
        let l = lambda_n(10, 3, &ctx).to_f64();
        assert!((l - (10.0f64 / 3.0).cbrt()).abs() < 1e-15);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let c = construct(WeightSpec::new(3).unwrap(), 3, None).unwrap();
        let mut buf = Vec::new();
        write_rule_csv(&c.rule, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("index,node_re,node_im,weight_re,weight_im\n0,"));
    }
}
