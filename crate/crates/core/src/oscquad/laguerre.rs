use rug::Float;

use crate::error::{Error, Result};
use crate::opq::{QuadratureRule, Regime};
use crate::precision::{Complex, PrecisionContext, Real};

/// `n`-point Gauss–Laguerre rule for `int_0^inf p(t) e^{-t} dt`.
///
/// Nodes come from Newton's method on `L_n`, evaluated by
/// `(k+1) L_{k+1} = (2k+1-t) L_k - k L_{k-1}`, started from the usual
/// asymptotic guesses built on the previous roots; weights are
/// `1 / (t_j L_n'(t_j)^2)`.
pub fn laguerre_rule(n: usize, ctx: &PrecisionContext) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidInput("the Laguerre rule needs at least one node".into()));
    }
    let prec = ctx.bits();
    let tol = Float::with_val(prec, ctx.working_epsilon() * 64u32);
    let mut nodes: Vec<Real> = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let guess = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => nodes[0].to_f64() + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                let prev = nodes[i - 1].to_f64();
                prev + (1.0 + 2.55 * ai) / (1.9 * ai) * (prev - nodes[i - 2].to_f64())
            }
        };
        let mut t = Float::with_val(prec, guess);
        let mut converged = false;
        for _ in 0..200 {
            let (p, d) = laguerre(n, &t);
            let step = Float::with_val(prec, &p / &d);
            t -= &step;
            if Float::with_val(prec, step.abs_ref()) <= Float::with_val(prec, &tol * t.clone().abs().max(&Float::with_val(prec, 1))) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "Laguerre node refinement",
                iterations: 200,
            });
        }
        let (_, d) = laguerre(n, &t);
        let w = Float::with_val(prec, 1) / (Float::with_val(prec, d.square_ref()) * &t);
        weights.push(Complex::from_real(w));
        nodes.push(t);
    }
    Ok(QuadratureRule {
        nodes: nodes.into_iter().map(Complex::from_real).collect(),
        weights,
        regime: Regime::Endpoint,
        scale: ctx.real(1.0),
        ctx: *ctx,
    })
}

/// `(L_n(t), L_n'(t))`, with `t L_n' = n (L_n - L_{n-1})`.
fn laguerre(n: usize, t: &Real) -> (Real, Real) {
    let prec = t.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, 1 - t.clone());
    if n == 1 {
        return (p1, Float::with_val(prec, -1));
    }
    for k in 1..n {
        let kf = k as u32;
        let c = Float::with_val(prec, (2 * kf + 1) - t.clone());
        let p2 = (Float::with_val(prec, &c * &p1) - Float::with_val(prec, &p0 * kf)) / (kf + 1);
        p0 = p1;
        p1 = p2;
    }
    let d = Float::with_val(prec, &p1 - &p0) * n as u32 / t;
    (p1, d)
}
