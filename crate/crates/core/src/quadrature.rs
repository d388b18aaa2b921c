//! Gauss–Legendre rules at arbitrary precision and an adaptive composite
//! integrator built on them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{Complex, Real};

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct LegendreRule {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

type Cache = Mutex<HashMap<(usize, u32), Arc<LegendreRule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `m`-point Gauss–Legendre rule with `prec`-bit nodes, memoized.
pub fn gauss_legendre(m: usize, prec: u32) -> Arc<LegendreRule> {
    if let Some(rule) = cache().lock().unwrap().get(&(m, prec)) {
        return rule.clone();
    }
    let rule = Arc::new(compute_legendre(m, prec));
    cache().lock().unwrap().insert((m, prec), rule.clone());
    rule
}

fn compute_legendre(m: usize, prec: u32) -> LegendreRule {
    let wp = prec + 32;
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32)));
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let guess = ((i as f64 + 0.75) / (m as f64 + 0.5)) * std::f64::consts::PI;
        let mut x = Float::with_val(wp, guess.cos());
        let mut dp = Float::new(wp);
        for _ in 0..100 {
            let (p, d) = legendre(m, &x);
            let step = Float::with_val(wp, &p / &d);
            x -= &step;
            dp = d;
            if step.abs() < tol {
                break;
            }
        }
        let (_, d) = legendre(m, &x);
        if d.is_finite() {
            dp = d;
        }
        let one_minus = Float::with_val(wp, 1) - Float::with_val(wp, x.square_ref());
        let w = Float::with_val(wp, 2) / (one_minus * dp.square());
        nodes.push(Float::with_val(prec, x));
        weights.push(Float::with_val(prec, w));
    }
    LegendreRule { nodes, weights }
}

/// `(P_m(x), P_m'(x))`.
fn legendre(m: usize, x: &Real) -> (Real, Real) {
    let wp = x.prec();
    let mut p0 = Float::with_val(wp, 1);
    let mut p1 = x.clone();
    for k in 2..=m {
        let kf = k as u32;
        let p2 = (Float::with_val(wp, x * &p1) * (2 * kf - 1) - Float::with_val(wp, &p0 * (kf - 1))) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (Float::with_val(wp, 1), Float::new(wp));
    }
    let denom = Float::with_val(wp, x.square_ref()) - 1u32;
    let d = (Float::with_val(wp, x * &p1) - &p0) * m as u32 / denom;
    (p1, d)
}

/// Fixed composite rule: `panels` equal panels of an `m`-point rule on `[a, b]`.
pub fn composite<F>(f: &F, a: &Real, b: &Real, m: usize, panels: usize) -> Result<Complex>
where
    F: Fn(&Real) -> Result<Complex>,
{
    let prec = a.prec();
    let rule = gauss_legendre(m, prec);
    let width = Float::with_val(prec, b - a) / panels as u32;
    let mut total = Complex::zero(prec);
    for p in 0..panels {
        let lo = Float::with_val(prec, a + Float::with_val(prec, &width * p as u32));
        let hi = Float::with_val(prec, &lo + &width);
        total += panel(f, &lo, &hi, &rule)?;
    }
    Ok(total)
}

fn panel<F>(f: &F, a: &Real, b: &Real, rule: &LegendreRule) -> Result<Complex>
where
    F: Fn(&Real) -> Result<Complex>,
{
    let prec = a.prec();
    let half = Float::with_val(prec, b - a) / 2u32;
    let mid = Float::with_val(prec, b + a) / 2u32;
    let mut sum = Complex::zero(prec);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let t = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
        let v = f(&t)?;
        sum += v.scale(w);
    }
    Ok(sum.scale(&half))
}

/// Adaptive bisection with an `m`-point rule per panel. A panel is accepted
/// when its estimate and the sum over its two halves differ by less than
/// `abs_tol` scaled by the panel's share of the interval.
pub fn adaptive<F>(f: &F, a: &Real, b: &Real, m: usize, abs_tol: &Real, max_depth: u32) -> Result<Complex>
where
    F: Fn(&Real) -> Result<Complex>,
{
    let prec = a.prec();
    let rule = gauss_legendre(m, prec);
    let whole = panel(f, a, b, &rule)?;
    let length = Float::with_val(prec, b - a);
    recurse(f, a, b, whole, &rule, abs_tol, &length, 0, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: &Real,
    b: &Real,
    whole: Complex,
    rule: &LegendreRule,
    tol: &Real,
    length: &Real,
    depth: u32,
    max_depth: u32,
) -> Result<Complex>
where
    F: Fn(&Real) -> Result<Complex>,
{
    let prec = a.prec();
    let mid = Float::with_val(prec, a + b) / 2u32;
    let left = panel(f, a, &mid, rule)?;
    let right = panel(f, &mid, b, rule)?;
    let split = &left + &right;
    let share = Float::with_val(prec, b - a) / length;
    let local_tol = Float::with_val(prec, tol * &share);
    if (&split - &whole).abs() <= local_tol {
        return Ok(split);
    }
    if depth >= max_depth {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            iterations: depth as usize,
        });
    }
    let l = recurse(f, a, &mid, left, rule, tol, length, depth + 1, max_depth)?;
    let r = recurse(f, &mid, b, right, rule, tol, length, depth + 1, max_depth)?;
    Ok(&l + &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let prec = 200;
        let rule = gauss_legendre(8, prec);
        let total: f64 = rule.weights.iter().map(|w| w.to_f64()).sum();
        assert!((total - 2.0).abs() < 1e-15);
        // x^14 is the highest degree integrated exactly
        let mut s = Float::new(prec);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            s += Float::with_val(prec, x.clone().pow(14u32)) * w;
        }
        let want = Float::with_val(prec, 2) / 15u32;
        assert!(Float::with_val(prec, &s - &want).abs().to_f64() < 1e-55);
    }

    #[test]
    fn adaptive_exponential() {
        let prec = 200;
        let a = Float::with_val(prec, 0);
        let b = Float::with_val(prec, 3);
        let tol = Float::with_val(prec, Float::i_exp(1, -180));
        let f = |t: &Real| Ok(Complex::from_real(Float::with_val(prec, t.exp_ref())));
        let v = adaptive(&f, &a, &b, 20, &tol, 30).unwrap();
        let want = Float::with_val(prec, 3).exp() - 1u32;
        assert!(Float::with_val(prec, &v.re - &want).abs().to_f64() < 1e-50);
    }
}
