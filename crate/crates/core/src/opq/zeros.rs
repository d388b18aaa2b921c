use rug::Float;

use super::RecurrenceCoefficients;
use crate::error::{Error, Result};
use crate::precision::{Complex, Real};

#[derive(Debug, Clone, Copy)]
pub struct ZeroOptions {
    pub max_iterations: usize,
    /// Average mirror pairs after convergence.
    pub symmetrize: bool,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions {
            max_iterations: 500,
            symmetrize: true,
        }
    }
}

/// Zeros of `pi_n` by Aberth–Ehrlich iteration.
///
/// The starting points sit on the circle of radius `|c_0|^{1/n}` around the
/// coefficient centroid `-c_{n-1}/n`; `pi_n` and its derivative are evaluated
/// by the recurrence, which is far better conditioned than Horner's rule on
/// the monomial coefficients. Roots come back sorted by real part, then
/// imaginary part.
pub fn zeros(rc: &RecurrenceCoefficients, opts: ZeroOptions) -> Result<Vec<Complex>> {
    let n = rc.degree();
    let ctx = rc.ctx();
    let prec = ctx.bits();
    if n == 1 {
        return Ok(vec![rc.alpha[0].clone()]);
    }
    let coeffs = rc.coefficients();
    let center = &(-&coeffs[n - 1]) / n as u32;
    let c0 = coeffs[0].abs_f64();
    let radius = if c0 > 0.0 { c0.powf(1.0 / n as f64).max(1e-3) } else { 1.0 };
    let radius = Float::with_val(prec, radius);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = Float::with_val(
                prec,
                2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4,
            );
            &center + &Complex::from_polar(&radius, &theta)
        })
        .collect();

    let tol = Float::with_val(prec, ctx.working_epsilon() * 100u32);
    let mut converged = vec![false; n];
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        iterations += 1;
        let mut done = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (p, d, bound) = rc.pi_eval_with_derivative(&z[k]);
            // at the rounding floor of the evaluation further steps are noise
            let floor = Float::with_val(prec, &bound * &tol);
            if p.is_zero() || p.abs() <= floor {
                converged[k] = true;
                continue;
            }
            let ratio = &p / &d;
            let mut s = Complex::zero(prec);
            for j in 0..n {
                if j != k {
                    s += (&z[k] - &z[j]).recip();
                }
            }
            let denom = &Complex::one(prec) - &(&ratio * &s);
            let w = &ratio / &denom;
            if !w.is_finite() {
                return Err(Error::NonFinite("zeros"));
            }
            let scale = Float::with_val(prec, z[k].abs().max(&Float::with_val(prec, 1)));
            if w.abs() <= Float::with_val(prec, &tol * &scale) {
                converged[k] = true;
            } else {
                done = false;
            }
            z[k] -= &w;
        }
        if done {
            break;
        }
    }
    if converged.iter().any(|c| !c) {
        return Err(Error::NonConvergence {
            what: "Aberth-Ehrlich root iteration",
            iterations,
        });
    }
    if opts.symmetrize {
        symmetrize(rc, &mut z);
    }
    z.sort_by(|a, b| {
        let (ar, ai) = a.to_f64();
        let (br, bi) = b.to_f64();
        ar.partial_cmp(&br).unwrap().then(ai.partial_cmp(&bi).unwrap())
    });
    Ok(z)
}

/// Replaces each root by the average of itself and its partner's mirror
/// image; self-paired roots are projected onto the mirror's fixed set.
fn symmetrize(rc: &RecurrenceCoefficients, z: &mut [Complex]) {
    let spec = rc.spec();
    let n = z.len();
    let images: Vec<Complex> = z.iter().map(|v| spec.mirror(v)).collect();
    let mut partner = vec![usize::MAX; n];
    for k in 0..n {
        if partner[k] != usize::MAX {
            continue;
        }
        let best = (0..n)
            .filter(|&j| partner[j] == usize::MAX)
            .min_by(|&a, &b| {
                let da = z[a].dist_f64(&images[k]);
                let db = z[b].dist_f64(&images[k]);
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        partner[k] = best;
        partner[best] = k;
    }
    let original = z.to_vec();
    for k in 0..n {
        let j = partner[k];
        let avg = &(&original[k] + &spec.mirror(&original[j])) / 2u32;
        z[k] = avg;
    }
}

/// `max_k |pi_n(z_k)| / bound_k` with the running-error scale of the
/// recurrence evaluation.
pub fn relative_residual(rc: &RecurrenceCoefficients, roots: &[Complex]) -> Real {
    let prec = rc.ctx().bits();
    let mut worst = Float::new(prec);
    for z in roots {
        let (p, _, bound) = rc.pi_eval_with_derivative(z);
        let r = p.abs() / bound;
        if r > worst {
            worst = r;
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opq::{build_recurrence, MomentSequence, WeightSpec};
    use crate::precision::PrecisionContext;

    #[test]
    fn quadratic_matches_closed_form() {
        let ctx = PrecisionContext::for_degree(2);
        let spec = WeightSpec::new(3).unwrap();
        let m = MomentSequence::new(spec, 4, &ctx).unwrap();
        let rc = build_recurrence(&m, 2).unwrap();
        let roots = zeros(&rc, ZeroOptions::default()).unwrap();
        // z^2 - (a0 + a1) z + a0 a1 - b0
        let s = &rc.alpha[0] + &rc.alpha[1];
        let p = &(&rc.alpha[0] * &rc.alpha[1]) - &rc.beta[0];
        let disc = (&s.square() - &(&p * 4u32)).sqrt();
        let r1 = &(&s + &disc) / 2u32;
        let r2 = &(&s - &disc) / 2u32;
        for want in [r1, r2] {
            let best = roots.iter().map(|z| z.dist_f64(&want)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-50);
        }
        let img = spec.mirror(&roots[0]);
        assert!(roots.iter().any(|z| z.dist_f64(&img) < 1e-50));
    }

    #[test]
    fn residuals_small_at_moderate_degree() {
        let n = 12;
        let ctx = PrecisionContext::for_degree(n);
        let spec = WeightSpec::new(3).unwrap();
        let m = MomentSequence::new(spec, 2 * n, &ctx).unwrap();
        let rc = build_recurrence(&m, n).unwrap();
        let roots = zeros(&rc, ZeroOptions::default()).unwrap();
        assert_eq!(roots.len(), n);
        assert!(relative_residual(&rc, &roots).to_f64() < 1e-40);
    }
}
