use rug::Float;

use super::{MomentSequence, WeightSpec};
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::precision::{Complex, PrecisionContext, Real};

/// Three-term recurrence
/// `pi_{k+1}(z) = (z - alpha_k) pi_k(z) - beta_{k-1} pi_{k-1}(z)`
/// for the monic orthogonal polynomials up to degree `n`.
#[derive(Debug, Clone)]
pub struct RecurrenceCoefficients {
    pub alpha: Vec<Complex>,
    pub beta: Vec<Complex>,
    /// `M_0`, the zeroth moment; `h_k = M_0 beta_0 ... beta_{k-1}`.
    pub mu0: Complex,
    spec: WeightSpec,
    ctx: PrecisionContext,
}

/// Chebyshev's algorithm on the raw moments `M_0 .. M_{2n-1}`.
///
/// `sigma_{k,l} = <pi_k, z^l>`; a vanishing `sigma_{k,k}` means `pi_{k+1}`
/// does not exist and is reported as degenerate.
pub fn build_recurrence(moments: &MomentSequence, n: usize) -> Result<RecurrenceCoefficients> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    if moments.len() < 2 * n {
        return Err(Error::InvalidInput(format!(
            "degree {n} needs moments through index {}, have {}",
            2 * n - 1,
            moments.len() - 1
        )));
    }
    let ctx = *moments.ctx();
    let prec = ctx.bits();
    let noise = Float::with_val(prec, ctx.working_epsilon() * 1000u32);
    let m = moments.values();
    if m[0].is_zero() {
        return Err(Error::DegenerateFunctional { index: 0 });
    }
    let width = 2 * n;
    let mut prev2: Vec<Complex> = vec![Complex::zero(prec); width];
    let mut prev: Vec<Complex> = m[..width].to_vec();
    let mut alpha = vec![&m[1] / &m[0]];
    let mut beta_g = vec![m[0].clone()];
    for k in 1..n {
        let mut cur = vec![Complex::zero(prec); width];
        for l in k..(2 * n - k) {
            let a = &alpha[k - 1] * &prev[l];
            let b = &beta_g[k - 1] * &prev2[l];
            let v = &(&prev[l + 1] - &a) - &b;
            if l == k {
                let scale = prev[l + 1].abs_f64().max(a.abs_f64()).max(b.abs_f64());
                if v.abs() <= Float::with_val(prec, &noise * scale) {
                    return Err(Error::DegenerateFunctional { index: k + 1 });
                }
            }
            cur[l] = v;
        }
        alpha.push(&(&cur[k + 1] / &cur[k]) - &(&prev[k] / &prev[k - 1]));
        beta_g.push(&cur[k] / &prev[k - 1]);
        prev2 = prev;
        prev = cur;
    }
    let mu0 = beta_g.remove(0);
    for a in alpha.iter().chain(&beta_g) {
        if !a.is_finite() {
            return Err(Error::NonFinite("build_recurrence"));
        }
    }
    Ok(RecurrenceCoefficients {
        alpha,
        beta: beta_g,
        mu0,
        spec: *moments.spec(),
        ctx,
    })
}

impl RecurrenceCoefficients {
    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Monic `pi_n(z)` with `n = degree()`.
    pub fn pi_eval(&self, z: &Complex) -> Complex {
        self.pi_eval_degree(self.degree(), z)
    }

    /// Monic `pi_k(z)` for any `k <= degree()`.
    pub fn pi_eval_degree(&self, k: usize, z: &Complex) -> Complex {
        let prec = z.prec().max(self.ctx.bits());
        let z = z.with_prec(prec);
        let mut p0 = Complex::zero(prec);
        let mut p1 = Complex::one(prec);
        for j in 0..k {
            let mut p2 = &(&z - &self.alpha[j]) * &p1;
            if j > 0 {
                p2 -= &(&self.beta[j - 1] * &p0);
            }
            p0 = p1;
            p1 = p2;
        }
        p1
    }

    /// `(pi_n(z), pi_n'(z), bound)` where `bound` is the same recurrence run
    /// on absolute values, a scale for the rounding error of the evaluation.
    pub fn pi_eval_with_derivative(&self, z: &Complex) -> (Complex, Complex, Real) {
        let prec = z.prec().max(self.ctx.bits());
        let z = z.with_prec(prec);
        let az = z.abs();
        let mut p0 = Complex::zero(prec);
        let mut p1 = Complex::one(prec);
        let mut d0 = Complex::zero(prec);
        let mut d1 = Complex::zero(prec);
        let mut b0 = Float::new(prec);
        let mut b1 = Float::with_val(prec, 1);
        for j in 0..self.degree() {
            let shift = &z - &self.alpha[j];
            let mut p2 = &shift * &p1;
            let mut d2 = &(&shift * &d1) + &p1;
            let mut b2 = Float::with_val(prec, &az + self.alpha[j].abs()) * &b1;
            if j > 0 {
                p2 -= &(&self.beta[j - 1] * &p0);
                d2 -= &(&self.beta[j - 1] * &d0);
                b2 += self.beta[j - 1].abs() * &b0;
            }
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
            b0 = b1;
            b1 = b2;
        }
        (p1, d1, b1)
    }

    /// Monic coefficients `c_0, ..., c_n` (ascending) of `pi_n`.
    pub fn coefficients(&self) -> Vec<Complex> {
        let prec = self.ctx.bits();
        let mut p0: Vec<Complex> = vec![];
        let mut p1: Vec<Complex> = vec![Complex::one(prec)];
        for j in 0..self.degree() {
            let mut p2 = vec![Complex::zero(prec); p1.len() + 1];
            for (i, c) in p1.iter().enumerate() {
                p2[i + 1] += c;
                p2[i] -= &(&self.alpha[j] * c);
            }
            if j > 0 {
                for (i, c) in p0.iter().enumerate() {
                    p2[i] -= &(&self.beta[j - 1] * c);
                }
            }
            p0 = p1;
            p1 = p2;
        }
        p1
    }

    /// `h_k = <pi_k, pi_k> = M_0 beta_0 ... beta_{k-1}`.
    pub fn norm(&self, k: usize) -> Complex {
        let mut h = self.mu0.clone();
        for b in &self.beta[..k] {
            h = &h * b;
        }
        h
    }

    /// Coefficients of `lambda^{-n} pi_n(lambda z)`: `alpha / lambda`,
    /// `beta / lambda^2`.
    pub fn rescaled(&self, lambda: &Real) -> RecurrenceCoefficients {
        let l2 = Float::with_val(self.ctx.bits(), lambda.square_ref());
        RecurrenceCoefficients {
            alpha: self.alpha.iter().map(|a| a / lambda).collect(),
            beta: self.beta.iter().map(|b| b / &l2).collect(),
            mu0: self.mu0.clone(),
            spec: self.spec,
            ctx: self.ctx,
        }
    }

    /// The same recurrence truncated to degree `k`.
    pub fn truncated(&self, k: usize) -> RecurrenceCoefficients {
        RecurrenceCoefficients {
            alpha: self.alpha[..k].to_vec(),
            beta: self.beta[..k.saturating_sub(1)].to_vec(),
            mu0: self.mu0.clone(),
            spec: self.spec,
            ctx: self.ctx,
        }
    }
}

/// Monic coefficients of `pi_n` from the Hankel system
/// `sum_j c_j M_{i+j} = -M_{i+n}`, `i = 0..n-1`. Only sensible for small `n`;
/// it serves as an independent check of the recurrence.
pub fn hankel_coefficients(moments: &MomentSequence, n: usize) -> Result<Vec<Complex>> {
    let m = moments.values();
    if m.len() < 2 * n {
        return Err(Error::InvalidInput("not enough moments for the Hankel system".into()));
    }
    let prec = moments.ctx().bits();
    let a: Vec<Vec<Complex>> = (0..n).map(|i| (0..n).map(|j| m[i + j].clone()).collect()).collect();
    let b: Vec<Complex> = (0..n).map(|i| -&m[i + n]).collect();
    let lu = Lu::factor(a)?;
    let mut c = lu.solve(&b);
    c.push(Complex::one(prec));
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: usize) -> RecurrenceCoefficients {
        let ctx = PrecisionContext::for_degree(n);
        let spec = WeightSpec::new(3).unwrap();
        let m = MomentSequence::new(spec, 2 * n, &ctx).unwrap();
        build_recurrence(&m, n).unwrap()
    }

    #[test]
    fn first_coefficients_in_closed_form() {
        let rc = setup(2);
        let prec = rc.ctx().bits();
        // alpha_0 = i Gamma(2/3)/Gamma(1/3), beta_0 = (Gamma(2/3)/Gamma(1/3))^2
        let g = |p: u32| Float::with_val(prec, Float::with_val(prec, p) / 3u32).gamma();
        let ratio = g(2) / g(1);
        assert!(rc.alpha[0].re.to_f64().abs() < 1e-50);
        let d = Float::with_val(prec, &rc.alpha[0].im - &ratio);
        assert!(d.to_f64().abs() < 1e-50);
        let d = Float::with_val(prec, &rc.beta[0].re - Float::with_val(prec, ratio.square_ref()));
        assert!(d.to_f64().abs() < 1e-50);
        assert!(rc.beta[0].im.to_f64().abs() < 1e-50);
    }

    #[test]
    fn coefficient_expansion_matches_evaluation() {
        let rc = setup(7);
        let c = rc.coefficients();
        let z = Complex::from_f64(rc.ctx().bits(), 0.4, -1.3);
        let mut horner = Complex::zero(rc.ctx().bits());
        for ci in c.iter().rev() {
            horner = &(&horner * &z) + ci;
        }
        let direct = rc.pi_eval(&z);
        assert!((&horner - &direct).abs_f64() < 1e-40 * direct.abs_f64());
        let (p, _, bound) = rc.pi_eval_with_derivative(&z);
        assert!((&p - &direct).abs_f64() < 1e-50);
        assert!(bound.to_f64() >= direct.abs_f64());
    }

    #[test]
    fn short_moment_table_is_rejected() {
        let ctx = PrecisionContext::standard();
        let m = MomentSequence::new(WeightSpec::new(3).unwrap(), 5, &ctx).unwrap();
        assert!(build_recurrence(&m, 4).is_err());
        assert!(build_recurrence(&m, 3).is_ok());
    }
}
