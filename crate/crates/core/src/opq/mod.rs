//! Moments of `e^{i z^r}` on the steepest-descent contour and the monic
//! polynomials orthogonal with respect to them.

mod recurrence;
mod rule;
mod verify;
mod zeros;

pub use recurrence::{build_recurrence, hankel_coefficients, RecurrenceCoefficients};
pub use rule::{
    construct, exactness_residual, gauss_weights, lambda_n, rescale_nodes, write_rule_csv, Construction,
    QuadratureRule, Regime,
};
pub use verify::{ray_integral, ray_moment, verify_orthogonality};
pub use zeros::{relative_residual, zeros, ZeroOptions};

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{gamma, Complex, PrecisionContext, Real};

/// The weight `e^{i z^r}` and its contour: from infinity along `ray_low`,
/// through the origin, out to infinity along `ray_high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightSpec {
    r: u32,
}

impl WeightSpec {
    pub fn new(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidInput(format!("r must be at least 2, got {r}")));
        }
        Ok(WeightSpec { r })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `ray_high = pi * p / q` as `(p, q)`.
    pub fn ray_high_turns(&self) -> (i64, i64) {
        (1, 2 * self.r as i64)
    }

    /// `ray_low = pi/(2r) + 2 floor(r/2) pi / r` as `(p, q)`.
    pub fn ray_low_turns(&self) -> (i64, i64) {
        let h = (self.r / 2) as i64;
        (1 + 4 * h, 2 * self.r as i64)
    }

    pub fn ray_high(&self, ctx: &PrecisionContext) -> Real {
        let (p, q) = self.ray_high_turns();
        ctx.pi() * p / q
    }

    pub fn ray_low(&self, ctx: &PrecisionContext) -> Real {
        let (p, q) = self.ray_low_turns();
        ctx.pi() * p / q
    }

    /// The reflection that maps the contour, and hence the zero set, to itself:
    /// `z -> -conj(z)` for odd `r` and `z -> -z` for even `r`.
    pub fn mirror(&self, z: &Complex) -> Complex {
        if self.r % 2 == 1 {
            z.reflect()
        } else {
            -z
        }
    }
}

/// `e^{i pi (k+1) (1 + 2h) / (2r)} * 2i sin(-(k+1) pi h / r)`, exact when the
/// angles are multiples of `pi/2`.
fn phase_factor(k: usize, spec: &WeightSpec, prec: u32) -> Complex {
    let r = spec.r as i64;
    let h = (spec.r / 2) as i64;
    let k1 = k as i64 + 1;
    let rot = Complex::cis_pi_rational(prec, k1 * (1 + 2 * h), 2 * r);
    let s = Complex::cis_pi_rational(prec, -k1 * h, r).im;
    rot.scale(&Float::with_val(prec, s * 2u32)).mul_i()
}

/// `M_k`, the integral of `z^k e^{i z^r}` over the contour, in closed form.
pub fn moment(k: usize, spec: &WeightSpec, ctx: &PrecisionContext) -> Result<Complex> {
    let prec = ctx.bits();
    let x = Complex::from_real(ctx.ratio(k as i64 + 1, spec.r as i64));
    let g = gamma(&x, ctx)?;
    let phase = phase_factor(k, spec, prec);
    Ok(&(&phase * &g) / spec.r)
}

/// `M_0, ..., M_{k_max}` computed with a single Gamma evaluation per residue
/// class and the recurrence `Gamma(x + 1) = x Gamma(x)`.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    spec: WeightSpec,
    values: Vec<Complex>,
    ctx: PrecisionContext,
}

impl MomentSequence {
    pub fn new(spec: WeightSpec, k_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let prec = ctx.bits();
        let r = spec.r as usize;
        let mut gammas: Vec<Real> = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let g = if k < r {
                gamma(&Complex::from_real(ctx.ratio(k as i64 + 1, r as i64)), ctx)?.re
            } else {
                // Gamma((k+1)/r) = ((k+1)/r - 1) Gamma((k+1-r)/r)
                let x = ctx.ratio((k + 1 - r) as i64, r as i64);
                Float::with_val(prec, &gammas[k - r] * &x)
            };
            gammas.push(g);
        }
        let values = gammas
            .iter()
            .enumerate()
            .map(|(k, g)| phase_factor(k, &spec, prec).scale(g) / spec.r)
            .collect();
        Ok(MomentSequence {
            spec,
            values,
            ctx: *ctx,
        })
    }

    pub fn spec(&self) -> &WeightSpec {
        &self.spec
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn get(&self, k: usize) -> &Complex {
        &self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rays_for_small_r() {
        let s3 = WeightSpec::new(3).unwrap();
        assert_eq!(s3.ray_low_turns(), (5, 6));
        assert_eq!(s3.ray_high_turns(), (1, 6));
        let s2 = WeightSpec::new(2).unwrap();
        assert_eq!(s2.ray_low_turns(), (5, 4));
        assert!(WeightSpec::new(1).is_err());
    }

    #[test]
    fn sequence_matches_direct_moments() {
        let ctx = PrecisionContext::standard();
        for r in [2, 3, 4] {
            let spec = WeightSpec::new(r).unwrap();
            let seq = MomentSequence::new(spec, 12, &ctx).unwrap();
            for k in 0..=12 {
                let direct = moment(k, &spec, &ctx).unwrap();
                let scale = direct.abs_f64().max(1.0);
                assert!((&direct - seq.get(k)).abs_f64() <= 1e-37 * scale, "r={r} k={k}");
            }
        }
    }
}
