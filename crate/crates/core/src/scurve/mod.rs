//! The quadratic differential `Q(z) dz^2` of the cubic weight, its critical
//! trajectory `gamma` joining the two simple zeros, the unbounded
//! trajectories `gamma_1`, `gamma_2`, and the equilibrium problem on `gamma`.

mod export;
mod fields;
mod measure;
mod phase;
mod trace;

pub use export::{read_curve_json, write_curve_json};
pub use fields::{sample_field_grid, write_grid_csv, Field, GridSpec, GridValue};
pub use measure::{
    equilibrium_measure, verify_equilibrium, weighted_energy, DiscreteMeasure, EquilibriumReport, MeasureQuadrature,
    MeasureSummary, SPropertySample,
};
pub use phase::PhaseContext;
pub use trace::{
    gamma_diagnostics, trace_extension, trace_gamma, CurveKind, CurvePoint, CurvePolyline, GammaDiagnostics,
    TraceOptions,
};

use std::f64::consts::PI;

use crate::precision::{Complex, PrecisionContext, Real};

/// The two simple zeros of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Z1,
    Z2,
}

/// `Q(z) = -(1/4)(z + i)^2 (z^2 - 2iz - 3) = -z^4/4 + iz + C`, `C = -3/4`.
#[derive(Debug, Clone)]
pub struct QuadDifferential {
    /// Double zero `-i`.
    pub z0: Complex,
    /// `-sqrt 2 + i`.
    pub z1: Complex,
    /// `sqrt 2 + i`.
    pub z2: Complex,
    pub c: Real,
    ctx: PrecisionContext,
}

impl QuadDifferential {
    pub fn new(ctx: &PrecisionContext) -> Self {
        let s2 = ctx.sqrt_int(2);
        QuadDifferential {
            z0: Complex::new(ctx.int(0), ctx.int(-1)),
            z1: Complex::new(-s2.clone(), ctx.int(1)),
            z2: Complex::new(s2, ctx.int(1)),
            c: ctx.ratio(-3, 4),
            ctx: *ctx,
        }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn endpoint(&self, which: Endpoint) -> &Complex {
        match which {
            Endpoint::Z1 => &self.z1,
            Endpoint::Z2 => &self.z2,
        }
    }

    pub fn q_eval(&self, z: &Complex) -> Complex {
        let z4 = z.square().square();
        &(&(-&z4 / 4u32) + &z.mul_i()) + &Complex::from_real(self.c.clone())
    }

    pub fn q_prime(&self, z: &Complex) -> Complex {
        &(-&z.powi(3)) + &Complex::i(z.prec())
    }

    /// `(z - z1)(z - z2) = z^2 - 2iz - 3`.
    pub fn root_product(&self, z: &Complex) -> Complex {
        &(&z.square() - &(z.mul_i() * 2u32)) - 3u32
    }

    /// `-(i/2)(z + i) R` for a chosen square root `R` of [`Self::root_product`].
    pub fn q_from_root(&self, z: &Complex, r: &Complex) -> Complex {
        let zi = z + &Complex::i(z.prec());
        (&zi * r).mul_neg_i() / 2u32
    }

    /// Directions of the three trajectories `Q dz^2 < 0` leaving a simple
    /// zero: `theta_k = theta_0 + 2 k pi / 3`, with `3 theta = pi - arg Q'`
    /// and `theta_0` taken in `(-pi/3, pi/3]`. At `z2` these are the mirror
    /// images `pi - theta_k`, so index 0 is the direction back along `gamma`.
    pub fn critical_angles(&self, which: Endpoint) -> [f64; 3] {
        let (re, im) = self.q_prime(&self.z1).to_f64();
        let base = reduce_third((PI - im.atan2(re)) / 3.0);
        let angles = [base, base + 2.0 * PI / 3.0, base + 4.0 * PI / 3.0];
        match which {
            Endpoint::Z1 => angles,
            Endpoint::Z2 => angles.map(|t| PI - t),
        }
    }

    /// Direction in which the unbounded trajectory `Q dz^2 > 0` leaves the
    /// zero: `gamma_1` at `z1`, `gamma_2` at `z2`.
    pub fn extension_angle(&self, which: Endpoint) -> f64 {
        let (re, im) = self.q_prime(&self.z2).to_f64();
        let psi = reduce_third(-im.atan2(re) / 3.0);
        match which {
            Endpoint::Z2 => psi,
            Endpoint::Z1 => PI - psi,
        }
    }
}

fn reduce_third(t: f64) -> f64 {
    let third = 2.0 * PI / 3.0;
    let mut t = t.rem_euclid(third);
    if t > third / 2.0 {
        t -= third;
    }
    t
}

/// External field `V(z) = -i z^3 / 3`.
pub fn v_eval(z: &Complex) -> Complex {
    z.powi(3).mul_neg_i() / 3u32
}

pub fn v_prime(z: &Complex) -> Complex {
    z.square().mul_neg_i()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd() -> QuadDifferential {
        QuadDifferential::new(&PrecisionContext::standard())
    }

    #[test]
    fn zeros_and_constant() {
        let q = qd();
        for z in [&q.z0, &q.z1, &q.z2] {
            assert!(q.q_eval(z).abs_f64() < 1e-35);
        }
        assert!(q.q_prime(&q.z0).abs_f64() < 1e-35);
        let c = q.q_eval(&q.ctx().zero());
        assert!((c.re.to_f64() + 0.75).abs() < 1e-35 && c.im.to_f64() == 0.0);
        let d = q.q_prime(&q.z1);
        let want = Complex::from_f64(d.prec(), -std::f64::consts::SQRT_2, -4.0);
        assert!((&d - &want).abs_f64() < 1e-15);
    }

    #[test]
    fn factored_form() {
        let q = qd();
        let z = Complex::from_f64(q.ctx().bits(), 0.3, -1.7);
        let r = q.root_product(&z).sqrt();
        let a = q.q_from_root(&z, &r).square();
        assert!((&a - &q.q_eval(&z)).abs_f64() < 1e-35);
    }

    #[test]
    fn angles() {
        let q = qd();
        let a = q.critical_angles(Endpoint::Z1);
        let theta0 = -(2.0 * std::f64::consts::SQRT_2).atan() / 3.0;
        assert!((a[0] - theta0).abs() < 1e-14);
        assert!((a[0] + 0.4103).abs() < 1e-4);
        for k in 0..2 {
            assert!((a[k + 1] - a[k] - 2.0 * PI / 3.0).abs() < 1e-14);
        }
        let b = q.critical_angles(Endpoint::Z2);
        assert!((b[0] - (PI + 0.4103)).abs() < 1e-4);
        assert!((q.extension_angle(Endpoint::Z2) + theta0).abs() < 1e-14);
    }
}
