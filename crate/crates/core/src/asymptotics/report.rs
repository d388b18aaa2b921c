use rug::Float;
use serde_json::{json, Value};

use super::{AsymptoticEvaluator, Region};
use crate::error::Result;
use crate::opq::{construct, lambda_n, rescale_nodes, Construction, RecurrenceCoefficients, WeightSpec};
use crate::precision::{airy_pair, format_real, Complex, PrecisionContext};
use crate::scurve::PhaseContext;

/// `P_n(z) = lambda_n^{-n} pi_n(lambda_n z)` evaluated by its recurrence at
/// the precision the degree-`n` construction settled on.
#[derive(Debug, Clone)]
pub struct ExactPolynomial {
    pub n: usize,
    pub construction: Construction,
    rescaled: RecurrenceCoefficients,
}

impl ExactPolynomial {
    pub fn new(n: usize) -> Result<Self> {
        let construction = construct(WeightSpec::new(3)?, n, None)?;
        let ctx = construction.ctx;
        let rescaled = construction.recurrence.rescaled(&lambda_n(n, 3, &ctx));
        Ok(ExactPolynomial {
            n,
            construction,
            rescaled,
        })
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        self.rescaled.pi_eval(&z.with_prec(self.construction.ctx.bits()))
    }

    /// Zeros of `P_n`.
    pub fn zeros(&self) -> Vec<Complex> {
        let ctx = &self.construction.ctx;
        rescale_nodes(&self.construction.rule.nodes, self.n, 3, ctx)
    }
}

/// `max |B(zeta) M^{-1} - I|` over `count` points of `|zeta| = modulus` in
/// the sector `0 < arg zeta < 2 pi/3`, where
/// `B = diag(zeta^{1/4}, zeta^{-1/4}) A(zeta) diag(e^{(2/3) zeta^{3/2}}, e^{-(2/3) zeta^{3/2}})`,
/// `M = (1/sqrt 2) [[1, i], [i, 1]]` and `A` is the Airy model solution.
pub fn airy_model_residual(modulus: f64, count: usize, ctx: &PrecisionContext) -> f64 {
    let prec = ctx.bits();
    let root_2pi = Float::with_val(prec, ctx.pi() * 2u32).sqrt();
    let half = Float::with_val(prec, 1) / Float::with_val(prec, 2u32).sqrt();
    let w2 = Complex::cis_pi_rational(prec, 4, 3);
    let w = Complex::cis_pi_rational(prec, 2, 3);
    let mut worst: f64 = 0.0;
    for j in 0..count {
        let theta = 2.0 * std::f64::consts::PI / 3.0 * (j as f64 + 0.5) / count as f64;
        let zeta = Complex::from_polar(&ctx.real(modulus), &ctx.real(theta));
        let (a0, d0) = airy_pair(&zeta, ctx);
        let (a2, d2) = airy_pair(&(&w2 * &zeta), ctx);
        // y2 = w^2 Ai(w^2 zeta), y2' = w Ai'(w^2 zeta)
        let y2 = &w2 * &a2;
        let y2p = &w * &d2;
        let a = [
            [a0.scale(&root_2pi), (-&y2).scale(&root_2pi)],
            [d0.mul_neg_i().scale(&root_2pi), y2p.mul_i().scale(&root_2pi)],
        ];
        let quarter = zeta.sqrt().sqrt();
        let expo = (&zeta.sqrt() * &zeta) * 2u32 / 3u32;
        let left = [quarter.clone(), quarter.recip()];
        let right = [expo.exp(), (-&expo).exp()];
        let mut b = [[Complex::zero(prec), Complex::zero(prec)], [Complex::zero(prec), Complex::zero(prec)]];
        for r in 0..2 {
            for c in 0..2 {
                b[r][c] = &(&left[r] * &a[r][c]) * &right[c];
            }
        }
        // M^{-1} = (1/sqrt 2) [[1, -i], [-i, 1]]
        for r in 0..2 {
            let row = [
                (&b[r][0] - &b[r][1].mul_i()).scale(&half),
                (&b[r][1] - &b[r][0].mul_i()).scale(&half),
            ];
            for (c, v) in row.iter().enumerate() {
                let target = if r == c { 1.0 } else { 0.0 };
                let (re, im) = v.to_f64();
                worst = worst.max((re - target).hypot(im));
            }
        }
    }
    worst
}

/// Rescaled zeros of `P_n` against `gamma` and the equilibrium measure.
#[derive(Debug, Clone)]
pub struct ZeroDistribution {
    pub n: usize,
    pub zeros: Vec<Complex>,
    pub max_distance: f64,
    /// Kolmogorov-Smirnov distance between the empirical cdf of the zeros,
    /// projected onto `gamma`, and the equilibrium cdf.
    pub ks: f64,
    /// `max |t_(k) + t_(n+1-k) - 1|` over the sorted projected cdf values.
    pub reflection_defect: f64,
}

pub fn zero_distribution_report(phase: &PhaseContext, n_list: &[usize]) -> Result<Vec<ZeroDistribution>> {
    n_list
        .iter()
        .map(|&n| {
            let exact = ExactPolynomial::new(n)?;
            Ok(zero_distribution(phase, n, exact.zeros()))
        })
        .collect()
}

pub(crate) fn zero_distribution(phase: &PhaseContext, n: usize, zeros: Vec<Complex>) -> ZeroDistribution {
    let gamma = &phase.gamma;
    let max_distance = zeros.iter().map(|z| gamma.distance(z.to_f64())).fold(0.0, f64::max);
    let mut t: Vec<f64> = zeros.iter().map(|z| gamma.project_cdf(z.to_f64())).collect();
    t.sort_by(f64::total_cmp);
    let m = t.len() as f64;
    let ks = t
        .iter()
        .enumerate()
        .map(|(k, &u)| ((k as f64 + 1.0) / m - u).max(u - k as f64 / m))
        .fold(0.0, f64::max);
    let reflection_defect = (0..t.len())
        .map(|k| (t[k] + t[t.len() - 1 - k] - 1.0).abs())
        .fold(0.0, f64::max);
    ZeroDistribution {
        n,
        zeros,
        max_distance,
        ks,
        reflection_defect,
    }
}

/// One probe of the comparison between a formula and the exact `P_n`.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub z: Complex,
    pub region: Region,
    pub exact: Complex,
    pub approx: Complex,
    /// `|approx - exact| / scale`, with the scale of the formula's leading
    /// terms; see [`super::Approximation`].
    pub rel_err: f64,
}

#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub n: usize,
    pub probes: Vec<ProbeResult>,
    pub distribution: ZeroDistribution,
}

impl AsymptoticReport {
    /// Largest error over the probes of one region kind; the two band sides
    /// count as one.
    pub fn max_error(&self, pick: impl Fn(Region) -> bool) -> f64 {
        self.probes
            .iter()
            .filter(|p| pick(p.region))
            .map(|p| p.rel_err)
            .fold(0.0, f64::max)
    }

    /// `{n, probes: [{z, exact: {log_magnitude, phase}, approx, rel_err,
    /// region}], ks, max_dist}` with decimal-string numerics.
    pub fn to_json(&self, digits: u32) -> Value {
        let c = |z: &Complex| json!({ "re": format_real(&z.re, digits), "im": format_real(&z.im, digits) });
        let probes: Vec<Value> = self
            .probes
            .iter()
            .map(|p| {
                let prec = p.exact.prec();
                let log_mag = Float::with_val(prec, p.exact.abs().ln());
                json!({
                    "z": c(&p.z),
                    "exact": {
                        "log_magnitude": format_real(&log_mag, digits),
                        "phase": format_real(&p.exact.arg(), digits),
                    },
                    "approx": c(&p.approx),
                    "rel_err": format!("{:e}", p.rel_err),
                    "region": p.region.name(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "probes": probes,
            "ks": format!("{:e}", self.distribution.ks),
            "max_dist": format!("{:e}", self.distribution.max_distance),
        })
    }
}

/// Compares the formula that applies at each probe with the exact `P_n`.
pub fn asymptotic_report(eval: &AsymptoticEvaluator, n: usize, probes: &[Complex]) -> Result<AsymptoticReport> {
    let exact = ExactPolynomial::new(n)?;
    let mut out = Vec::with_capacity(probes.len());
    for z in probes {
        let (region, a) = eval.pn_auto(z, n)?;
        let e = exact.eval(z);
        let diff = &a.value.with_prec(e.prec()) - &e;
        out.push(ProbeResult {
            z: z.clone(),
            region,
            exact: e,
            approx: a.value,
            rel_err: diff.abs_f64() / a.scale,
        });
    }
    let distribution = zero_distribution(&eval.phase, n, exact.zeros());
    Ok(AsymptoticReport {
        n,
        probes: out,
        distribution,
    })
}
