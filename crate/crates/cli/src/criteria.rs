//! The seven acceptance criteria. Each builds what it needs from scratch,
//! so timings include construction.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::time::Instant;

use serde_json::{json, Map, Value};

use oscgauss::asymptotics::{
    airy_model_residual, asymptotic_report, zero_distribution_report, AsymptoticEvaluator, Region, RegionParams,
};
use oscgauss::opq::{build_recurrence, hankel_coefficients, moment, ray_moment, MomentSequence, WeightSpec};
use oscgauss::oscquad::{convergence_order, evaluate, real_interval_oracle, Amplitude, OscillatoryIntegralSpec};
use oscgauss::precision::airy_pair;
use oscgauss::scurve::{
    equilibrium_measure, gamma_diagnostics, trace_gamma, verify_equilibrium, QuadDifferential, TraceOptions,
};
use oscgauss::{Complex, Error, PrecisionContext, Result};

use crate::commands::{default_probes, phase_context};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Curve,
    Measure,
    Zeros,
    Asymp,
    Quad,
    Oracles,
    Integral,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "curve" => Suite::Curve,
            "measure" => Suite::Measure,
            "zeros" => Suite::Zeros,
            "asymp" => Suite::Asymp,
            "quad" => Suite::Quad,
            "oracles" => Suite::Oracles,
            "integral" => Suite::Integral,
            "all" => Suite::All,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown suite {s}; expected curve, measure, zeros, asymp, quad, oracles, integral or all"
                )))
            }
        })
    }

    pub fn criteria(&self) -> Vec<u32> {
        match self {
            Suite::Curve => vec![1],
            Suite::Measure => vec![2],
            Suite::Zeros => vec![3],
            Suite::Asymp => vec![4],
            Suite::Quad => vec![5],
            Suite::Oracles => vec![6],
            Suite::Integral => vec![7],
            Suite::All => (1..=7).collect(),
        }
    }
}

/// Result of one criterion: every individual check with its measured value
/// and bound, or the error that stopped it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
    pub error: Option<Error>,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: String,
    pub pass: bool,
}

impl Outcome {
    pub fn to_json(&self) -> Value {
        let mut checks = Map::new();
        for c in &self.checks {
            checks.insert(
                c.name.clone(),
                json!({ "value": format!("{:e}", c.value), "bound": c.bound, "pass": c.pass }),
            );
        }
        json!({
            "id": self.id,
            "name": self.name,
            "pass": self.pass,
            "seconds": format!("{:.3}", self.seconds),
            "checks": checks,
            "error": self.error.as_ref().map(|e| e.to_string()),
        })
    }

    /// `criterion N (name): PASS|FAIL` followed by the failing checks.
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {} ({}): {status} in {:.1} s", self.id, self.name, self.seconds);
        for c in self.checks.iter().filter(|c| !c.pass) {
            line.push_str(&format!("; {} = {:e} violates {}", c.name, c.value, c.bound));
        }
        if let Some(e) = &self.error {
            line.push_str(&format!("; error: {e}"));
        }
        line
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, value: f64, bound: String, pass: bool) {
        self.0.push(Check {
            name: name.into(),
            value,
            bound,
            pass,
        });
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(name, value, format!("<= {bound:e}"), value <= bound);
    }

    fn below(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(name, value, format!("< {bound:e}"), value < bound);
    }

    fn above(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(name, value, format!("> {bound:e}"), value > bound);
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(name, value, format!(">= {bound:e}"), value >= bound);
    }

    fn within(&mut self, name: impl Into<String>, value: f64, lo: f64, hi: f64) {
        self.push(name, value, format!("in [{lo}, {hi}]"), (lo..=hi).contains(&value));
    }

    fn open_interval(&mut self, name: impl Into<String>, value: f64, lo: f64, hi: f64) {
        self.push(name, value, format!("in ({lo}, {hi})"), lo < value && value < hi);
    }
}

pub fn run(suite: Suite) -> Vec<Outcome> {
    suite.criteria().into_iter().map(criterion).collect()
}

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "curve existence",
        2 => "equilibrium measure",
        3 => "zero accumulation",
        4 => "strong asymptotics",
        5 => "quadrature order",
        6 => "internal consistency oracles",
        7 => "end-to-end integral",
        _ => "unknown",
    }
}

pub fn criterion(id: u32) -> Outcome {
    let start = Instant::now();
    let mut checks = Checks::default();
    let result = match id {
        1 => curve(&mut checks),
        2 => measure(&mut checks),
        3 => zeros(&mut checks),
        4 => asymptotics(&mut checks),
        5 => quadrature_order(&mut checks),
        6 => oracles(&mut checks),
        7 => integral(&mut checks),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    let error = result.err();
    Outcome {
        id,
        name: name(id),
        pass: error.is_none() && !checks.0.is_empty() && checks.0.iter().all(|c| c.pass),
        seconds: start.elapsed().as_secs_f64(),
        checks: checks.0,
        error,
    }
}

fn curve(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let qd = QuadDifferential::new(&PrecisionContext::standard());
    let gamma = trace_gamma(&qd, &TraceOptions::default())?;
    let seconds = start.elapsed().as_secs_f64();
    let d = gamma_diagnostics(&qd, &gamma)?;
    let theta0 = -(2.0 * SQRT_2).atan() / 3.0;
    // chord of the first step, which departs from the tangent by O(step)
    c.at_most("initial_angle_offset", (d.initial_angle - theta0).abs(), 1e-6);
    c.at_most("endpoint_gap", d.endpoint_gap, 1e-6);
    c.at_most("max_abs_im_d", d.max_abs_im_d, 1e-8);
    c.open_interval("axis_crossing", d.axis_crossing, 1.0 - SQRT_2, 1.0);
    c.below("seconds", seconds, 10.0);
    Ok(())
}

fn measure(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let pc = phase_context(&PrecisionContext::standard(), None)?;
    let m = equilibrium_measure(&pc)?;
    let e = verify_equilibrium(&pc, 16)?;
    let seconds = start.elapsed().as_secs_f64();
    c.at_most("mass_contour_defect", (m.mass_contour - 1.0).abs(), 1e-10);
    c.at_most("mass_cdf_defect", (m.mass_cdf - 1.0).abs(), 1e-10);
    c.above("min_interior_density", m.min_interior_density, 0.0);
    c.within("exponent_z1", m.exponent_z1, 0.45, 0.55);
    c.within("exponent_z2", m.exponent_z2, 0.45, 0.55);
    c.at_most("ell_offset", (e.ell - (2.0 / 3.0 + LN_2)).abs(), 1e-12);
    c.at_most("equality_max", e.equality_max, 1e-6);
    c.above("inequality_min", e.inequality_min, 0.0);
    c.at_least("s_property_order", e.s_property_order, 1.0);
    c.below("seconds", seconds, 60.0);
    Ok(())
}

fn zeros(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let pc = phase_context(&PrecisionContext::standard(), None)?;
    let d = zero_distribution_report(&pc, &[10, 20, 40])?;
    let seconds = start.elapsed().as_secs_f64();
    for z in &d {
        c.push(format!("max_distance_n{}", z.n), z.max_distance, "reported".into(), true);
        c.push(format!("ks_n{}", z.n), z.ks, "reported".into(), true);
    }
    for w in d.windows(2) {
        c.below(
            format!("max_distance_n{}_vs_n{}", w[1].n, w[0].n),
            w[1].max_distance,
            w[0].max_distance,
        );
    }
    c.below("ks_n40", d[2].ks, d[0].ks / 1.5);
    c.below("seconds", seconds, 300.0);
    Ok(())
}

fn asymptotics(c: &mut Checks) -> Result<()> {
    let start = Instant::now();
    let ctx = PrecisionContext::standard();
    let pc = phase_context(&ctx, None)?;
    let probes = default_probes(&pc)?;
    let ev = AsymptoticEvaluator::new(pc, RegionParams::default());
    let r20 = asymptotic_report(&ev, 20, &probes)?;
    let r40 = asymptotic_report(&ev, 40, &probes)?;
    let classes: [(&str, fn(Region) -> bool); 3] = [
        ("outer", |r| r == Region::Outer),
        ("band", |r| matches!(r, Region::BandAbove | Region::BandBelow)),
        ("airy", |r| matches!(r, Region::Disk1 | Region::Disk2)),
    ];
    for (label, pick) in classes {
        let (e20, e40) = (r20.max_error(pick), r40.max_error(pick));
        c.push(format!("{label}_error_n20"), e20, "reported".into(), true);
        c.push(format!("{label}_error_n40"), e40, "reported".into(), true);
        c.within(format!("{label}_order"), (e20 / e40).log2(), 0.7, 1.3);
    }
    let residual = airy_model_residual(8.0, 16, &ctx);
    c.at_most("airy_model_residual", residual, 5.0 * 8f64.powf(-1.5));
    c.below("seconds", start.elapsed().as_secs_f64(), 300.0);
    Ok(())
}

fn quadrature_order(c: &mut Checks) -> Result<()> {
    let ctx = PrecisionContext::standard();
    let omegas: Vec<f64> = (0..9).map(|k| 10f64.powf(1.0 + 0.25 * k as f64)).collect();
    for (n, r) in [(2, 3), (3, 3), (2, 2)] {
        let start = Instant::now();
        let spec = OscillatoryIntegralSpec::new(-1.0, 1.0, 10.0, r, Amplitude::exp(), ctx)?;
        let fit = convergence_order(&spec, n, &omegas)?;
        c.push(format!("slope_n{n}_r{r}"), fit.slope, format!("expected {:.6}", fit.expected), true);
        c.at_most(format!("slope_deviation_n{n}_r{r}"), fit.relative_deviation(), 0.15);
        c.below(format!("seconds_n{n}_r{r}"), start.elapsed().as_secs_f64(), 120.0);
    }
    Ok(())
}

fn oracles(c: &mut Checks) -> Result<()> {
    let ctx = PrecisionContext::standard();
    let half = 10f64.powi(-(ctx.decimal_digits() as i32) / 2);

    let spec = WeightSpec::new(3)?;
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let closed = moment(k, &spec, &ctx)?;
        let ray = ray_moment(k, &spec, &ctx)?;
        worst = worst.max((&closed - &ray).abs_f64() / closed.abs_f64().max(1.0));
    }
    c.at_most("moments_vs_ray_quadrature", worst, half);

    let pc = phase_context(&ctx, None)?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let t = k as f64 / 9.0;
        for z in [ctx.complex(1.7 + 2.0 * t, -2.0 + 5.0 * t), ctx.complex(-1.2 + 3.0 * t, 2.0 + (3.0 * t).sin())] {
            let integral = pc.segment_integral(&pc.qd.z2, &z)?;
            let formula = pc.phi2(&z)?;
            worst = worst.max((&integral - &formula).abs_f64() / formula.abs_f64().max(1.0));
        }
    }
    c.at_most("phi2_formula_vs_path_integral", worst, half);

    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        let hctx = PrecisionContext::for_degree(n);
        let m = MomentSequence::new(spec, 2 * n, &hctx)?;
        let rec = build_recurrence(&m, n)?.coefficients();
        let hank = hankel_coefficients(&m, n)?;
        for (a, b) in rec.iter().zip(&hank) {
            worst = worst.max((a - b).abs_f64() / b.abs_f64().max(1.0));
        }
    }
    c.at_most("recurrence_vs_hankel", worst, 10f64.powi(-30));

    let ev = AsymptoticEvaluator::new(pc, RegionParams::default());
    let mut worst: f64 = 0.0;
    let mut state = 0x2545f4914f6cdd1du64;
    for _ in 0..200 {
        let z = ctx.complex(6.0 * uniform(&mut state) - 3.0, 6.0 * uniform(&mut state) - 3.0);
        let Ok(n) = ev.n_matrix(&z) else { continue };
        let det = &(&n[0][0] * &n[1][1]) - &(&n[0][1] * &n[1][0]);
        worst = worst.max((&det - &ctx.one()).abs_f64());
    }
    c.at_most("det_n_minus_one", worst, 1e-12);

    let prec = ctx.bits();
    let w = Complex::cis_pi_rational(prec, 2, 3);
    let w2 = Complex::cis_pi_rational(prec, 4, 3);
    let mut worst: f64 = 0.0;
    for modulus in [0.5, 2.0, 5.0, 9.0] {
        for j in 0..12 {
            let z = Complex::from_polar(&ctx.real(modulus), &ctx.real(PI * j as f64 / 6.0 + 0.1));
            let a = airy_pair(&z, &ctx).0;
            let b = &w * &airy_pair(&(&w * &z), &ctx).0;
            let d = &w2 * &airy_pair(&(&w2 * &z), &ctx).0;
            let scale = a.abs_f64().max(b.abs_f64()).max(d.abs_f64());
            worst = worst.max((&(&a + &b) + &d).abs_f64() / scale);
        }
    }
    c.at_most("airy_connection", worst, 1e-12);
    Ok(())
}

fn integral(c: &mut Checks) -> Result<()> {
    let ctx = PrecisionContext::standard();
    for (label, amp) in [("one", Amplitude::constant("1")?), ("exp", Amplitude::exp())] {
        let spec = OscillatoryIntegralSpec::new(-1.0, 1.0, 200.0, 3, amp, ctx)?;
        let v = evaluate(&spec, 6, 6)?;
        let o = real_interval_oracle(&spec)?;
        let rel = (&v.value - &o.with_prec(v.value.prec())).abs_f64() / o.abs_f64();
        c.at_most(format!("relative_error_{label}"), rel, 1e-8);
    }
    Ok(())
}

fn uniform(state: &mut u64) -> f64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    (*state >> 11) as f64 / (1u64 << 53) as f64
}
