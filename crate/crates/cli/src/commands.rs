use std::io::Write;

use serde_json::{json, Value};

use oscgauss::asymptotics::{asymptotic_report, AsymptoticEvaluator, RegionParams};
use oscgauss::opq::{construct, moment, write_rule_csv, WeightSpec};
use oscgauss::oscquad::{evaluate, Amplitude, OscillatoryIntegralSpec};
use oscgauss::precision::format_real;
use oscgauss::scurve::{
    equilibrium_measure, read_curve_json, sample_field_grid, trace_extension, trace_gamma, write_curve_json,
    write_grid_csv, CurveKind, CurvePolyline, Field, GridSpec, PhaseContext, QuadDifferential, TraceOptions,
};
use oscgauss::{Complex, Error, PrecisionContext, Result};

/// Working context for `digits` reported digits and the minimum guard.
pub fn context(digits: u32) -> Result<PrecisionContext> {
    if digits < PrecisionContext::MIN_DIGITS {
        return Err(Error::InvalidInput(format!(
            "precision must be at least {} digits, got {digits}",
            PrecisionContext::MIN_DIGITS
        )));
    }
    PrecisionContext::new(digits, PrecisionContext::MIN_GUARD)
}

pub fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

/// `gamma`, `gamma_1`, `gamma_2` traced with `opts`.
pub fn trace_all(ctx: &PrecisionContext, opts: &TraceOptions) -> Result<Vec<CurvePolyline>> {
    let qd = QuadDifferential::new(ctx);
    Ok(vec![
        trace_gamma(&qd, opts)?,
        trace_extension(&qd, CurveKind::Gamma1, opts)?,
        trace_extension(&qd, CurveKind::Gamma2, opts)?,
    ])
}

/// Phase functions on curves traced afresh or read back from a file.
pub fn phase_context(ctx: &PrecisionContext, curves: Option<Vec<CurvePolyline>>) -> Result<PhaseContext> {
    let curves = match curves {
        Some(c) => c,
        None => trace_all(ctx, &TraceOptions::default())?,
    };
    let find = |k: CurveKind| curves.iter().find(|c| c.kind == k).cloned();
    let gamma = find(CurveKind::Gamma).ok_or_else(|| Error::Io("no gamma among the curves".into()))?;
    PhaseContext::new(QuadDifferential::new(ctx), gamma, find(CurveKind::Gamma1), find(CurveKind::Gamma2))
}

/// CSV `k,M_k_re,M_k_im` for `k = 0..=k_max`.
pub fn moments(r: u32, k_max: usize, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let spec = WeightSpec::new(r)?;
    let d = ctx.decimal_digits();
    writeln!(out, "k,M_k_re,M_k_im")?;
    for k in 0..=k_max {
        let mut m = ctx.round_complex(&moment(k, &spec, ctx)?);
        // rounding residue of the phase factor in a component that is exactly zero
        let noise = m.abs_f64() * 10f64.powi(-(d as i32) - 5);
        for part in [&mut m.re, &mut m.im] {
            if part.to_f64().abs() <= noise {
                *part = rug::Float::new(part.prec());
            }
        }
        writeln!(out, "{k},{},{}", format_real(&m.re, d), format_real(&m.im, d))?;
    }
    Ok(())
}

/// Nodes and weights of the `n`-point rule for `e^{i z^r}`. The working
/// precision is the degree schedule, raised to `digits` when that is larger.
pub fn opq(n: usize, r: u32, digits: Option<u32>, out: &mut dyn Write) -> Result<()> {
    let schedule = PrecisionContext::for_degree(n);
    let ctx = match digits {
        Some(d) if d > schedule.decimal_digits() => PrecisionContext::new(d, schedule.guard_digits())?,
        _ => schedule,
    };
    let c = construct(WeightSpec::new(r)?, n, Some(ctx))?;
    write_rule_csv(&c.rule, out)
}

/// JSON array `[gamma, gamma_1, gamma_2]`.
pub fn curve(opts: &TraceOptions, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let curves = trace_all(ctx, opts)?;
    let docs: Vec<Value> = curves.iter().map(|c| write_curve_json(c, ctx.decimal_digits())).collect();
    write_json(out, &Value::Array(docs))
}

/// Equilibrium density and cdf along `gamma` with the mass checks, at
/// `samples` points spread evenly over the traced vertices.
pub fn measure(curves: Option<&Value>, samples: usize, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let curves = curves.map(|doc| read_curve_json(doc, ctx)).transpose()?;
    let pc = phase_context(ctx, curves)?;
    let m = equilibrium_measure(&pc)?;
    let pts = &m.polyline.points;
    let count = samples.clamp(2, pts.len());
    let d = ctx.decimal_digits();
    let rows: Vec<Value> = (0..count)
        .map(|j| {
            let p = &pts[j * (pts.len() - 1) / (count - 1)];
            json!({
                "s": format!("{:e}", p.s),
                "re": format_real(&p.z.re, d),
                "im": format_real(&p.z.im, d),
                "density": format!("{:e}", p.density),
                "cdf": format!("{:e}", p.cdf),
            })
        })
        .collect();
    write_json(
        out,
        &json!({
            "mass_contour": format!("{:e}", m.mass_contour),
            "mass_cdf": format!("{:e}", m.mass_cdf),
            "min_interior_density": format!("{:e}", m.min_interior_density),
            "exponent_z1": format!("{:e}", m.exponent_z1),
            "exponent_z2": format!("{:e}", m.exponent_z2),
            "symmetry_defect": format!("{:e}", m.symmetry_defect),
            "cdf_monotone": m.cdf_monotone,
            "samples": rows,
        }),
    )
}

/// Point off `gamma` by `offset` along the normal at equilibrium mass `t`.
pub fn off_gamma(pc: &PhaseContext, t: f64, offset: f64) -> Result<Complex> {
    let a = pc.point_at_cdf(t)?.to_f64();
    let b = pc.point_at_cdf(t + 1e-4)?.to_f64();
    let (tx, ty) = (b.0 - a.0, b.1 - a.1);
    let l = tx.hypot(ty);
    Ok(pc.ctx().complex(a.0 - offset * ty / l, a.1 + offset * tx / l))
}

/// Fixed probes: four outer points, three pairs straddling `gamma`, eight
/// points around `z2` and one near `z1`.
pub fn default_probes(pc: &PhaseContext) -> Result<Vec<Complex>> {
    let ctx = pc.ctx();
    let mut probes = vec![
        ctx.complex(2.0, 3.0),
        ctx.complex(-1.0, -1.0),
        ctx.complex(0.0, 2.5),
        ctx.complex(1.5, -1.2),
    ];
    for t in [0.3, 0.5, 0.7] {
        for s in [0.05, -0.05] {
            probes.push(off_gamma(pc, t, s)?);
        }
    }
    let (x2, y2) = pc.qd.z2.to_f64();
    for k in 0..8 {
        let th = std::f64::consts::PI * (k as f64 + 0.5) / 4.0;
        probes.push(ctx.complex(x2 + 0.15 * th.cos(), y2 + 0.15 * th.sin()));
    }
    probes.push(ctx.complex(-x2 + 0.1, 1.2));
    Ok(probes)
}

/// `"x,y;x,y;..."`.
pub fn parse_probes(text: &str, ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("probe {pair:?} is not x,y")))?;
            Ok(Complex::new(ctx.parse(x.trim())?, ctx.parse(y.trim())?))
        })
        .collect()
}

/// Comparison of the asymptotic formulas with the exact `P_n`.
pub fn asymp(n: usize, probes: Option<&str>, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let pc = phase_context(ctx, None)?;
    let probes = match probes {
        Some(text) => parse_probes(text, ctx)?,
        None => default_probes(&pc)?,
    };
    let ev = AsymptoticEvaluator::new(pc, RegionParams::default());
    let report = asymptotic_report(&ev, n, &probes)?;
    write_json(out, &report.to_json(ctx.decimal_digits()))
}

pub struct QuadArgs<'a> {
    pub a: &'a str,
    pub b: &'a str,
    pub omega: &'a str,
    pub r: u32,
    pub n_endpoint: usize,
    pub n_stationary: usize,
    pub amplitude: &'a str,
}

pub fn quad(args: &QuadArgs, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let amplitude = Amplitude::parse(args.amplitude)?;
    let spec = OscillatoryIntegralSpec::parse(args.a, args.b, args.omega, args.r, amplitude, *ctx)?;
    let v = evaluate(&spec, args.n_endpoint, args.n_stationary)?;
    write_json(out, &v.to_json(ctx.decimal_digits()))
}

/// `"x_min,x_max,nx,y_min,y_max,ny"`.
pub fn parse_grid(text: &str) -> Result<GridSpec> {
    let bad = || Error::InvalidInput(format!("grid {text:?} is not x_min,x_max,nx,y_min,y_max,ny"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(bad());
    }
    let f = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let u = |s: &str| s.parse::<usize>().map_err(|_| bad());
    Ok(GridSpec {
        x_min: f(parts[0])?,
        x_max: f(parts[1])?,
        nx: u(parts[2])?,
        y_min: f(parts[3])?,
        y_max: f(parts[4])?,
        ny: u(parts[5])?,
    })
}

pub fn fields(which: &str, grid: &GridSpec, ctx: &PrecisionContext, out: &mut dyn Write) -> Result<()> {
    let field = Field::parse(which)?;
    let pc = phase_context(ctx, None)?;
    let values = sample_field_grid(&pc, field, grid)?;
    write_grid_csv(&values, out)
}
