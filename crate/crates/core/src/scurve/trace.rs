use std::f64::consts::PI;

use rug::Float;

use super::phase::{endpoint_log_reference, endpoint_phase, log_argument, phase_formula, Walker};
use super::{Endpoint, QuadDifferential};
use crate::error::{Error, Result};
use crate::precision::{Complex, TwoPointCut};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Gamma,
    Gamma1,
    Gamma2,
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Gamma => "gamma",
            CurveKind::Gamma1 => "gamma1",
            CurveKind::Gamma2 => "gamma2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma" => Some(CurveKind::Gamma),
            "gamma1" => Some(CurveKind::Gamma1),
            "gamma2" => Some(CurveKind::Gamma2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub z: Complex,
    /// Arc length from the starting zero.
    pub s: f64,
    /// Equilibrium density per unit arc length; zero on the extensions.
    pub density: f64,
    /// Equilibrium mass between `z1` and this point; zero on the extensions.
    pub cdf: f64,
}

#[derive(Debug, Clone)]
pub struct CurvePolyline {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

impl CurvePolyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.s)
    }

    pub fn vertices(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| p.z.to_f64()).collect()
    }

    pub fn distance(&self, z: (f64, f64)) -> f64 {
        crate::precision::polyline_distance(&self.vertices(), z)
    }

    /// Nearest point of the polyline: `(segment index, fraction, distance)`.
    pub fn project(&self, z: (f64, f64)) -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for (k, w) in self.points.windows(2).enumerate() {
            let a = w[0].z.to_f64();
            let b = w[1].z.to_f64();
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len2 = dx * dx + dy * dy;
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((z.0 - a.0) * dx + (z.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
            };
            let d = (z.0 - a.0 - t * dx).hypot(z.1 - a.1 - t * dy);
            if d < best.2 {
                best = (k, t, d);
            }
        }
        best
    }

    /// Arc-length parameter of the nearest point.
    pub fn project_arc(&self, z: (f64, f64)) -> f64 {
        let (k, t, _) = self.project(z);
        let a = self.points[k].s;
        let b = self.points[k + 1].s;
        a + t * (b - a)
    }

    /// Linear interpolation of the cdf at the nearest point.
    pub fn project_cdf(&self, z: (f64, f64)) -> f64 {
        let (k, t, _) = self.project(z);
        let a = self.points[k].cdf;
        let b = self.points[k + 1].cdf;
        a + t * (b - a)
    }

    /// Point at arc length `s`, linearly interpolated.
    pub fn at_arc(&self, s: f64) -> (f64, f64) {
        let k = self.points.partition_point(|p| p.s < s).clamp(1, self.points.len() - 1);
        let (a, b) = (&self.points[k - 1], &self.points[k]);
        let t = if b.s > a.s { ((s - a.s) / (b.s - a.s)).clamp(0.0, 1.0) } else { 0.0 };
        let (za, zb) = (a.z.to_f64(), b.z.to_f64());
        (za.0 + t * (zb.0 - za.0), za.1 + t * (zb.1 - za.1))
    }

    /// Cut along the polyline joining its two ends.
    pub fn to_cut(&self, resolution: f64) -> Result<TwoPointCut> {
        let first = &self.points[0].z;
        let last = &self.points[self.points.len() - 1].z;
        TwoPointCut::new(first, last, self.vertices(), resolution)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Local error bound per step.
    pub step_tolerance: f64,
    pub max_step: f64,
    /// Arc length of the traced extensions.
    pub extension_length: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step_tolerance: 1e-9,
            max_step: 2e-3,
            extension_length: 3.0,
        }
    }
}

enum Stop<'a> {
    At(&'a Complex, f64),
    Length(f64),
}

struct Traced {
    z: Vec<Complex>,
    s: Vec<f64>,
    phase: Vec<Complex>,
    speed: Vec<f64>,
}

// Dormand-Prince 5(4)
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Follows the curve on which `phi * conj(rot)` is real and increasing,
/// `phi = F - F(origin)`, starting from a zero of `Q` in direction `angle`.
///
/// Each accepted step is followed by Newton projections onto the level set,
/// so the level condition holds to working precision at every vertex.
fn trace(qd: &QuadDifferential, origin: Endpoint, angle: f64, rot: &Complex, stop: Stop, opts: &TraceOptions) -> Result<Traced> {
    let prec = qd.ctx().bits();
    let z0 = qd.endpoint(origin).clone();
    let f0 = endpoint_phase(qd, origin);
    let u0 = Complex::cis(&Float::with_val(prec, angle));
    let h0 = 1e-6f64.min(opts.max_step);
    let mut z = &z0 + &(&u0 * h0);

    let mut r = qd.root_product(&z).sqrt();
    let q = qd.q_from_root(&z, &r);
    if (&(&q * &u0) * &rot.conj()).re.is_sign_negative() {
        r = -r;
    }
    let mut walker = Walker::new(&z, r, &endpoint_log_reference(qd, origin));

    let direction = |w: &Walker, p: &Complex| -> Complex {
        let r = w.nearest_root(qd, p);
        let q = qd.q_from_root(p, &r);
        let a = q.abs();
        (&q.conj() * rot) / &a
    };
    let project = |w: &mut Walker, p: &mut Complex| {
        for _ in 0..3 {
            w.advance(qd, p);
            let phi = &w.phase(p) - &f0;
            let level = (&phi * &rot.conj()).im;
            let q = qd.q_from_root(p, &w.r);
            let a = q.abs();
            if a.is_zero() {
                return;
            }
            let u = (&q.conj() * rot) / &a;
            let eps = -Float::with_val(prec, &level / &a);
            *p += &u.mul_i().scale(&eps);
            if eps.to_f64().abs() < 1e-30 {
                w.advance(qd, p);
                return;
            }
        }
        w.advance(qd, p);
    };
    project(&mut walker, &mut z);

    let speed_of = |w: &Walker, p: &Complex| qd.q_from_root(p, &w.r).abs_f64();
    let mut out = Traced {
        z: vec![z0.clone(), z.clone()],
        s: vec![0.0, z.dist_f64(&z0)],
        phase: vec![Complex::zero(prec), &walker.phase(&z) - &f0],
        speed: vec![0.0, speed_of(&walker, &z)],
    };
    let tol = opts.step_tolerance;
    let mut h = h0;
    let mut u_prev = direction(&walker, &z);
    let budget = match stop {
        Stop::At(target, b) => {
            let _ = target;
            b
        }
        Stop::Length(l) => l,
    };
    loop {
        let arc = *out.s.last().unwrap();
        match stop {
            Stop::At(target, _) => {
                let d = z.dist_f64(target);
                if d <= 10.0 * tol {
                    // the direction field degenerates at the zero; snap to it
                    out.s.push(arc + d);
                    out.z.push(target.clone());
                    let mut w = walker.clone();
                    w.r = Complex::zero(prec);
                    w.log = crate::scurve::phase::continued_log(&log_argument(target, &w.r), &walker.log.im);
                    out.phase.push(&phase_formula(target, &w.r, &w.log) - &f0);
                    out.speed.push(0.0);
                    break;
                }
                h = h.min(0.5 * d);
                if arc > budget {
                    return Err(Error::TraceDiverged { arc_length: arc, budget });
                }
            }
            Stop::Length(l) => {
                if arc >= l {
                    break;
                }
                h = h.min((l - arc).max(1e-6));
            }
        }
        h = h.min(opts.max_step);

        let mut k: Vec<Complex> = Vec::with_capacity(7);
        k.push(u_prev.clone());
        for row in A.iter().take(6) {
            let mut p = z.clone();
            for (j, a) in row.iter().enumerate().take(k.len()) {
                if *a != 0.0 {
                    p += &(&k[j] * (a * h));
                }
            }
            k.push(direction(&walker, &p));
        }
        let mut z5 = z.clone();
        let mut diff = Complex::zero(prec);
        for j in 0..7 {
            if B5[j] != 0.0 {
                z5 += &(&k[j] * (B5[j] * h));
            }
            diff += &(&k[j] * ((B5[j] - B4[j]) * h));
        }
        let err = diff.abs_f64();
        if err > tol && h > 1e-12 {
            h *= (0.9 * (tol / err).powf(0.2)).max(0.2);
            continue;
        }
        let mut znew = z5;
        project(&mut walker, &mut znew);
        let u_new = direction(&walker, &znew);
        let chord = znew.dist_f64(&z);
        // chord to arc: the tangent turns by dtheta over the step
        let turn = (&u_new * &u_prev.conj()).arg().to_f64();
        out.s.push(arc + chord * (1.0 + turn * turn / 24.0));
        out.phase.push(&walker.phase(&znew) - &f0);
        out.speed.push(speed_of(&walker, &znew));
        out.z.push(znew.clone());
        z = znew;
        u_prev = u_new;
        let grow = if err > 0.0 { 0.9 * (tol / err).powf(0.2) } else { 4.0 };
        h *= grow.clamp(0.2, 4.0);
    }
    Ok(out)
}

/// The critical trajectory from `z1` at angle `theta_0` to `z2`, annotated
/// with the equilibrium density and cdf.
pub fn trace_gamma(qd: &QuadDifferential, opts: &TraceOptions) -> Result<CurvePolyline> {
    if opts.step_tolerance <= 0.0 || opts.max_step <= 0.0 {
        return Err(Error::InvalidInput("step tolerance and maximum step must be positive".into()));
    }
    let angle = qd.critical_angles(Endpoint::Z1)[0];
    let prec = qd.ctx().bits();
    let rot = Complex::i(prec);
    let budget = 10.0 * qd.z1.dist_f64(&qd.z2);
    let t = trace(qd, Endpoint::Z1, angle, &rot, Stop::At(&qd.z2, budget), opts)?;
    let pi = std::f64::consts::PI;
    let points = (0..t.z.len())
        .map(|j| {
            // D = phi_1 / (pi i)
            let cdf = t.phase[j].im.to_f64() / pi;
            CurvePoint {
                z: t.z[j].clone(),
                s: t.s[j],
                density: t.speed[j] / pi,
                cdf,
            }
        })
        .collect();
    Ok(CurvePolyline {
        kind: CurveKind::Gamma,
        points,
    })
}

/// `gamma_2` (where `phi_2` is real and increases from 0 at `z2`) or
/// `gamma_1` (the same for `phi_1` from `z1`), traced for
/// `opts.extension_length` of arc length.
pub fn trace_extension(qd: &QuadDifferential, which: CurveKind, opts: &TraceOptions) -> Result<CurvePolyline> {
    let origin = match which {
        CurveKind::Gamma1 => Endpoint::Z1,
        CurveKind::Gamma2 => Endpoint::Z2,
        CurveKind::Gamma => return Err(Error::InvalidInput("use trace_gamma for gamma".into())),
    };
    let angle = qd.extension_angle(origin);
    let rot = Complex::one(qd.ctx().bits());
    let t = trace(qd, origin, angle, &rot, Stop::Length(opts.extension_length), opts)?;
    let points = (0..t.z.len())
        .map(|j| CurvePoint {
            z: t.z[j].clone(),
            s: t.s[j],
            density: 0.0,
            cdf: 0.0,
        })
        .collect();
    Ok(CurvePolyline { kind: which, points })
}

/// Checks on a traced `gamma` that do not reuse the tracer's own state.
#[derive(Debug, Clone)]
pub struct GammaDiagnostics {
    /// Distance from the last traced vertex (before snapping) to `z2`.
    pub endpoint_gap: f64,
    pub max_abs_im_d: f64,
    /// Ordinate where the curve crosses the imaginary axis.
    pub axis_crossing: f64,
    pub arc_length: f64,
    /// `max |arg Q + 2 arg z' - pi|` (mod `2 pi`) with `z'` from chords.
    pub tangent_identity: f64,
    /// Range of `arg z'` over chords in `{Re Q < 0, Im Q < 0}`.
    pub shaded_arg_range: (f64, f64),
    pub shaded_in_triangle: bool,
    pub initial_angle: f64,
    pub final_cdf: f64,
}

pub fn gamma_diagnostics(qd: &QuadDifferential, gamma: &CurvePolyline) -> Result<GammaDiagnostics> {
    let n = gamma.points.len();
    if n < 3 {
        return Err(Error::InvalidInput("gamma has too few points".into()));
    }
    let prec = qd.ctx().bits();
    let straight = TwoPointCut::straight(&qd.z1, &qd.z2, 0.0)?;
    let f1 = endpoint_phase(qd, Endpoint::Z1);
    let mut max_im_d: f64 = 0.0;
    for p in &gamma.points[1..n - 1] {
        // inside the lens the branch is -R_0; Re F does not see the log branch
        let r = straight.sqrt_product_with(&p.z, true);
        let log = log_argument(&p.z, &r).ln();
        let phi = &phase_formula(&p.z, &r, &log) - &f1;
        max_im_d = max_im_d.max(phi.re.to_f64().abs() / PI);
    }

    let mut axis = f64::NAN;
    for w in gamma.points.windows(2) {
        let (a, b) = (w[0].z.to_f64(), w[1].z.to_f64());
        if a.0 <= 0.0 && b.0 > 0.0 {
            axis = a.1 + (b.1 - a.1) * (-a.0) / (b.0 - a.0);
        }
    }

    let triangle = [qd.z1.to_f64(), (0.0, 1.0), (0.0, 1.0 - std::f64::consts::SQRT_2)];
    let mut identity: f64 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut inside = true;
    for w in gamma.points[1..n - 1].windows(2) {
        let mid = (&w[0].z + &w[1].z) / 2u32;
        let chord = &w[1].z - &w[0].z;
        let t = chord.arg().to_f64();
        let q = qd.q_eval(&mid);
        let (qr, qi) = q.to_f64();
        let dev = (qi.atan2(qr) + 2.0 * t - PI).rem_euclid(2.0 * PI);
        identity = identity.max(dev.min(2.0 * PI - dev));
        if qr < 0.0 && qi < 0.0 {
            lo = lo.min(t);
            hi = hi.max(t);
            inside &= in_triangle(mid.to_f64(), triangle);
        }
    }
    let first = (&gamma.points[1].z - &gamma.points[0].z).arg().to_f64();
    let _ = prec;
    Ok(GammaDiagnostics {
        endpoint_gap: gamma.points[n - 2].z.dist_f64(&qd.z2),
        max_abs_im_d: max_im_d,
        axis_crossing: axis,
        arc_length: gamma.length(),
        tangent_identity: identity,
        shaded_arg_range: (lo, hi),
        shaded_in_triangle: inside,
        initial_angle: first,
        final_cdf: gamma.points[n - 1].cdf,
    })
}

fn in_triangle(p: (f64, f64), t: [(f64, f64); 3]) -> bool {
    let s = |a: (f64, f64), b: (f64, f64)| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let d1 = s(t[0], t[1]);
    let d2 = s(t[1], t[2]);
    let d3 = s(t[2], t[0]);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}
