use std::f64::consts::PI;

use rug::Float;

use super::phase::PhaseContext;
use super::trace::{CurvePoint, CurvePolyline};
use super::v_eval;
use crate::error::{Error, Result};
use crate::precision::{Complex, Real};
use crate::quadrature::{adaptive, gauss_legendre};

/// `t = tau^3 (10 - 15 tau + 6 tau^2)`: flat to second order at both ends,
/// which turns the `t^{2/3}` behaviour of the inverse cdf near the
/// endpoints into a smooth `tau^2`.
fn smoothstep(tau: &Real) -> (Real, Real) {
    let p = tau.prec();
    let t2 = Float::with_val(p, tau.square_ref());
    let t3 = Float::with_val(p, &t2 * tau);
    let poly = Float::with_val(p, &t2 * 6u32) - Float::with_val(p, tau * 15u32) + 10u32;
    let one_minus = Float::with_val(p, 1u32 - tau);
    let d = t2 * one_minus.square() * 30u32;
    (t3 * poly, d)
}

fn smoothstep_inverse(t: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        let v = m * m * m * (10.0 - 15.0 * m + 6.0 * m * m);
        if v < t {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Integration against the equilibrium measure through its inverse cdf:
/// `int h dmu = int_0^1 h(s(t)) dt` where `s(t)` is the point of `gamma`
/// carrying mass `t` below it.
#[derive(Debug)]
pub struct MeasureQuadrature<'a> {
    phase: &'a PhaseContext,
    /// Nodes and weights of a fixed rule for targets away from `gamma`.
    base: Vec<(Complex, Real)>,
    tol: Real,
}

impl<'a> MeasureQuadrature<'a> {
    pub fn new(phase: &'a PhaseContext) -> Result<Self> {
        let prec = phase.ctx().bits();
        let rule = gauss_legendre(20, prec);
        let panels = 32u32;
        let mut base = Vec::with_capacity(20 * panels as usize);
        for p in 0..panels {
            let lo = Float::with_val(prec, p) / panels;
            let half = Float::with_val(prec, 1) / (2 * panels);
            let mid = Float::with_val(prec, &lo + &half);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let tau = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
                let (t, dt) = smoothstep(&tau);
                let s = phase.point_at_cdf_impl(&t)?;
                base.push((s, Float::with_val(prec, w * &half) * dt));
            }
        }
        Ok(MeasureQuadrature {
            phase,
            base,
            tol: Float::with_val(prec, 1e-14),
        })
    }

    pub fn phase(&self) -> &PhaseContext {
        self.phase
    }

    /// `g(z) = int log(z - s) dmu(s)` with the principal logarithm, by the
    /// fixed rule. Only accurate for `z` a fair distance from `gamma`.
    pub fn g(&self, z: &Complex) -> Complex {
        let mut sum = Complex::zero(z.prec());
        for (s, w) in &self.base {
            sum += (z - s).ln().scale(w);
        }
        sum
    }

    /// `int log|z - s| dmu(s) = Re g(z)`, accurate up to the curve: the
    /// parameter interval is split at the point of `gamma` nearest `z` and
    /// both halves are integrated adaptively.
    pub fn log_potential(&self, z: &Complex) -> Result<Real> {
        let prec = z.prec();
        let t_star = self.phase.gamma.project_cdf(z.to_f64()).clamp(0.0, 1.0);
        let tau_star = Float::with_val(prec, smoothstep_inverse(t_star));
        let f = |tau: &Real| -> Result<Complex> {
            let (t, dt) = smoothstep(tau);
            let s = self.phase.point_at_cdf_impl(&t)?;
            let d = (z - &s).norm_sqr();
            if d.is_zero() {
                return Err(Error::OnCut {
                    point: format!("{z}"),
                    resolution: 0.0,
                });
            }
            Ok(Complex::from_real(d.ln() / 2u32 * dt))
        };
        let zero = Float::new(prec);
        let one = Float::with_val(prec, 1);
        let mut total = Float::new(prec);
        for (a, b) in [(&zero, &tau_star), (&tau_star, &one)] {
            if b > a {
                total += adaptive(&f, a, b, 20, &self.tol, 45)?.re;
            }
        }
        Ok(total)
    }

    /// Total potential `2 U^mu + Re V = Re V - 2 Re g`.
    pub fn total_potential(&self, z: &Complex) -> Result<f64> {
        let lp = self.log_potential(z)?;
        let v = v_eval(z).re;
        Ok(Float::with_val(z.prec(), v - lp * 2u32).to_f64())
    }
}

impl PhaseContext {
    /// The point of `gamma` at which the equilibrium cdf equals `t`, found by
    /// Newton's method on `D_+(z) = t` from the interpolated polyline.
    pub fn point_at_cdf(&self, t: f64) -> Result<Complex> {
        self.point_at_cdf_impl(&Float::with_val(self.ctx().bits(), t))
    }

    pub(crate) fn point_at_cdf_impl(&self, t: &Real) -> Result<Complex> {
        let prec = self.ctx().bits();
        let tf = t.to_f64();
        let pts = &self.gamma.points;
        let n = pts.len();
        // below this mass the point sits within the working roundoff of an
        // endpoint, since the cdf vanishes like a 3/2 power there
        let floor = self.ctx().working_epsilon().to_f64().powf(1.5);
        let tail = Float::with_val(prec, 1u32 - t).to_f64();
        if tf <= floor {
            return Ok(pts[0].z.with_prec(prec));
        }
        if tail <= floor {
            return Ok(pts[n - 1].z.with_prec(prec));
        }
        let k = pts.partition_point(|p| p.cdf < tf).clamp(1, n - 1);
        let (a, b) = (&pts[k - 1], &pts[k]);
        // the cdf grows like a 3/2 power at the ends; measuring from the
        // nearer endpoint keeps the guess off it when `t` rounds to 0 or 1
        let mut z = if k == 1 {
            let w = (tf / b.cdf).clamp(0.0, 1.0).powf(2.0 / 3.0);
            &a.z + &(&(&b.z - &a.z) * w)
        } else if k == n - 1 {
            let w = (tail / (1.0 - a.cdf)).clamp(0.0, 1.0).powf(2.0 / 3.0);
            &b.z + &(&(&a.z - &b.z) * w)
        } else {
            let frac = ((tf - a.cdf) / (b.cdf - a.cdf)).clamp(0.0, 1.0);
            &a.z + &(&(&b.z - &a.z) * frac)
        };
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let stop = Float::with_val(prec, self.ctx().epsilon() * 1000u32);
        let ends = [self.qd.z1.clone(), self.qd.z2.clone()];
        // R is carried along the iterates by continuity, since the `+` side
        // value jumps across the straight segment joining the endpoints
        let mut r_prev = self.r_side(&z, true);
        for _ in 0..60 {
            let mut r = self.r_side(&z, true);
            if (&r - &r_prev).abs() > (&r + &r_prev).abs() {
                r = -r;
            }
            let d = self.d_with_root(&z, &r, tf);
            let resid = &d - &Complex::from_real(t.clone());
            let dd = self.qd.q_from_root(&z, &r).mul_neg_i() / &pi;
            r_prev = r;
            let mut step = &resid / &dd;
            let room = ends.iter().map(|e| z.dist_f64(e)).fold(f64::INFINITY, f64::min);
            let len = step.abs_f64();
            if !len.is_finite() {
                break;
            }
            if len > 0.5 * room {
                step = &step * (0.5 * room / len);
            }
            z -= &step;
            if step.abs() <= stop {
                return Ok(z);
            }
        }
        Err(Error::NonConvergence {
            what: "inverse cdf on gamma",
            iterations: 60,
        })
    }

    /// Unit normal to `gamma` at a point of it, pointing to the `+` side.
    pub fn normal_plus(&self, z: &Complex) -> Complex {
        let q = self.q_sqrt_side(z, true);
        let a = q.abs();
        // the tangent is i conj(q_+)/|q_+|; the normal is i times that
        -&(q.conj() / &a)
    }

    /// `-(1/(2 pi i)) \oint Q^{1/2} dz` on a circle enclosing `gamma`, by the
    /// trapezoidal rule.
    pub fn mass_by_contour(&self, points: usize) -> Result<f64> {
        let ctx = self.ctx();
        let prec = ctx.bits();
        let center = ctx.complex(0.0, 0.8);
        let radius = ctx.real(2.5);
        let mut sum = Complex::zero(prec);
        for j in 0..points {
            let theta = Float::with_val(prec, ctx.pi() * 2u32 * j as u32) / points as u32;
            let e = Complex::cis(&theta);
            let z = &center + &e.scale(&radius);
            let dz = e.mul_i().scale(&radius);
            sum += &self.q_sqrt(&z)? * &dz;
        }
        let two_pi = Float::with_val(prec, ctx.pi() * 2u32);
        let integral = sum.scale(&two_pi) / points as u32;
        // -(1/(2 pi i)) I = (i / (2 pi)) I
        let m = integral.mul_i() / &two_pi;
        Ok(m.re.to_f64())
    }
}

/// The equilibrium measure on `gamma`, recomputed from the closed forms.
#[derive(Debug, Clone)]
pub struct MeasureSummary {
    /// `gamma` with density `|Q_+^{1/2}|/pi` and cdf `Re D_+`.
    pub polyline: CurvePolyline,
    pub mass_contour: f64,
    /// `D_+(z2)`.
    pub mass_cdf: f64,
    pub min_interior_density: f64,
    /// Fitted exponent of `density ~ distance^e` on the first and last 5% of
    /// arc length.
    pub exponent_z1: f64,
    pub exponent_z2: f64,
    /// `max |density(s) - density(L - s)| / max density`.
    pub symmetry_defect: f64,
    pub cdf_monotone: bool,
}

pub fn equilibrium_measure(phase: &PhaseContext) -> Result<MeasureSummary> {
    let pi = PI;
    let g = &phase.gamma;
    let n = g.points.len();
    let mut points = Vec::with_capacity(n);
    let mut last = 0.0;
    for (j, p) in g.points.iter().enumerate() {
        let (density, cdf) = if j == 0 {
            (0.0, 0.0)
        } else {
            let q = phase.q_sqrt_side(&p.z, true);
            let d = phase.d_plus_near(&p.z, last);
            (q.abs_f64() / pi, d.re.to_f64())
        };
        last = cdf;
        points.push(CurvePoint {
            z: p.z.clone(),
            s: p.s,
            density,
            cdf,
        });
    }
    let polyline = CurvePolyline { kind: g.kind, points };
    let pts = &polyline.points;
    let length = polyline.length();
    let min_interior_density = pts[1..n - 1].iter().map(|p| p.density).fold(f64::INFINITY, f64::min);
    let cdf_monotone = pts.windows(2).all(|w| w[1].cdf > w[0].cdf);

    let fit = |near_start: bool| -> f64 {
        let xy: Vec<(f64, f64)> = pts[1..n - 1]
            .iter()
            .filter_map(|p| {
                let d = if near_start { p.s } else { length - p.s };
                (d > 0.0 && d <= 0.05 * length && p.density > 0.0).then(|| (d.ln(), p.density.ln()))
            })
            .collect();
        slope(&xy)
    };

    let dmax = pts.iter().map(|p| p.density).fold(0.0, f64::max);
    let mut sym: f64 = 0.0;
    for p in pts {
        let other = interpolate_density(&polyline, length - p.s);
        sym = sym.max((other - p.density).abs());
    }

    Ok(MeasureSummary {
        mass_contour: phase.mass_by_contour(256)?,
        mass_cdf: pts[n - 1].cdf,
        min_interior_density,
        exponent_z1: fit(true),
        exponent_z2: fit(false),
        symmetry_defect: sym / dmax,
        cdf_monotone,
        polyline,
    })
}

fn interpolate_density(c: &CurvePolyline, s: f64) -> f64 {
    let pts = &c.points;
    let k = pts.partition_point(|p| p.s < s).clamp(1, pts.len() - 1);
    let (a, b) = (&pts[k - 1], &pts[k]);
    if b.s <= a.s {
        return a.density;
    }
    let t = ((s - a.s) / (b.s - a.s)).clamp(0.0, 1.0);
    a.density + t * (b.density - a.density)
}

/// Least-squares slope.
pub(crate) fn slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    if xy.len() < 2 {
        return f64::NAN;
    }
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy)]
pub struct SPropertySample {
    pub h: f64,
    /// Difference of the one-sided normal derivatives of `2 U^mu + Re V`.
    pub mismatch: f64,
}

#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub ell: f64,
    pub ell_tilde: f64,
    pub samples: usize,
    /// `max |Re(V - 2 g_pm) - ell|` over interior samples of `gamma`.
    pub equality_max: f64,
    /// `min Re(V - 2g) - ell` over samples of `gamma_1` and `gamma_2`.
    pub inequality_min: f64,
    /// `Re(V - 2g) - ell` at the midpoint sample of `gamma_2`.
    pub inequality_gamma2_mid: f64,
    pub s_property: Vec<SPropertySample>,
    /// Smallest two-point order of the mismatch under halving of `h`.
    pub s_property_order: f64,
}

/// One-sided boundary values by Richardson extrapolation from the offsets
/// `h` and `h/2`.
fn boundary_value(mq: &MeasureQuadrature, z: &Complex, normal: &Complex, side: f64, h: f64) -> Result<f64> {
    let at = |d: f64| -> Result<f64> { mq.total_potential(&(z + &(normal * (side * d)))) };
    Ok(2.0 * at(0.5 * h)? - at(h)?)
}

/// Derivative along `side * normal` at the curve from the offsets
/// `h, 2h, 3h`: `(-5/2 F(h) + 4 F(2h) - 3/2 F(3h)) / h`.
fn one_sided_derivative(mq: &MeasureQuadrature, z: &Complex, normal: &Complex, side: f64, h: f64) -> Result<f64> {
    let at = |d: f64| -> Result<f64> { mq.total_potential(&(z + &(normal * (side * d)))) };
    Ok((-2.5 * at(h)? + 4.0 * at(2.0 * h)? - 1.5 * at(3.0 * h)?) / h)
}

/// Equality on `gamma`, strict inequality on the extensions, and the
/// S-property, all from the potential of the measure computed by quadrature.
pub fn verify_equilibrium(phase: &PhaseContext, samples: usize) -> Result<EquilibriumReport> {
    let mq = MeasureQuadrature::new(phase)?;
    let ell = phase.ell.to_f64();
    let mut equality: f64 = 0.0;
    for j in 0..samples {
        let t = (j as f64 + 0.5) / samples as f64;
        let z = phase.point_at_cdf(t)?;
        let nrm = phase.normal_plus(&z);
        for side in [1.0, -1.0] {
            let w = boundary_value(&mq, &z, &nrm, side, 1e-5)?;
            equality = equality.max((w - ell).abs());
        }
    }

    let mut ineq = f64::INFINITY;
    let mut mid2 = f64::NAN;
    for c in [&phase.gamma1, &phase.gamma2].into_iter().flatten() {
        let len = c.length();
        for j in 1..=10 {
            let s = len * j as f64 / 10.0;
            let k = c.points.partition_point(|p| p.s < s).min(c.points.len() - 1);
            let z = &c.points[k].z;
            let v = mq.total_potential(z)? - ell;
            ineq = ineq.min(v);
            if j == 5 && c.kind == super::CurveKind::Gamma2 {
                mid2 = v;
            }
        }
    }

    let z = phase.point_at_cdf(0.5)?;
    let nrm = phase.normal_plus(&z);
    let mut s_property = Vec::new();
    for h in [0.04, 0.02, 0.01, 0.005] {
        let up = one_sided_derivative(&mq, &z, &nrm, 1.0, h)?;
        let down = one_sided_derivative(&mq, &z, &nrm, -1.0, h)?;
        s_property.push(SPropertySample {
            h,
            mismatch: (up - down).abs(),
        });
    }
    let order = s_property
        .windows(2)
        .map(|w| (w[0].mismatch / w[1].mismatch).ln() / (w[0].h / w[1].h).ln())
        .fold(f64::INFINITY, f64::min);

    Ok(EquilibriumReport {
        ell,
        ell_tilde: phase.ell_tilde,
        samples,
        equality_max: equality,
        inequality_min: ineq,
        inequality_gamma2_mid: mid2,
        s_property,
        s_property_order: order,
    })
}

/// Point masses on the curve system.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub atoms: Vec<(Complex, f64)>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `n` equal atoms at the cdf midpoints `(j + 1/2)/n` of `mu`.
    pub fn quantiles(phase: &PhaseContext, n: usize) -> Result<Self> {
        let atoms = (0..n)
            .map(|j| Ok((phase.point_at_cdf((j as f64 + 0.5) / n as f64)?, 1.0 / n as f64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiscreteMeasure { atoms })
    }
}

/// `sum_{i != j} m_i m_j log(1/|x_i - x_j|) + sum_i m_i Re V(x_i)`.
pub fn weighted_energy(nu: &DiscreteMeasure) -> Result<f64> {
    let a = &nu.atoms;
    let mut e = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            let d = a[i].0.dist_f64(&a[j].0);
            if d == 0.0 {
                return Err(Error::CoincidentAtoms { first: i, second: j });
            }
            e += a[i].1 * a[j].1 * (-d.ln());
        }
        e += a[i].1 * v_eval(&a[i].0).re.to_f64();
    }
    Ok(e)
}
