use rug::Float;

use super::trace::CurvePolyline;
use super::{v_eval, v_prime, Endpoint, QuadDifferential};
use crate::error::{Error, Result};
use crate::precision::{Complex, PrecisionContext, Real, TwoPointCut};
use crate::quadrature::adaptive;

/// `-(i/6) z (z + i) R - L + (1/2) log 2`, an antiderivative of
/// `-(i/2)(z + i) R` for either sign of `R` and any branch `L` of
/// `log(z - i + R)`.
pub(crate) fn phase_formula(z: &Complex, r: &Complex, log: &Complex) -> Complex {
    let prec = z.prec();
    let zi = z + &Complex::i(prec);
    let poly = (&(z * &zi) * r).mul_neg_i() / 6u32;
    let half_ln2 = Float::with_val(prec, rug::float::Constant::Log2) / 2u32;
    &(&poly - log) + &Complex::from_real(half_ln2)
}

pub(crate) fn log_argument(z: &Complex, r: &Complex) -> Complex {
    &(z - &Complex::i(z.prec())) + r
}

/// Principal logarithm shifted by a multiple of `2 pi i` to lie closest to
/// `reference`.
pub(crate) fn continued_log(w: &Complex, reference: &Real) -> Complex {
    let mut l = w.ln();
    let two_pi = Float::with_val(l.prec(), rug::float::Constant::Pi) * 2u32;
    let k = Float::with_val(l.prec(), reference - &l.im) / &two_pi;
    let k = k.round();
    l.im += k * two_pi;
    l
}

/// Square root of `(z - z1)(z - z2)` and logarithm of `z - i + R`, both
/// continued along a path.
#[derive(Debug, Clone)]
pub(crate) struct Walker {
    pub r: Complex,
    pub log: Complex,
}

impl Walker {
    pub fn new(z: &Complex, r: Complex, log_reference: &Real) -> Self {
        let log = continued_log(&log_argument(z, &r), log_reference);
        Walker { r, log }
    }

    /// The root of `(z - z1)(z - z2)` nearest the current one.
    pub fn nearest_root(&self, qd: &QuadDifferential, z: &Complex) -> Complex {
        let r = qd.root_product(z).sqrt();
        if (&r - &self.r).abs() > (&r + &self.r).abs() {
            -r
        } else {
            r
        }
    }

    pub fn advance(&mut self, qd: &QuadDifferential, z: &Complex) {
        let r = self.nearest_root(qd, z);
        self.log = continued_log(&log_argument(z, &r), &self.log.im);
        self.r = r;
    }

    pub fn phase(&self, z: &Complex) -> Complex {
        phase_formula(z, &self.r, &self.log)
    }
}

/// Frozen geometry of the cubic problem: the traced curves, the cut they
/// define, and the branch choices that make the closed-form phase agree with
/// its integral definition.
#[derive(Debug, Clone)]
pub struct PhaseContext {
    pub qd: QuadDifferential,
    pub gamma: CurvePolyline,
    pub gamma1: Option<CurvePolyline>,
    pub gamma2: Option<CurvePolyline>,
    /// `1/3 + (1/2) log 2`.
    pub l: Real,
    /// `2 l`, the real equilibrium constant.
    pub ell: Real,
    /// `Im(V - g_+ - g_-)` on `gamma`, reduced to `(-pi, pi]`.
    pub ell_tilde: f64,
    cut: TwoPointCut,
    formula_sign: i32,
    formula_half_turns: i64,
    /// `phi_1 = phi_2 + k pi i` above and below the curve system.
    phi1_above: i64,
    phi1_below: i64,
}

impl PhaseContext {
    pub fn new(
        qd: QuadDifferential,
        gamma: CurvePolyline,
        gamma1: Option<CurvePolyline>,
        gamma2: Option<CurvePolyline>,
    ) -> Result<Self> {
        let ctx = *qd.ctx();
        let vertices: Vec<(f64, f64)> = gamma.points.iter().map(|p| p.z.to_f64()).collect();
        let resolution = cut_resolution(&vertices);
        let cut = TwoPointCut::new(&qd.z1, &qd.z2, vertices, resolution)?;
        let l = Float::with_val(ctx.bits(), ctx.ratio(1, 3) + ctx.ln2() / 2u32);
        let ell = Float::with_val(ctx.bits(), &l * 2u32);
        let mut pc = PhaseContext {
            qd,
            gamma,
            gamma1,
            gamma2,
            l,
            ell,
            ell_tilde: 0.0,
            cut,
            formula_sign: 1,
            formula_half_turns: 0,
            phi1_above: 0,
            phi1_below: 0,
        };
        pc.anchor_phi2()?;
        pc.anchor_phi1()?;
        pc.ell_tilde = pc.compute_ell_tilde()?;
        Ok(pc)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        self.qd.ctx()
    }

    pub fn cut(&self) -> &TwoPointCut {
        &self.cut
    }

    /// Branch choice of the closed form: `phi_2 = sign * F + k pi i`.
    pub fn phi2_branch(&self) -> (i32, i64) {
        (self.formula_sign, self.formula_half_turns)
    }

    /// Multiples of `pi i` in `phi_1 - phi_2` above and below
    /// `gamma_1 + gamma + gamma_2`.
    pub fn phi1_offsets(&self) -> (i64, i64) {
        (self.phi1_above, self.phi1_below)
    }

    pub fn r_eval(&self, z: &Complex) -> Result<Complex> {
        self.cut.sqrt_product(z)
    }

    /// `R` continued from one side of `gamma`; the `+` side lies above.
    pub fn r_side(&self, z: &Complex, above: bool) -> Complex {
        self.cut.sqrt_product_with(z, above)
    }

    pub fn q_sqrt(&self, z: &Complex) -> Result<Complex> {
        Ok(self.qd.q_from_root(z, &self.r_eval(z)?))
    }

    pub fn q_sqrt_side(&self, z: &Complex, above: bool) -> Complex {
        self.qd.q_from_root(z, &self.r_side(z, above))
    }

    fn formula(&self, z: &Complex, r: &Complex) -> Complex {
        let log = log_argument(z, r).ln();
        let f = phase_formula(z, r, &log);
        let f = if self.formula_sign < 0 { -f } else { f };
        let pi = Float::with_val(z.prec(), rug::float::Constant::Pi);
        let mut out = f;
        out.im += Float::with_val(z.prec(), &pi * self.formula_half_turns);
        // the principal logarithm jumps by 2 pi i across the ray left of z1;
        // shifting the strip between that ray and gamma_1 moves the jump
        // onto gamma_1
        if self.in_log_strip(z) {
            out.im += pi * (2 * self.formula_sign);
        }
        out
    }

    fn in_log_strip(&self, z: &Complex) -> bool {
        let (x, y) = z.to_f64();
        let (x1, y1) = self.qd.z1.to_f64();
        x < x1 && y > y1 && !self.above_curves(z)
    }

    /// `phi_2(z) = int_{z2}^z Q^{1/2}(s) ds`.
    pub fn phi2(&self, z: &Complex) -> Result<Complex> {
        let r = self.r_eval(z)?;
        Ok(self.formula(z, &r))
    }

    pub fn phi2_side(&self, z: &Complex, above: bool) -> Complex {
        self.formula(z, &self.r_side(z, above))
    }

    /// `phi_1(z) = int_{z1}^z Q^{1/2}(s) ds`, from `phi_2` and the offset
    /// recorded for the region of `z`.
    pub fn phi1(&self, z: &Complex) -> Result<Complex> {
        let mut p = self.phi2(z)?;
        let k = if self.above_curves(z) { self.phi1_above } else { self.phi1_below };
        p.im += Float::with_val(z.prec(), rug::float::Constant::Pi) * k;
        Ok(p)
    }

    /// `D(z) = phi_1(z) / (pi i)`.
    pub fn d_eval(&self, z: &Complex) -> Result<Complex> {
        let p = self.phi1(z)?;
        Ok(p.mul_neg_i() / &Float::with_val(z.prec(), rug::float::Constant::Pi))
    }

    /// `D_+` on `gamma` and near it, with its real part reduced to lie
    /// within one unit of `target`.
    pub fn d_plus_near(&self, z: &Complex, target: f64) -> Complex {
        self.d_with_root(z, &self.r_side(z, true), target)
    }

    /// As [`Self::d_plus_near`] with the square root `R` supplied.
    pub(crate) fn d_with_root(&self, z: &Complex, r: &Complex, target: f64) -> Complex {
        let log = log_argument(z, r).ln();
        let f = phase_formula(z, r, &log);
        // D = (F - F(z1)) / (pi i) with F(z1) = -pi i
        let pi = Float::with_val(z.prec(), rug::float::Constant::Pi);
        let mut d = &f.mul_neg_i() / &pi;
        d.re += 1u32;
        let shift = ((d.re.to_f64() - target) / 2.0).round();
        d.re -= 2.0 * shift;
        d
    }

    pub fn g_eval(&self, z: &Complex) -> Result<Complex> {
        let p = self.phi2(z)?;
        Ok(self.g_from_phi(z, &p))
    }

    pub fn g_side(&self, z: &Complex, above: bool) -> Complex {
        let p = self.phi2_side(z, above);
        self.g_from_phi(z, &p)
    }

    fn g_from_phi(&self, z: &Complex, phi: &Complex) -> Complex {
        let half_v = v_eval(z) / 2u32;
        &(&half_v - phi) - &Complex::from_real(self.l.clone())
    }

    /// `g'(z) = V'(z)/2 - Q^{1/2}(z)`.
    pub fn g_prime(&self, z: &Complex) -> Result<Complex> {
        Ok(&(v_prime(z) / 2u32) - &self.q_sqrt(z)?)
    }

    /// Whether `z` lies above `gamma_1 + gamma + gamma_2`.
    pub fn above_curves(&self, z: &Complex) -> bool {
        let (x, y) = z.to_f64();
        y > self.curve_height(x)
    }

    /// Ordinate of the curve system over abscissa `x`.
    pub fn curve_height(&self, x: f64) -> f64 {
        let (x1, _) = self.qd.z1.to_f64();
        let (x2, _) = self.qd.z2.to_f64();
        if x >= x1 && x <= x2 {
            return graph_height(&self.gamma, x).unwrap_or(1.0);
        }
        let (curve, start, angle) = if x > x2 {
            (&self.gamma2, self.qd.z2.to_f64(), self.qd.extension_angle(Endpoint::Z2))
        } else {
            (&self.gamma1, self.qd.z1.to_f64(), self.qd.extension_angle(Endpoint::Z1))
        };
        if let Some(c) = curve {
            if let Some(y) = graph_height(c, x) {
                return y;
            }
            let n = c.points.len();
            if n >= 2 {
                let a = c.points[n - 2].z.to_f64();
                let b = c.points[n - 1].z.to_f64();
                let slope = (b.1 - a.1) / (b.0 - a.0);
                return b.1 + slope * (x - b.0);
            }
        }
        start.1 + angle.tan() * (x - start.0)
    }

    /// Integral of `Q^{1/2}` along the segment from `from` (a zero of `Q`)
    /// to `to`, with the substitution `z = from + t^2 (to - from)` that
    /// removes the square-root singularity. `R` is continued along the
    /// segment and matched to the global branch at `to`, so the segment must
    /// not cross `gamma`.
    pub fn segment_integral(&self, from: &Complex, to: &Complex) -> Result<Complex> {
        let ctx = self.ctx();
        let prec = ctx.bits();
        let delta = to - from;
        let other = if from.dist_f64(&self.qd.z1) < from.dist_f64(&self.qd.z2) {
            self.qd.z2.clone()
        } else {
            self.qd.z1.clone()
        };
        let w0 = from - &other;
        // R = t sqrt(delta) S(t), S^2 = from - other + t^2 delta, continued from t = 0
        let flip = w0.re.is_sign_negative();
        let root_delta = delta.sqrt();
        let path_r = |t: &Real| -> Complex {
            let t2 = Float::with_val(prec, t.square_ref());
            let w = &w0 + &delta.scale(&t2);
            let s = if flip { (-&w).sqrt().mul_i() } else { w.sqrt() };
            (&root_delta * &s).scale(t)
        };
        let one = Float::with_val(prec, 1);
        let sign = if (&path_r(&one) - &self.r_eval(to)?).abs_f64() < 1e-10 { 1 } else { -1 };
        let f = |t: &Real| -> Result<Complex> {
            let t2 = Float::with_val(prec, t.square_ref());
            let z = from + &delta.scale(&t2);
            let r = path_r(t) * sign;
            let q = self.qd.q_from_root(&z, &r);
            Ok((&q * &delta).scale(t) * 2u32)
        };
        let tol = ctx.pow10(-(ctx.decimal_digits() as i32) - 2);
        adaptive(&f, &Float::new(prec), &one, 20, &tol, 30)
    }

    fn anchor_phi2(&mut self) -> Result<()> {
        let ctx = *self.ctx();
        let anchor = ctx.complex(2.0, 2.0);
        let path = self.segment_integral(&self.qd.z2.clone(), &anchor)?;
        let r = self.r_eval(&anchor)?;
        let log = log_argument(&anchor, &r).ln();
        let f = phase_formula(&anchor, &r, &log);
        let pi = ctx.pi();
        for sign in [1, -1] {
            let cand = if sign > 0 { f.clone() } else { -&f };
            let diff = &path - &cand;
            let turns = Float::with_val(ctx.bits(), &diff.im / &pi).round();
            let k = turns.to_f64() as i64;
            let mut rest = diff.clone();
            rest.im -= Float::with_val(ctx.bits(), &pi * k);
            if rest.abs_f64() < 1e-12 {
                self.formula_sign = sign;
                self.formula_half_turns = k;
                return Ok(());
            }
        }
        Err(Error::Precision(
            "closed-form phase does not match its integral at the anchor".into(),
        ))
    }

    fn anchor_phi1(&mut self) -> Result<()> {
        let ctx = *self.ctx();
        let pi = ctx.pi();
        let z1 = self.qd.z1.clone();
        for (anchor, above) in [(ctx.complex(0.0, 3.0), true), (ctx.complex(0.0, -2.0), false)] {
            let path = self.segment_integral(&z1, &anchor)?;
            let diff = &path - &self.phi2(&anchor)?;
            let k = Float::with_val(ctx.bits(), &diff.im / &pi).round().to_f64() as i64;
            let mut rest = diff.clone();
            rest.im -= Float::with_val(ctx.bits(), &pi * k);
            if rest.abs_f64() > 1e-12 || self.above_curves(&anchor) != above {
                return Err(Error::Precision("phi_1 anchor mismatch".into()));
            }
            if above {
                self.phi1_above = k;
            } else {
                self.phi1_below = k;
            }
        }
        Ok(())
    }

    fn compute_ell_tilde(&self) -> Result<f64> {
        let mid = &self.gamma.points[self.gamma.points.len() / 2].z;
        let a = self.phi2_side(mid, true);
        let b = self.phi2_side(mid, false);
        let s = (&a + &b).im.to_f64();
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut t = s.rem_euclid(two_pi);
        if t > std::f64::consts::PI {
            t -= two_pi;
        }
        Ok(t)
    }
}

/// Interpolated ordinate of a curve that is a graph over the real axis.
fn graph_height(c: &CurvePolyline, x: f64) -> Option<f64> {
    for w in c.points.windows(2) {
        let a = w[0].z.to_f64();
        let b = w[1].z.to_f64();
        let (lo, hi) = if a.0 <= b.0 { (a, b) } else { (b, a) };
        if x >= lo.0 && x <= hi.0 {
            if hi.0 == lo.0 {
                return Some(0.5 * (lo.1 + hi.1));
            }
            let t = (x - lo.0) / (hi.0 - lo.0);
            return Some(lo.1 + t * (hi.1 - lo.1));
        }
    }
    None
}

/// Twice the largest chord-to-arc gap of the polyline, estimated from the
/// turning angle between consecutive chords.
fn cut_resolution(v: &[(f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for w in v.windows(3) {
        let a = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let b = (w[2].0 - w[1].0, w[2].1 - w[1].1);
        let turn = (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1).abs();
        let len = a.0.hypot(a.1).max(b.0.hypot(b.1));
        worst = worst.max(len * turn / 8.0);
    }
    (2.0 * worst).max(1e-12)
}

pub(crate) fn endpoint_log_reference(qd: &QuadDifferential, which: Endpoint) -> Real {
    let prec = qd.ctx().bits();
    match which {
        // log(z1 - i) = log(-sqrt 2) has imaginary part pi
        Endpoint::Z1 => Float::with_val(prec, rug::float::Constant::Pi),
        Endpoint::Z2 => Float::new(prec),
    }
}

/// `F` at the endpoint with the reference logarithm: `-pi i` at `z1`, `0` at `z2`.
pub(crate) fn endpoint_phase(qd: &QuadDifferential, which: Endpoint) -> Complex {
    let z = qd.endpoint(which);
    let r = Complex::zero(z.prec());
    let log = continued_log(&log_argument(z, &r), &endpoint_log_reference(qd, which));
    phase_formula(z, &r, &log)
}
