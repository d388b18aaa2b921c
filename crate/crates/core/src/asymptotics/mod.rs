//! Large-degree asymptotics of the rescaled polynomials `P_n` for `r = 3`:
//! the outer formula away from `gamma`, the oscillatory formula in a band
//! around it, and the Airy formula near the endpoints, together with the
//! exact polynomials they are compared against.

mod report;

pub use report::{
    airy_model_residual, asymptotic_report, zero_distribution_report, AsymptoticReport, ExactPolynomial, ProbeResult,
    ZeroDistribution,
};

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{airy_pair, Complex, PrecisionContext};
use crate::scurve::{v_eval, Endpoint, PhaseContext};

/// Where a point sits relative to `gamma` and its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Outer,
    BandAbove,
    BandBelow,
    Disk1,
    Disk2,
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::Outer => "outer",
            Region::BandAbove => "band_above",
            Region::BandBelow => "band_below",
            Region::Disk1 => "disk1",
            Region::Disk2 => "disk2",
        }
    }
}

/// Sizes of the endpoint disks and of the band around `gamma`.
#[derive(Debug, Clone, Copy)]
pub struct RegionParams {
    pub delta: f64,
    pub tube_width: f64,
}

impl Default for RegionParams {
    fn default() -> Self {
        RegionParams {
            delta: 0.5,
            tube_width: 0.25,
        }
    }
}

/// An approximation to `P_n(z)` with the size of its leading terms, the
/// scale against which its error is measured.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub value: Complex,
    pub scale: f64,
}

/// `beta`, `N`, the conformal map at `z2` and the three formulas of the
/// strong asymptotics, on a frozen [`PhaseContext`].
#[derive(Debug, Clone)]
pub struct AsymptoticEvaluator {
    pub phase: PhaseContext,
    pub params: RegionParams,
    /// `f'(z2)`, which selects the conformal branch of `f`.
    f_slope: Complex,
}

impl AsymptoticEvaluator {
    pub fn new(phase: PhaseContext, params: RegionParams) -> Self {
        let qd = &phase.qd;
        let prec = qd.ctx().bits();
        // Q ~ Q'(z2)(z - z2) gives f^3 ~ Q'(z2)(z - z2)^3, and f > 0 along gamma_2
        let dq = qd.q_prime(&qd.z2);
        let modulus = Float::with_val(prec, dq.abs().cbrt());
        let psi = Float::with_val(prec, -qd.extension_angle(Endpoint::Z2));
        let f_slope = Complex::from_polar(&modulus, &psi);
        AsymptoticEvaluator { phase, params, f_slope }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        self.phase.ctx()
    }

    /// `beta(z) = ((z - z2)/(z - z1))^{1/4}`, cut along `gamma`, `beta -> 1`
    /// at infinity.
    pub fn beta(&self, z: &Complex) -> Result<Complex> {
        self.phase.cut().quartic_ratio(z)
    }

    /// Entries `[[N11, N12], [N21, N22]]` of the global parametrix.
    pub fn n_matrix(&self, z: &Complex) -> Result<[[Complex; 2]; 2]> {
        let b = self.beta(z)?;
        Ok(n_from_beta(&b))
    }

    pub fn classify(&self, z: &Complex) -> Region {
        let qd = &self.phase.qd;
        if z.dist_f64(&qd.z2) < self.params.delta {
            Region::Disk2
        } else if z.dist_f64(&qd.z1) < self.params.delta {
            Region::Disk1
        } else if self.phase.gamma.distance(z.to_f64()) < self.params.tube_width {
            if self.phase.above_curves(z) {
                Region::BandAbove
            } else {
                Region::BandBelow
            }
        } else {
            Region::Outer
        }
    }

    /// `f(z) = ((3/2) phi_2(z))^{2/3}`, the branch conformal at `z2` that is
    /// positive on `gamma_2` and negative on `gamma`.
    pub fn conformal_f(&self, z: &Complex) -> Result<Complex> {
        let qd = &self.phase.qd;
        if z.dist_f64(&qd.z2) >= self.params.delta {
            return Err(Error::OutsideDisk {
                point: format!("{z}"),
                radius: self.params.delta,
            });
        }
        let offset = z - &qd.z2;
        if offset.is_zero() {
            return Ok(Complex::zero(z.prec()));
        }
        // phi_2 changes sign across gamma, its square does not
        let phi = self.phase.phi2(z)?;
        let cube = (&phi.square() * 9u32) / 4u32;
        let guess = &self.f_slope * &offset;
        let third = Float::with_val(z.prec(), 1) / 3u32;
        let root = cube.powf(&third);
        let prec = z.prec();
        let best = (0..3)
            .map(|k| &root * &Complex::cis_pi_rational(prec, 2 * k, 3))
            .min_by(|a, b| a.dist_f64(&guess).total_cmp(&b.dist_f64(&guess)))
            .expect("three roots");
        Ok(best)
    }

    /// `e^{n(V/2 - l)}`.
    fn prefactor(&self, z: &Complex, n: usize) -> Complex {
        let e = &(v_eval(z) / 2u32) - &Complex::from_real(self.phase.l.clone());
        (&e * n as u32).exp()
    }

    /// `N11(z) e^{n g(z)}`.
    pub fn pn_outer(&self, z: &Complex, n: usize) -> Result<Approximation> {
        let region = self.classify(z);
        if region != Region::Outer {
            return Err(Error::Region {
                point: format!("{z}"),
                formula: "the outer formula",
            });
        }
        let n11 = self.n_matrix(z)?[0][0].clone();
        let g = self.phase.g_eval(z)?;
        let value = &n11 * &(&g * n as u32).exp();
        let scale = value.abs_f64();
        Ok(Approximation { value, scale })
    }

    /// `e^{n(V/2 - l)} (e^{-n phi_2} N11 +- e^{n phi_2} N12)`, `+` above
    /// `gamma` and `-` below.
    pub fn pn_band(&self, z: &Complex, n: usize) -> Result<Approximation> {
        let sign = match self.classify(z) {
            Region::BandAbove => 1,
            Region::BandBelow => -1,
            _ => {
                return Err(Error::Region {
                    point: format!("{z}"),
                    formula: "the band formula",
                })
            }
        };
        let nm = self.n_matrix(z)?;
        let e = (&self.phase.phi2(z)? * n as u32).exp();
        let a = &nm[0][0] / &e;
        let b = &nm[0][1] * &e;
        let pre = self.prefactor(z, n);
        let sum = if sign > 0 { &a + &b } else { &a - &b };
        let scale = pre.abs_f64() * a.abs_f64().max(b.abs_f64());
        Ok(Approximation {
            value: &pre * &sum,
            scale,
        })
    }

    /// `sqrt(pi) e^{n(V/2 - l)} (n^{1/6} f^{1/4} beta^{-1} Ai(n^{2/3} f)
    /// - n^{-1/6} f^{-1/4} beta Ai'(n^{2/3} f))` in the disk around `z2`;
    /// in the disk around `z1` through `P_n(-conj z) = (-1)^n conj P_n(z)`.
    pub fn pn_airy(&self, z: &Complex, n: usize) -> Result<Approximation> {
        match self.classify(z) {
            Region::Disk2 => self.airy_at_z2(z, n),
            Region::Disk1 => {
                let a = self.airy_at_z2(&z.reflect(), n)?;
                let v = a.value.conj();
                Ok(Approximation {
                    value: if n % 2 == 1 { -v } else { v },
                    scale: a.scale,
                })
            }
            _ => Err(Error::OutsideDisk {
                point: format!("{z}"),
                radius: self.params.delta,
            }),
        }
    }

    fn airy_at_z2(&self, z: &Complex, n: usize) -> Result<Approximation> {
        let ctx = *self.ctx();
        let prec = ctx.bits();
        let f = self.conformal_f(z)?;
        if f.is_zero() || self.phase.cut().distance(z) <= self.phase.cut().resolution() {
            return Err(Error::OnCut {
                point: format!("{z}"),
                resolution: self.phase.cut().resolution(),
            });
        }
        let beta = self.beta(z)?;
        let nf = Float::with_val(prec, n as u32);
        let n16 = Float::with_val(prec, nf.clone().root(6));
        let n23 = Float::with_val(prec, nf.clone().square().cbrt());
        let quarter = f.sqrt().sqrt();
        let (ai, aip) = airy_pair(&f.scale(&n23), &ctx);
        let t1 = &(&(&quarter / &beta) * &ai).scale(&n16);
        let t2 = &(&(&beta / &quarter) * &aip) / &Complex::from_real(n16.clone());
        let pre = self.prefactor(z, n);
        let root_pi = Float::with_val(prec, rug::float::Constant::Pi).sqrt();
        let value = (&pre * &(t1 - &t2)).scale(&root_pi);
        let scale = pre.abs_f64() * root_pi.to_f64() * t1.abs_f64().max(t2.abs_f64());
        Ok(Approximation { value, scale })
    }

    /// Whichever formula applies at `z`.
    pub fn pn_auto(&self, z: &Complex, n: usize) -> Result<(Region, Approximation)> {
        let region = self.classify(z);
        let a = match region {
            Region::Outer => self.pn_outer(z, n)?,
            Region::BandAbove | Region::BandBelow => self.pn_band(z, n)?,
            Region::Disk1 | Region::Disk2 => self.pn_airy(z, n)?,
        };
        Ok((region, a))
    }
}

pub(crate) fn n_from_beta(b: &Complex) -> [[Complex; 2]; 2] {
    let inv = b.recip();
    let n11 = &(b + &inv) / 2u32;
    let n12 = (b - &inv).mul_neg_i() / 2u32;
    [[n11.clone(), n12.clone()], [-n12, n11]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_identity() {
        let ctx = PrecisionContext::standard();
        for (re, im) in [(0.3, -0.2), (1.0, 3.0), (-2.0, 0.5)] {
            let b = ctx.complex(re, im);
            let n = n_from_beta(&b);
            let det = &(&n[0][0] * &n[1][1]) - &(&n[0][1] * &n[1][0]);
            assert!((&det - &ctx.one()).abs_f64() < 1e-35);
        }
    }
}
