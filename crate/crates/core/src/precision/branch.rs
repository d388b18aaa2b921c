use super::Complex;
use crate::error::{Error, Result};

/// Branches of `sqrt((z - z1)(z - z2))` and `((z - z2)/(z - z1))^{1/4}` cut
/// along an arbitrary polyline joining `z1` to `z2`.
///
/// Both functions are first evaluated with the straight cut `[z1, z2]`, written
/// in the coordinate `u = (z - m)/c` that maps the segment to `[-1, 1]`. Points
/// enclosed between the segment and the polyline then receive the correction
/// that moves the cut onto the polyline. Enclosure is decided by counting
/// crossings of the segment from a fixed anchor far above the cut.
#[derive(Debug, Clone)]
pub struct TwoPointCut {
    z1: Complex,
    z2: Complex,
    vertices: Vec<(f64, f64)>,
    resolution: f64,
    anchor: (f64, f64),
    /// Whether the enclosed region sits below the segment in the `u` plane.
    lens_below: bool,
}

impl TwoPointCut {
    /// `vertices` must run from `z1` to `z2`; `resolution` is the distance
    /// within which a point counts as lying on the cut.
    pub fn new(z1: &Complex, z2: &Complex, vertices: Vec<(f64, f64)>, resolution: f64) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("cut polyline needs at least two vertices".into()));
        }
        let top = vertices.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let span = vertices
            .iter()
            .flat_map(|p| [p.0.abs(), p.1.abs()])
            .fold(1.0, f64::max);
        let (a, b) = z1.to_f64();
        let (c, d) = z2.to_f64();
        let anchor = (0.5 * (a + c) + 0.123_456_789 * span, top + 10.0 * span);
        let mid = vertices[vertices.len() / 2];
        let (ur, ui) = to_u(mid, (a, b), (c, d));
        // a polyline hugging the segment leaves no lens, and either side will do
        let lens_below = ui < 0.0 && ur.is_finite();
        Ok(TwoPointCut {
            z1: z1.clone(),
            z2: z2.clone(),
            vertices,
            resolution,
            anchor,
            lens_below,
        })
    }

    /// The straight segment as cut.
    pub fn straight(z1: &Complex, z2: &Complex, resolution: f64) -> Result<Self> {
        Self::new(z1, z2, vec![z1.to_f64(), z2.to_f64()], resolution)
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn distance(&self, z: &Complex) -> f64 {
        polyline_distance(&self.vertices, z.to_f64())
    }

    /// Whether `z` lies strictly between the straight segment and the cut.
    pub fn inside_lens(&self, z: &Complex) -> Result<bool> {
        if self.distance(z) <= self.resolution {
            return Err(Error::OnCut {
                point: format!("{z}"),
                resolution: self.resolution,
            });
        }
        // right next to the segment the f64 crossing count is unreliable; the
        // side of the segment decides instead
        let (u, _) = self.u(z);
        if u.re.to_f64().abs() < 1.0 && u.im.to_f64().abs() < 1e-9 {
            return Ok(!u.im.is_zero() && u.im.is_sign_negative() == self.lens_below);
        }
        Ok(self.lens_parity(z.to_f64()))
    }

    fn lens_parity(&self, p: (f64, f64)) -> bool {
        let mut count = 0usize;
        for w in self.vertices.windows(2) {
            if segments_cross(self.anchor, p, w[0], w[1]) {
                count += 1;
            }
        }
        if segments_cross(self.anchor, p, self.z1.to_f64(), self.z2.to_f64()) {
            count += 1;
        }
        count % 2 == 1
    }

    fn u(&self, z: &Complex) -> (Complex, Complex) {
        let c = &(&self.z2 - &self.z1) / 2u32;
        let m = &(&self.z1 + &self.z2) / 2u32;
        (&(z - &m) / &c, c)
    }

    /// `R(z)` with `R^2 = (z - z1)(z - z2)` and `R(z) ~ z` at infinity.
    pub fn sqrt_product(&self, z: &Complex) -> Result<Complex> {
        let inside = self.inside_lens(z)?;
        Ok(self.sqrt_product_with(z, inside))
    }

    /// `R(z)` on an explicitly chosen side; used for boundary values on the cut.
    pub fn sqrt_product_with(&self, z: &Complex, inside_lens: bool) -> Complex {
        let (mut u, c) = self.u(z);
        let s = near_segment_sign(&mut u, inside_lens, self.lens_below);
        let r0 = &(&(&u - 1u32).sqrt() * &(&u + 1u32).sqrt()) * &c;
        if s {
            -r0
        } else {
            r0
        }
    }

    /// `beta(z)` with `beta^4 = (z - z2)/(z - z1)` and `beta -> 1` at infinity.
    pub fn quartic_ratio(&self, z: &Complex) -> Result<Complex> {
        let inside = self.inside_lens(z)?;
        Ok(self.quartic_ratio_with(z, inside))
    }

    pub fn quartic_ratio_with(&self, z: &Complex, inside_lens: bool) -> Complex {
        let (mut u, _) = self.u(z);
        // the straight-cut value jumps by a factor i across the segment going downward
        let flip = near_segment_sign(&mut u, inside_lens, self.lens_below);
        let b0 = &(&u - 1u32).sqrt().sqrt() / &(&u + 1u32).sqrt().sqrt();
        if !flip {
            return b0;
        }
        if self.lens_below {
            b0.mul_i()
        } else {
            b0.mul_neg_i()
        }
    }
}

/// Whether the straight-cut value must be corrected. On the open segment
/// itself the function is continuous; `u` is then normalized to the upper
/// side and the correction depends only on which side the lens is.
fn near_segment_sign(u: &mut Complex, inside_lens: bool, lens_below: bool) -> bool {
    if u.im.is_zero() && u.re.to_f64().abs() < 1.0 {
        u.im = rug::Float::new(u.im.prec());
        return !lens_below;
    }
    inside_lens
}

/// `R(z)` for the cut `cut` joining `z1` and `z2`.
pub fn branch_sqrt_product(z: &Complex, cut: &TwoPointCut) -> Result<Complex> {
    cut.sqrt_product(z)
}

fn to_u(p: (f64, f64), z1: (f64, f64), z2: (f64, f64)) -> (f64, f64) {
    let m = (0.5 * (z1.0 + z2.0), 0.5 * (z1.1 + z2.1));
    let c = (0.5 * (z2.0 - z1.0), 0.5 * (z2.1 - z1.1));
    let w = (p.0 - m.0, p.1 - m.1);
    let n = c.0 * c.0 + c.1 * c.1;
    ((w.0 * c.0 + w.1 * c.1) / n, (w.1 * c.0 - w.0 * c.1) / n)
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Proper-or-touching intersection test, with touching resolved by a
/// half-open convention so that a shared vertex is counted once.
fn segments_cross(p: (f64, f64), q: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let d1 = cross(a, b, p);
    let d2 = cross(a, b, q);
    let d3 = cross(p, q, a);
    let d4 = cross(p, q, b);
    ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0))
}

pub(crate) fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (x, y) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - x).hypot(p.1 - y)
}

pub(crate) fn polyline_distance(vertices: &[(f64, f64)], p: (f64, f64)) -> f64 {
    vertices
        .windows(2)
        .map(|w| segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::PrecisionContext;

    fn arc_cut(ctx: &PrecisionContext) -> TwoPointCut {
        let s = std::f64::consts::SQRT_2;
        // a circular arc below the segment, symmetric about the imaginary axis
        let verts: Vec<(f64, f64)> = (0..=200)
            .map(|j| {
                let t = std::f64::consts::PI * (1.0 - j as f64 / 200.0);
                (s * t.cos(), 1.0 - 0.4 * t.sin())
            })
            .collect();
        TwoPointCut::new(&ctx.complex(-s, 1.0), &ctx.complex(s, 1.0), verts, 1e-9).unwrap()
    }

    #[test]
    fn square_and_normalization() {
        let ctx = PrecisionContext::standard();
        let cut = arc_cut(&ctx);
        let (z1, z2) = (cut.z1.clone(), cut.z2.clone());
        for (x, y) in [(0.3, -0.7), (0.0, 0.8), (0.1, 0.9), (-1.0, 1.0), (5.0, -2.0)] {
            let z = ctx.complex(x, y);
            let r = cut.sqrt_product(&z).unwrap();
            let want = &(&z - &z1) * &(&z - &z2);
            assert!((&r.square() - &want).abs_f64() < 1e-35);
        }
        let z = ctx.complex(0.0, 1000.0);
        let r = cut.sqrt_product(&z).unwrap();
        assert!((&(&r / &z) - &ctx.one()).abs_f64() < 1e-3);
    }

    #[test]
    fn continuous_across_segment_jumps_across_arc() {
        let ctx = PrecisionContext::standard();
        let cut = arc_cut(&ctx);
        let above = cut.sqrt_product(&ctx.complex(0.2, 1.0 + 1e-9)).unwrap();
        let below = cut.sqrt_product(&ctx.complex(0.2, 1.0 - 1e-9)).unwrap();
        assert!((&above - &below).abs_f64() < 1e-6);
        let b_above = cut.quartic_ratio(&ctx.complex(0.2, 1.0 + 1e-9)).unwrap();
        let b_below = cut.quartic_ratio(&ctx.complex(0.2, 1.0 - 1e-9)).unwrap();
        assert!((&b_above - &b_below).abs_f64() < 1e-6);
        let y = 1.0 - 0.4 * (std::f64::consts::FRAC_PI_2).sin();
        let a = cut.sqrt_product(&ctx.complex(0.0, y + 1e-6)).unwrap();
        let b = cut.sqrt_product(&ctx.complex(0.0, y - 1e-6)).unwrap();
        assert!((&a + &b).abs_f64() < 1e-5);
        assert!(cut.sqrt_product(&ctx.complex(0.0, y)).is_err());
    }

    #[test]
    fn reflection_symmetry() {
        let ctx = PrecisionContext::standard();
        let cut = arc_cut(&ctx);
        let z = ctx.complex(1.0, 2.0);
        let r = cut.sqrt_product(&z).unwrap();
        let rr = cut.sqrt_product(&z.reflect()).unwrap();
        assert!((&rr + &r.conj()).abs_f64() < 1e-35);
    }
}
