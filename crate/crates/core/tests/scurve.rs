use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use oscgauss::scurve::*;
use oscgauss::{Complex, Error, PrecisionContext};

fn context() -> &'static PhaseContext {
    static PC: OnceLock<PhaseContext> = OnceLock::new();
    PC.get_or_init(|| {
        let qd = QuadDifferential::new(&PrecisionContext::standard());
        let opts = TraceOptions::default();
        let g = trace_gamma(&qd, &opts).unwrap();
        let g1 = trace_extension(&qd, CurveKind::Gamma1, &opts).unwrap();
        let g2 = trace_extension(&qd, CurveKind::Gamma2, &opts).unwrap();
        PhaseContext::new(qd, g, Some(g1), Some(g2)).unwrap()
    })
}

fn c(re: f64, im: f64) -> Complex {
    context().ctx().complex(re, im)
}

/// Distance between two values of a multivalued log-type function.
fn dist_mod_2pi_i(a: &Complex, b: &Complex) -> f64 {
    let (dr, di) = (a - b).to_f64();
    let k = (di / (2.0 * PI)).round();
    dr.hypot(di - 2.0 * PI * k)
}

#[test]
fn q_values() {
    let pc = context();
    assert!(pc.qd.q_eval(&pc.qd.z1).abs_f64() < 1e-40);
    let c0 = pc.qd.q_eval(&c(0.0, 0.0)).to_f64();
    assert_eq!(c0, (-0.75, 0.0));
}

#[test]
fn q_sqrt_at_infinity() {
    let pc = context();
    let z = c(1e3, 1e3);
    let want = &(z.square().mul_neg_i() / 2u32) - &z.recip();
    let got = pc.q_sqrt(&z).unwrap();
    assert!((&got - &want).abs_f64() <= 10.0 / z.abs_f64().powi(2));
}

#[test]
fn trace_reaches_z2() {
    let pc = context();
    let qd = &pc.qd;
    let d = gamma_diagnostics(qd, &pc.gamma).unwrap();
    assert!(d.endpoint_gap <= 10.0 * TraceOptions::default().step_tolerance);
    assert!(d.max_abs_im_d <= 1e-9);
    assert!(d.axis_crossing > 1.0 - SQRT_2 && d.axis_crossing < 1.0);
    assert!((d.initial_angle - qd.critical_angles(Endpoint::Z1)[0]).abs() < 1e-3);
    assert!(d.shaded_in_triangle);
    assert!(d.shaded_arg_range.0 > -PI / 4.0 && d.shaded_arg_range.1 < 0.0);
    assert!(d.tangent_identity < 1e-3);
    let first = pc.gamma.points.first().unwrap();
    let last = pc.gamma.points.last().unwrap();
    assert!(first.z.dist_f64(&qd.z1) < 1e-12 && last.z.dist_f64(&qd.z2) < 1e-12);
}

#[test]
fn rejects_nonpositive_tolerance() {
    let pc = context();
    let bad = TraceOptions {
        step_tolerance: 0.0,
        ..TraceOptions::default()
    };
    assert!(matches!(trace_gamma(&pc.qd, &bad), Err(Error::InvalidInput(_))));
}

#[test]
fn extensions() {
    let pc = context();
    let g1 = pc.gamma1.as_ref().unwrap();
    let g2 = pc.gamma2.as_ref().unwrap();
    assert!(g2.points[0].z.dist_f64(&pc.qd.z2) < 1e-12);
    assert!(g1.points[0].z.dist_f64(&pc.qd.z1) < 1e-12);
    let mut last = -1.0;
    for p in g2.points.iter().skip(1).step_by(50) {
        let phi = pc.phi2(&p.z).unwrap().to_f64();
        assert!(phi.1.abs() < 1e-8, "{phi:?}");
        assert!(phi.0 > last);
        last = phi.0;
    }
    for p in g1.points.iter().skip(1).step_by(50) {
        let phi = pc.phi1(&p.z).unwrap().to_f64();
        assert!(phi.0 > 0.0 && phi.1.abs() < 1e-8, "{phi:?}");
        let (x, y) = p.z.to_f64();
        assert!(g2.distance((-x, y)) < 1e-6);
    }
}

#[test]
fn phases_continuous_off_their_cuts() {
    let pc = context();
    let eps = 1e-12;
    // across the horizontal ray left of z1, below gamma_1
    for x in [-1.6, -2.5, -4.0] {
        let a = pc.phi2(&c(x, 1.0 + eps)).unwrap();
        let b = pc.phi2(&c(x, 1.0 - eps)).unwrap();
        assert!((&a - &b).abs_f64() < 1e-9, "{x}");
    }
    // phi_1 is analytic across gamma_1, phi_2 across gamma_2
    let g1 = pc.gamma1.as_ref().unwrap();
    let g2 = pc.gamma2.as_ref().unwrap();
    for (curve, first) in [(g1, true), (g2, false)] {
        for p in curve.points.iter().skip(100).step_by(300) {
            let (x, y) = p.z.to_f64();
            let up = c(x, y + 1e-6);
            let down = c(x, y - 1e-6);
            let (a, b) = if first {
                (pc.phi1(&up).unwrap(), pc.phi1(&down).unwrap())
            } else {
                (pc.phi2(&up).unwrap(), pc.phi2(&down).unwrap())
            };
            assert!((&a - &b).abs_f64() < 1e-4, "{x} {y}");
        }
    }
}

#[test]
fn gamma_is_symmetric() {
    let pc = context();
    for p in pc.gamma.points.iter().step_by(37) {
        let (x, y) = p.z.to_f64();
        assert!(pc.gamma.distance((-x, y)) < 1e-6);
    }
}

#[test]
fn phi2_vanishes_at_z2_and_is_imaginary_on_gamma() {
    let pc = context();
    assert!(pc.phi2_side(&pc.qd.z2, true).abs_f64() < 1e-40);
    for p in pc.gamma.points[1..pc.gamma.len() - 1].iter().step_by(29) {
        for above in [true, false] {
            assert!(pc.phi2_side(&p.z, above).re.to_f64().abs() < 1e-9);
        }
    }
    let d = pc.d_plus_near(&pc.qd.z2, 1.0);
    assert!((d.re.to_f64() - 1.0).abs() < 1e-40 && d.im.to_f64().abs() < 1e-40);
}

#[test]
fn phi2_derivative() {
    let pc = context();
    let ctx = pc.ctx();
    let z = c(2.0, 2.0);
    let h = ctx.pow10(-(ctx.decimal_digits() as i32) / 3);
    let hz = Complex::from_real(h.clone());
    let fd = (&pc.phi2(&(&z + &hz)).unwrap() - &pc.phi2(&(&z - &hz)).unwrap()) / &Complex::from_real(h.clone() * 2u32);
    let q = pc.q_sqrt(&z).unwrap();
    assert!((&fd - &q).abs_f64() <= h.to_f64().powi(2) * 10.0 * q.abs_f64());
}

/// Probes joined to `z2` by straight segments that miss the curve system.
fn probes() -> Vec<Complex> {
    let mut out = Vec::new();
    for k in 0..10 {
        let t = k as f64 / 9.0;
        out.push(c(1.7 + 2.0 * t, -2.0 + 5.0 * t));
        out.push(c(-1.2 + 3.0 * t, 2.0 + (3.0 * t).sin()));
    }
    out
}

#[test]
fn phi2_formula_matches_path_integral() {
    let pc = context();
    let ctx = pc.ctx();
    let tol = 10f64.powi(-(ctx.decimal_digits() as i32) / 2);
    for z in probes() {
        let integral = pc.segment_integral(&pc.qd.z2, &z).unwrap();
        let formula = pc.phi2(&z).unwrap();
        assert!((&integral - &formula).abs_f64() < tol * formula.abs_f64().max(1.0), "{z}");
    }
}

#[test]
fn g_at_infinity() {
    let pc = context();
    let z = c(1e3, 0.0);
    let g = pc.g_eval(&z).unwrap();
    assert!(dist_mod_2pi_i(&g, &z.ln()) < 2e-3);
}

#[test]
fn g_formula_matches_quadrature() {
    let pc = context();
    let mq = MeasureQuadrature::new(pc).unwrap();
    for z in [c(3.0, 4.0), c(-2.0, -1.5), c(0.0, 3.0)] {
        let a = pc.g_eval(&z).unwrap();
        let b = mq.g(&z);
        assert!(dist_mod_2pi_i(&a, &b) < 1e-10, "{z}: {a} vs {b}");
    }
}

#[test]
fn g_prime_matches_finite_difference() {
    let pc = context();
    let h = 1e-12;
    let mut pts = probes();
    pts.push(c(2.0, -1.0));
    for z in pts {
        let hz = c(h, 0.0);
        let fd = (&pc.g_eval(&(&z + &hz)).unwrap() - &pc.g_eval(&(&z - &hz)).unwrap()) / (2.0 * h);
        let gp = pc.g_prime(&z).unwrap();
        let want = &(v_prime(&z) / 2u32) - &pc.q_sqrt(&z).unwrap();
        assert!((&gp - &want).abs_f64() < 1e-40);
        assert!((&fd - &gp).abs_f64() < 1e-10 * gp.abs_f64().max(1.0), "{z}");
    }
}

#[test]
fn measure_is_a_probability_density() {
    let pc = context();
    let m = equilibrium_measure(pc).unwrap();
    assert!((m.mass_contour - 1.0).abs() < 1e-10);
    assert!((m.mass_cdf - 1.0).abs() < 1e-10);
    assert!(m.min_interior_density > 0.0 && m.cdf_monotone);
    assert!((m.exponent_z1 - 0.5).abs() < 0.05 && (m.exponent_z2 - 0.5).abs() < 0.05);
    assert!(m.symmetry_defect < 1e-2);
}

#[test]
fn inverse_cdf_round_trip() {
    let pc = context();
    for t in [1e-30, 1e-8, 0.25, 0.5, 0.75, 1.0 - 1e-12] {
        let z = pc.point_at_cdf(t).unwrap();
        assert!(pc.gamma.distance(z.to_f64()) < 1e-6);
        let d = pc.d_plus_near(&z, t);
        assert!((d.re.to_f64() - t).abs() < 1e-20);
    }
}

#[test]
fn energy_of_simple_measures() {
    let pc = context();
    let one = DiscreteMeasure {
        atoms: vec![(c(0.0, 0.0), 1.0)],
    };
    assert_eq!(weighted_energy(&one).unwrap(), 0.0);

    // Re V(x + i) = (3x^2 - 1)/3 = 5/3 at both endpoints; the pair enters twice
    let ends = DiscreteMeasure {
        atoms: vec![(pc.qd.z1.clone(), 0.5), (pc.qd.z2.clone(), 0.5)],
    };
    let want = 0.5 * (1.0 / (2.0 * SQRT_2)).ln() + 5.0 / 3.0;
    assert!((weighted_energy(&ends).unwrap() - want).abs() < 1e-14);

    let twice = DiscreteMeasure {
        atoms: vec![(c(1.0, 0.0), 0.5), (c(1.0, 0.0), 0.5)],
    };
    assert_eq!(weighted_energy(&twice), Err(Error::CoincidentAtoms { first: 0, second: 1 }));
}

#[test]
fn quantile_atoms_beat_perturbed_atoms() {
    let pc = context();
    let nu = DiscreteMeasure::quantiles(pc, 40).unwrap();
    assert!((nu.total_mass() - 1.0).abs() < 1e-14);
    let e0 = weighted_energy(&nu).unwrap();
    let len = pc.gamma.length();
    for seed in 0u64..4 {
        let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let atoms = nu
            .atoms
            .iter()
            .map(|(z, m)| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let sign = if state & 1 == 0 { 1.0 } else { -1.0 };
                let s = (pc.gamma.project_arc(z.to_f64()) + sign * 0.05).clamp(0.0, len);
                let (x, y) = pc.gamma.at_arc(s);
                (c(x, y), *m)
            })
            .collect();
        let e = weighted_energy(&DiscreteMeasure { atoms }).unwrap();
        assert!(e > e0, "seed {seed}: {e} <= {e0}");
    }
}

#[test]
fn field_signs() {
    let pc = context();
    let theta = pc.qd.critical_angles(Endpoint::Z1)[0];
    let (x1, y1) = pc.qd.z1.to_f64();
    let q = pc.qd.q_eval(&c(x1 + 0.05 * theta.cos(), y1 + 0.05 * theta.sin())).to_f64();
    assert!(q.0 < 0.0 && q.1 < 0.0);

    let g2 = pc.gamma2.as_ref().unwrap();
    let mid = &g2.points[g2.len() / 2].z;
    assert!(pc.phi2(mid).unwrap().re.to_f64() > 0.0);
    // just off the middle of gamma, on both sides
    for z in [c(0.0, 0.55), c(0.0, 0.72)] {
        assert!(pc.phi2(&z).unwrap().re.to_f64() < 0.0, "{z}");
    }

    let grid = GridSpec {
        x_min: -2.0,
        x_max: 2.0,
        nx: 21,
        y_min: -1.0,
        y_max: 2.0,
        ny: 16,
    };
    let values = sample_field_grid(pc, Field::ImD, &grid).unwrap();
    assert_eq!(values.len(), 21 * 16);
    assert!(values.iter().any(|v| v.value.is_none()));
    let mut csv = Vec::new();
    write_grid_csv(&values, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("x,y,value\n") && text.contains("nan"));
    assert!(sample_field_grid(pc, Field::ReQ, &grid).unwrap().iter().all(|v| v.value.is_some()));
}

#[test]
fn curve_json_round_trip() {
    let pc = context();
    let m = equilibrium_measure(pc).unwrap();
    let doc = write_curve_json(&m.polyline, 40);
    let text = serde_json::to_string(&doc).unwrap();
    let back = read_curve_json(&serde_json::from_str(&text).unwrap(), pc.ctx()).unwrap();
    assert_eq!(back.len(), 1);
    let curve = &back[0];
    assert_eq!(curve.kind, CurveKind::Gamma);
    assert_eq!(curve.len(), m.polyline.len());
    assert!((curve.points.last().unwrap().cdf - 1.0).abs() < 1e-8);
    let mass: f64 = curve
        .points
        .windows(2)
        .map(|w| 0.5 * (w[0].density + w[1].density) * (w[1].s - w[0].s))
        .sum();
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    let rebuilt = PhaseContext::new(pc.qd.clone(), curve.clone(), None, None).unwrap();
    let again = equilibrium_measure(&rebuilt).unwrap();
    assert!((again.mass_cdf - m.mass_cdf).abs() < 1e-8);
}
