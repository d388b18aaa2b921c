use oscgauss::opq::{build_recurrence, construct, moment, ray_integral, ray_moment, MomentSequence, WeightSpec};
use oscgauss::precision::gamma;
use oscgauss::{Complex, Error, PrecisionContext};
use proptest::prelude::*;

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    (a - b).abs_f64() <= tol * b.abs_f64().max(1.0)
}

#[test]
fn weight_spec_rejects_r_below_two() {
    assert!(matches!(WeightSpec::new(1), Err(Error::InvalidInput(_))));
    assert!(WeightSpec::new(2).is_ok());
}

#[test]
fn zeroth_moment_is_a_rotated_gamma_value() {
    // M_0 = (2/r) Gamma(1/r) cos(pi/(2r)) for odd r
    let ctx = PrecisionContext::standard();
    let spec = WeightSpec::new(3).unwrap();
    let g = gamma(&Complex::from_real(ctx.ratio(1, 3)), &ctx).unwrap();
    let c = Complex::cis_pi_rational(ctx.bits(), 1, 6);
    let expected = g.scale(&(ctx.ratio(2, 3) * c.re.clone()));
    assert!(close(&moment(0, &spec, &ctx).unwrap(), &expected, 1e-29));
}

#[test]
fn moments_agree_with_ray_quadrature() {
    let ctx = PrecisionContext::standard();
    for r in [2, 3, 4] {
        let spec = WeightSpec::new(r).unwrap();
        for k in 0..8 {
            let m = moment(k, &spec, &ctx).unwrap();
            let q = ray_moment(k, &spec, &ctx).unwrap();
            assert!(close(&m, &q, 1e-20), "r={r} k={k}");
        }
    }
}

#[test]
fn vanishing_moments_for_cubic_phase() {
    let ctx = PrecisionContext::standard();
    let spec = WeightSpec::new(3).unwrap();
    for k in [2usize, 5, 8, 11] {
        assert!(moment(k, &spec, &ctx).unwrap().abs_f64() < 1e-25, "k={k}");
    }
    assert!(moment(3, &spec, &ctx).unwrap().abs_f64() > 1e-3);
}

#[test]
fn quadratic_phase_recurrence_is_rotated_hermite() {
    let ctx = PrecisionContext::for_degree(12);
    let m = MomentSequence::new(WeightSpec::new(2).unwrap(), 24, &ctx).unwrap();
    let rc = build_recurrence(&m, 12).unwrap();
    for k in 0..12 {
        assert!(rc.alpha[k].abs_f64() < 1e-30, "alpha_{k}");
    }
    // beta[j] multiplies pi_j in the step to pi_{j+2}: i (j + 1) / 2
    for k in 0..11 {
        let expected = Complex::from_f64(ctx.bits(), 0.0, (k + 1) as f64 / 2.0);
        assert!(close(&rc.beta[k], &expected, 1e-30), "beta_{k} = {}", rc.beta[k]);
    }
}

#[test]
fn quadratic_phase_two_point_nodes() {
    let c = construct(WeightSpec::new(2).unwrap(), 2, None).unwrap();
    let bits = c.ctx.bits();
    let mut nodes = c.rule.nodes.clone();
    nodes.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    assert!(close(&nodes[0], &Complex::from_f64(bits, -0.5, -0.5), 1e-40));
    assert!(close(&nodes[1], &Complex::from_f64(bits, 0.5, 0.5), 1e-40));
}

#[test]
fn nodes_are_mirror_symmetric() {
    let spec = WeightSpec::new(3).unwrap();
    let c = construct(spec, 11, None).unwrap();
    for z in &c.rule.nodes {
        let m = spec.mirror(z);
        let nearest = c.rule.nodes.iter().map(|w| (w - &m).abs_f64()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-30);
    }
}

#[test]
fn rule_is_exact_for_polynomials() {
    let n = 8;
    let c = construct(WeightSpec::new(3).unwrap(), n, None).unwrap();
    assert!(c.exactness < 1e-30, "{:e}", c.exactness);
    for k in [0usize, 5, 2 * n - 1] {
        let q = c.rule.apply(|z| z.powi(k as i32));
        assert!(close(&q, c.moments.get(k), 1e-30), "k={k}");
    }
}

#[test]
fn rule_converges_for_entire_integrands() {
    // int_Gamma e^z e^{i z^3} dz against the ray oracle
    let ctx = PrecisionContext::new(40, 10).unwrap();
    let spec = WeightSpec::new(3).unwrap();
    let (exact, _) = ray_integral(&spec, &ctx, &|z: &Complex| z.exp(), 40).unwrap();
    let mut last = f64::INFINITY;
    for n in [4, 8, 12] {
        let c = construct(spec, n, None).unwrap();
        let q = c.rule.apply(|z| z.exp());
        let err = (&q - &exact.with_prec(q.prec())).abs_f64();
        assert!(err < last, "n={n} err={err:e}");
        last = err;
    }
    assert!(last < 1e-15, "{last:e}");
}

#[test]
fn construction_reports_precision() {
    let c = construct(WeightSpec::new(4).unwrap(), 10, None).unwrap();
    assert_eq!(c.ctx.decimal_digits(), PrecisionContext::for_degree(10).decimal_digits());
    assert_eq!(c.attempts, 1);
    assert!(c.zero_residual < 1e-30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn weights_sum_to_zeroth_moment(n in 1usize..10, r in 2u32..6) {
        let c = construct(WeightSpec::new(r).unwrap(), n, None).unwrap();
        let s = c.rule.weights.iter().fold(Complex::zero(c.ctx.bits()), |acc, w| &acc + w);
        prop_assert!(close(&s, c.moments.get(0), 1e-30));
    }
}
