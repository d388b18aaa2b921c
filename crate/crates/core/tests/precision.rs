use oscgauss::precision::{airy_ai, airy_ai_prime, airy_switchover_radius, format_real, gamma};
use oscgauss::{Complex, Error, PrecisionContext};
use proptest::prelude::*;

fn value(ctx: &PrecisionContext, re: &str, im: &str) -> Complex {
    Complex::new(ctx.parse(re).unwrap(), ctx.parse(im).unwrap())
}

fn rel(a: &Complex, b: &Complex) -> f64 {
    (a - b).abs_f64() / b.abs_f64()
}

#[test]
fn context_rules() {
    assert!(matches!(PrecisionContext::new(29, 10), Err(Error::Precision(_))));
    assert!(matches!(PrecisionContext::new(30, 5), Err(Error::Precision(_))));
    let s = PrecisionContext::standard();
    assert_eq!((s.decimal_digits(), s.guard_digits()), (30, 10));
    assert_eq!(s.scaled(4).decimal_digits(), 120);
    assert_eq!(s.doubled().guard_digits(), 10);
    assert!(s.bits() > s.output_bits());
    assert!(PrecisionContext::for_degree(40).decimal_digits() > PrecisionContext::for_degree(10).decimal_digits());
    assert!(s.parse("1.5x").is_err());
}

#[test]
fn formatting_is_exact_at_zero_and_rounds_elsewhere() {
    let ctx = PrecisionContext::standard();
    assert_eq!(format_real(&ctx.real(0.0), 30), "0");
    let third = ctx.ratio(1, 3);
    let s = ctx.format(&third);
    assert_eq!(s.chars().filter(|&c| c == '3').count(), 30, "{s}");
    let back = ctx.parse(&s).unwrap();
    let err = (back - &third).abs().to_f64() * 3.0;
    assert!((err - 1e-30).abs() < 1e-40, "{err:e}");
}

#[test]
fn gamma_values() {
    let ctx = PrecisionContext::new(45, 10).unwrap();
    let g = gamma(&Complex::from_real(ctx.ratio(1, 3)), &ctx).unwrap();
    let expected = value(&ctx, "2.6789385347077476336556929409746776441286893779573", "0");
    assert!(rel(&g, &expected) < 1e-44);
    let z = value(&ctx, "0.5", "2");
    let expected = value(
        &ctx,
        "0.089855176706431635814247812945435412979252100764462",
        "-0.060493760292887568479767679440822914353111236870529",
    );
    assert!(rel(&gamma(&z, &ctx).unwrap(), &expected) < 1e-44);
    assert!(matches!(gamma(&ctx.complex(-2.0, 0.0), &ctx), Err(Error::Pole(_))));
}

#[test]
fn airy_values() {
    let ctx = PrecisionContext::new(45, 10).unwrap();
    let cases = [
        ("0", "0", "0.35502805388781723926006318600418317639797917419918", "0"),
        ("1", "0", "0.13529241631288141552414742351546630617494414298833", "0"),
        (
            "3",
            "4",
            "0.014554546690944634862474280610566948927557924382608",
            "-0.047435251515492836146434646376455271738658173121722",
        ),
        (
            "-7",
            "2",
            "8.7554400054851872472161941058551989899869029674604",
            "-33.673185917617132643320732365968060804275122688472",
        ),
    ];
    for (x, y, re, im) in cases {
        let a = airy_ai(&value(&ctx, x, y), &ctx);
        assert!(rel(&a, &value(&ctx, re, im)) < 1e-43, "Ai({x}+{y}i) = {a}");
    }
    let d = airy_ai_prime(&ctx.zero(), &ctx);
    let expected = value(&ctx, "-0.25881940379280679840518356018920396347909113835493", "0");
    assert!(rel(&d, &expected) < 1e-44);
}

#[test]
fn airy_is_continuous_across_the_switchover() {
    let ctx = PrecisionContext::standard();
    let r = airy_switchover_radius(&ctx);
    for k in 0..6 {
        let th = 0.5 * k as f64;
        let (c, s) = th.sin_cos();
        let inner = airy_ai(&ctx.complex((r - 1e-9) * s, (r - 1e-9) * c), &ctx);
        let outer = airy_ai(&ctx.complex((r + 1e-9) * s, (r + 1e-9) * c), &ctx);
        assert!(rel(&inner, &outer) < 1e-7, "theta={th}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..5.0, y in -5.0f64..5.0) {
        let ctx = PrecisionContext::standard();
        let z = ctx.complex(x, y);
        let lhs = gamma(&(&z + &ctx.one()), &ctx).unwrap();
        let rhs = &z * &gamma(&z, &ctx).unwrap();
        prop_assert!(rel(&lhs, &rhs) < 1e-35);
    }

    #[test]
    fn airy_satisfies_its_equation(x in -6.0f64..6.0, y in -6.0f64..6.0) {
        // Ai'' = z Ai, with Ai'' from a central difference of Ai'
        let ctx = PrecisionContext::standard();
        let z = ctx.complex(x, y);
        let h = ctx.complex(1e-10, 0.0);
        let d2 = &(&airy_ai_prime(&(&z + &h), &ctx) - &airy_ai_prime(&(&z - &h), &ctx)) / &ctx.complex(2e-10, 0.0);
        let za = &z * &airy_ai(&z, &ctx);
        prop_assert!((&d2 - &za).abs_f64() <= 1e-15 * (za.abs_f64() + airy_ai_prime(&z, &ctx).abs_f64()));
    }
}
