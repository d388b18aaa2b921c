use std::fmt;
use std::sync::Arc;

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{Complex, PrecisionContext};

type Callback = dyn Fn(&Complex) -> Complex + Send + Sync;

/// The amplitude `f` of `int_a^b f(x) e^{i omega x^r} dx`: a reentrant
/// callback together with the radius of the neighbourhood of `[a, b]` in
/// which the caller guarantees it is analytic.
#[derive(Clone)]
pub struct Amplitude {
    name: String,
    radius: f64,
    f: Arc<Callback>,
}

impl Amplitude {
    pub fn new<F>(name: impl Into<String>, radius: f64, f: F) -> Self
    where
        F: Fn(&Complex) -> Complex + Send + Sync + 'static,
    {
        Amplitude {
            name: name.into(),
            radius,
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, z: &Complex) -> Complex {
        (self.f)(z)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Analyticity radius around `[a, b]`; infinite for entire functions.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Constant amplitude; `c` is a decimal string read at each call's
    /// precision.
    pub fn constant(c: &str) -> Result<Self> {
        Amplitude::polynomial(&[c])
    }

    pub fn monomial(k: u32) -> Self {
        Amplitude::new(format!("monomial:{k}"), f64::INFINITY, move |z| z.powi(k as i32))
    }

    /// `c_0 + c_1 x + ...` with decimal-string coefficients.
    pub fn polynomial(coefficients: &[&str]) -> Result<Self> {
        let coefficients: Vec<String> = coefficients.iter().map(|c| c.trim().to_string()).collect();
        for c in &coefficients {
            Float::parse(c).map_err(|_| Error::InvalidInput(format!("cannot parse coefficient {c:?}")))?;
        }
        let name = if coefficients.len() == 1 {
            format!("constant:{}", coefficients[0])
        } else {
            format!("polynomial:{}", coefficients.join(","))
        };
        Ok(Amplitude::new(name, f64::INFINITY, move |z| {
            let prec = z.prec();
            let mut acc = Complex::zero(prec);
            for c in coefficients.iter().rev() {
                let c = Float::with_val(prec, Float::parse(c).expect("validated"));
                acc = &(&acc * z) + &Complex::from_real(c);
            }
            acc
        }))
    }

    pub fn exp() -> Self {
        Amplitude::new("exp", f64::INFINITY, |z| z.exp())
    }

    pub fn cos() -> Self {
        Amplitude::new("cos", f64::INFINITY, |z| {
            let e = z.mul_i().exp();
            &(&e + &e.recip()) / 2u32
        })
    }

    /// Built-in amplitudes by name: `constant[:c]`, `monomial:k`,
    /// `polynomial:c0,c1,...`, `exp`, `cos`.
    pub fn parse(text: &str) -> Result<Self> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        let bad = || Error::InvalidInput(format!("unknown amplitude {text:?}"));
        match (head, arg) {
            ("constant", None) => Amplitude::constant("1"),
            ("constant", Some(a)) => Amplitude::constant(a),
            ("monomial", Some(a)) => Ok(Amplitude::monomial(a.parse().map_err(|_| bad())?)),
            ("polynomial", Some(a)) => Amplitude::polynomial(&a.split(',').collect::<Vec<_>>()),
            ("exp", None) => Ok(Amplitude::exp()),
            ("cos", None) => Ok(Amplitude::cos()),
            _ => Err(bad()),
        }
    }

    pub(crate) fn eval_in(&self, z: &Complex, ctx: &PrecisionContext) -> Complex {
        self.eval(&z.with_prec(ctx.bits()))
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Amplitude")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .finish()
    }
}
