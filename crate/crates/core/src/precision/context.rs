use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::{Complex, Real};
use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working-precision contract shared by every module.
///
/// Values are computed with `decimal_digits + guard_digits` digits and reported
/// (exported, compared against tolerances) at `decimal_digits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;
    pub const MIN_GUARD: u32 = 10;

    pub fn new(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < Self::MIN_DIGITS {
            return Err(Error::Precision(format!(
                "decimal_digits must be at least {}, got {decimal_digits}",
                Self::MIN_DIGITS
            )));
        }
        if guard_digits < Self::MIN_GUARD {
            return Err(Error::Precision(format!(
                "guard_digits must be at least {}, got {guard_digits}",
                Self::MIN_GUARD
            )));
        }
        Ok(PrecisionContext {
            decimal_digits,
            guard_digits,
        })
    }

    /// 30 digits with the minimum guard; enough for everything that is not a
    /// moment-to-polynomial construction.
    pub fn standard() -> Self {
        PrecisionContext {
            decimal_digits: Self::MIN_DIGITS,
            guard_digits: Self::MIN_GUARD,
        }
    }

    /// Precision schedule for degree-`n` constructions. The recursion on raw
    /// moments loses roughly `1.5 n` digits and the Vandermonde weight solve
    /// roughly `n`, so the guard grows as `2 n`.
    pub fn for_degree(n: usize) -> Self {
        let n = n as u32;
        PrecisionContext {
            decimal_digits: (12 + 4 * n).max(60),
            guard_digits: (2 * n + 10).max(Self::MIN_GUARD),
        }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Same guard, twice the reported digits.
    pub fn doubled(&self) -> Self {
        PrecisionContext {
            decimal_digits: self.decimal_digits * 2,
            guard_digits: self.guard_digits,
        }
    }

    /// Context with `factor` times the reported digits; used by oracles that
    /// must stay well clear of the precision of the code they check.
    pub fn scaled(&self, factor: u32) -> Self {
        PrecisionContext {
            decimal_digits: self.decimal_digits * factor.max(1),
            guard_digits: self.guard_digits,
        }
    }

    pub fn with_extra_digits(&self, extra: u32) -> Self {
        PrecisionContext {
            decimal_digits: self.decimal_digits + extra,
            guard_digits: self.guard_digits,
        }
    }

    /// Mantissa bits used for intermediate computations.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.decimal_digits + self.guard_digits)
    }

    /// Mantissa bits of reported values.
    pub fn output_bits(&self) -> u32 {
        digits_to_bits(self.decimal_digits)
    }

    pub fn real(&self, x: f64) -> Real {
        Float::with_val(self.bits(), x)
    }

    pub fn int(&self, k: i64) -> Real {
        Float::with_val(self.bits(), k)
    }

    pub fn ratio(&self, p: i64, q: i64) -> Real {
        Float::with_val(self.bits(), p) / q
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Float::parse(s)
            .map(|v| Float::with_val(self.bits(), v))
            .map_err(|e| Error::InvalidInput(format!("cannot parse {s:?} as a number: {e}")))
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex::from_f64(self.bits(), re, im)
    }

    pub fn zero(&self) -> Complex {
        Complex::zero(self.bits())
    }

    pub fn one(&self) -> Complex {
        Complex::one(self.bits())
    }

    pub fn i(&self) -> Complex {
        Complex::i(self.bits())
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn ln2(&self) -> Real {
        Float::with_val(self.bits(), Constant::Log2)
    }

    pub fn sqrt_int(&self, k: u32) -> Real {
        Float::with_val(self.bits(), k).sqrt()
    }

    /// `10^(-decimal_digits)`.
    pub fn epsilon(&self) -> Real {
        self.pow10(-(self.decimal_digits as i32))
    }

    /// `10^(-(decimal_digits + guard_digits))`, the unit roundoff of the
    /// working precision in decimal terms.
    pub fn working_epsilon(&self) -> Real {
        self.pow10(-((self.decimal_digits + self.guard_digits) as i32))
    }

    pub fn pow10(&self, e: i32) -> Real {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(e)
    }

    /// Rounds a working value to the reported precision.
    pub fn round(&self, x: &Real) -> Real {
        Float::with_val(self.output_bits(), x)
    }

    pub fn round_complex(&self, z: &Complex) -> Complex {
        Complex::new(self.round(&z.re), self.round(&z.im))
    }

    /// Decimal string of `x` with `decimal_digits` significant digits.
    pub fn format(&self, x: &Real) -> String {
        format_real(x, self.decimal_digits)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::standard()
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 2
}

/// Decimal rendering with a fixed number of significant digits. Exact zero is
/// rendered as `0` so that symmetric quantities compare byte-for-byte.
pub fn format_real(x: &Real, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_precision() {
        assert!(PrecisionContext::new(29, 10).is_err());
        assert!(PrecisionContext::new(30, 9).is_err());
        assert!(PrecisionContext::new(30, 10).is_ok());
    }

    #[test]
    fn schedule_grows_with_degree() {
        assert_eq!(PrecisionContext::for_degree(5).decimal_digits(), 60);
        assert_eq!(PrecisionContext::for_degree(40).decimal_digits(), 172);
        assert_eq!(PrecisionContext::for_degree(40).guard_digits(), 90);
    }

    #[test]
    fn bits_cover_digits() {
        let ctx = PrecisionContext::standard();
        assert!(ctx.bits() as f64 >= 40.0 * LOG2_10);
        let eps = ctx.epsilon();
        assert!((eps.to_f64() - 1e-30).abs() < 1e-40);
    }

    #[test]
    fn format_is_deterministic() {
        let ctx = PrecisionContext::standard();
        let x = ctx.real(2.0).sqrt();
        assert_eq!(ctx.format(&x), ctx.format(&x.clone()));
        assert!(ctx.format(&x).starts_with("1.41421356237309504880168872421"));
        assert_eq!(format_real(&ctx.real(0.0), 30), "0");
    }
}
