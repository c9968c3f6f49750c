//! Scalar special functions underlying every bound in the crate.
//!
//! All routines are pure and reentrant. Products and ratios of gamma
//! functions, binomials and powers are handled on the natural-log scale;
//! [`LogValue`] is a thin wrapper for code that wants that made explicit.

mod gamma;
mod lambert;
mod logsum;

pub use gamma::{log_binomial, log_factorial, log_gamma, HalfIntLogGamma};
pub use lambert::{lambert_w0, lambert_wm1, NEG_INV_E};
pub use logsum::{log_sum_exp, LogSumExp};

pub(crate) use gamma::{ln_fact, ln_gamma_pos};

use crate::error::{domain, Result};

/// ln √π.
pub const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;
/// ln √(2π).
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// The natural logarithm of a nonnegative quantity. `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_ln(ln: f64) -> Result<Self> {
        if ln.is_nan() || ln == f64::INFINITY {
            return Err(domain(format!(
                "log value must be finite or -inf, got {ln}"
            )));
        }
        Ok(LogValue(ln))
    }

    pub fn from_linear(x: f64) -> Result<Self> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(domain(format!(
                "linear value must be finite and >= 0, got {x}"
            )));
        }
        Ok(LogValue(x.ln()))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    /// The linear value; may overflow to `inf` or underflow to 0.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Quotient; `other` must not be zero.
    pub fn checked_div(self, other: LogValue) -> Result<LogValue> {
        if other.is_zero() {
            return Err(domain("division by a zero LogValue"));
        }
        if self.is_zero() {
            return Ok(LogValue::ZERO);
        }
        Ok(LogValue(self.0 - other.0))
    }

    /// `self^power` for a finite real exponent.
    pub fn powf(self, power: f64) -> Result<LogValue> {
        if !power.is_finite() {
            return Err(domain("exponent must be finite"));
        }
        if self.is_zero() {
            return match power {
                p if p > 0.0 => Ok(LogValue::ZERO),
                0.0 => Ok(LogValue::ONE),
                _ => Err(domain("zero raised to a negative power")),
            };
        }
        Ok(LogValue(self.0 * power))
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;

    fn mul(self, other: LogValue) -> LogValue {
        if self.is_zero() || other.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 + other.0)
    }
}

/// Sum computed against the larger operand.
impl std::ops::Add for LogValue {
    type Output = LogValue;

    fn add(self, other: LogValue) -> LogValue {
        let (hi, lo) = if self.0 >= other.0 {
            (self.0, other.0)
        } else {
            (other.0, self.0)
        };
        if lo == f64::NEG_INFINITY {
            return LogValue(hi);
        }
        LogValue(hi + (lo - hi).exp().ln_1p())
    }
}
