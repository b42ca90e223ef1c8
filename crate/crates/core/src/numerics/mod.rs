//! Log-space special functions.
//!
//! Every probability handled by the crate is carried as a natural logarithm:
//! likelihood ratios in this domain routinely reach 10^30 and beyond, far past
//! the point where linear-scale products lose all precision.

mod beta;
mod gamma;
pub mod quadrature;

pub use beta::{log_beta, log_reg_inc_beta, log_trunc_beta_integral};
pub use gamma::log_gamma;
pub use quadrature::quadrature_oracle;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance every iterative routine must reach before its result is accepted.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

/// Hard cap on continued-fraction and series iterations.
pub const MAX_ITERATIONS: usize = 300;

/// A natural-log-scale value. Never NaN; `-inf` encodes an exact zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO_PROB: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn new(ln: f64) -> Result<Self> {
        if ln.is_nan() {
            return Err(Error::NumericFailure("log value is NaN".into()));
        }
        Ok(LogValue(ln))
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }

    /// Linear-scale value. Overflows to `inf` for ratios beyond ~10^308.
    #[inline]
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl TryFrom<f64> for LogValue {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        LogValue::new(v)
    }
}

impl From<LogValue> for f64 {
    fn from(v: LogValue) -> f64 {
        v.0
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ln {}", self.0)
    }
}

/// ln(1 - e^v) for v <= 0, accurate at both ends.
pub(crate) fn ln_one_minus_exp(v: f64) -> f64 {
    if v >= 0.0 {
        f64::NEG_INFINITY
    } else if v > -std::f64::consts::LN_2 {
        (-v.exp_m1()).ln()
    } else {
        (-v.exp()).ln_1p()
    }
}

/// `k * ln(x)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn xlogy(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln()
    }
}

/// `k * ln(1 - x)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn xlog1my(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * (-x).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_value_rejects_nan() {
        assert!(LogValue::new(f64::NAN).is_err());
        assert!(LogValue::new(f64::NEG_INFINITY).is_ok());
        assert_eq!(LogValue::ZERO_PROB.exp(), 0.0);
    }

    #[test]
    fn log_value_serde_rejects_nan() {
        let v: std::result::Result<LogValue, _> = f64::NAN.try_into();
        assert!(v.is_err());
    }

    #[test]
    fn one_minus_exp_branches() {
        for v in [-1e-12, -0.1, -0.69, -0.7, -5.0, -50.0] {
            let direct = (1.0 - f64::exp(v)).ln();
            let got = ln_one_minus_exp(v);
            assert!((got - direct).abs() <= 1e-6 * direct.abs().max(1e-12), "{v}");
        }
        assert_eq!(ln_one_minus_exp(0.0), f64::NEG_INFINITY);
    }
}
