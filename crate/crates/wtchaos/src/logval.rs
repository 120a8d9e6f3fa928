//! Overflow-safe magnitudes: values carried as natural logs.
//!
//! Orbit norms of weighted translations span `2^(+-N)` for horizons in the
//! thousands, far past `f64` range, so every norm-like quantity is a
//! [`LogValue`]. Zero needs its own flag because `ln 0` is not a number we
//! want to propagate through comparisons.

use serde::{Deserialize, Serialize};

/// A nonnegative magnitude stored as its natural log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    /// `ln` of the magnitude; meaningless when `is_zero`.
    pub log_magnitude: f64,
    /// Exact zero marker.
    pub is_zero: bool,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue {
            log_magnitude: f64::NEG_INFINITY,
            is_zero: true,
        }
    }

    pub fn one() -> Self {
        LogValue {
            log_magnitude: 0.0,
            is_zero: false,
        }
    }

    pub fn from_ln(log_magnitude: f64) -> Self {
        LogValue {
            log_magnitude,
            is_zero: false,
        }
    }

    /// From a plain nonnegative value.
    pub fn from_value(value: f64) -> Self {
        debug_assert!(value >= 0.0);
        if value == 0.0 {
            LogValue::zero()
        } else {
            LogValue::from_ln(value.ln())
        }
    }

    /// Materialize the value; saturates to `inf`/`0` outside `f64` range.
    pub fn value(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            self.log_magnitude.exp()
        }
    }

    pub fn ln(&self) -> f64 {
        if self.is_zero {
            f64::NEG_INFINITY
        } else {
            self.log_magnitude
        }
    }

    pub fn mul(&self, other: &LogValue) -> LogValue {
        if self.is_zero || other.is_zero {
            LogValue::zero()
        } else {
            LogValue::from_ln(self.log_magnitude + other.log_magnitude)
        }
    }

    pub fn powf(&self, exponent: f64) -> LogValue {
        if self.is_zero {
            LogValue::zero()
        } else {
            LogValue::from_ln(self.log_magnitude * exponent)
        }
    }

    /// Relative agreement in the log domain: `|ln a - ln b| <= tol`,
    /// with zeros comparing equal only to zeros.
    pub fn approx_eq(&self, other: &LogValue, tol: f64) -> bool {
        match (self.is_zero, other.is_zero) {
            (true, true) => true,
            (false, false) => (self.log_magnitude - other.log_magnitude).abs() <= tol,
            _ => false,
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.ln().partial_cmp(&other.ln())
    }
}

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-sum-exp over a slice of log-domain terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - hi).exp()).sum();
    hi + sum.ln()
}

/// Neumaier-compensated running sum. Long log-cocycle accumulations
/// (tens of thousands of terms) need the compensation to stay inside the
/// acceptance tolerances.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
