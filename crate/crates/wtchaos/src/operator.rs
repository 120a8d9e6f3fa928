//! The weighted translation `T_{a,w} f = w * (f translated by a)` and the
//! quantities its powers are made of.
//!
//! Everything here goes through the cocycle
//! `phi_n(x) = prod_{j=1..n} w(x a^j)`, which controls the n-th power via
//! `T^n = T_{a^n} M_{phi_n}`. For the bilateral shift (`a = -1` on `Z`) the
//! cocycle window of `phi_n(x)` is `{x-n, ..., x-1}`.
//!
//! Powers and norms run in two arithmetic modes: exact rationals for
//! small-horizon identities and compensated log-domain floats for long
//! horizons where `phi_n` spans `2^(+-n)`.

use num::rational::BigRational;
use num::One;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::logval::{log_sum_exp, CompensatedSum, LogValue};
use crate::vector::{Coefficient, SparseVector};
use crate::weight::{rational_ln, WeightSpec};

/// Bit-size cap for exact cocycle products before the caller is told to
/// retry in log mode.
pub const DEFAULT_RATIONAL_BIT_CAP: u64 = 1 << 20;

/// A weighted translation operator on `l^p` of a discrete group.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTranslation {
    group: GroupSpec,
    step: GroupElement,
    weight: WeightSpec,
    p: f64,
}

impl WeightedTranslation {
    /// Build `T_{a,w}` on `l^p`. Rejects `p < 1` and the degenerate
    /// identity translation.
    pub fn new(weight: WeightSpec, step: GroupElement, p: f64) -> Result<Self> {
        let group = weight.group();
        group.contains(&step)?;
        if step == group.identity() {
            return Err(Error::Precondition(
                "translation element must not be the identity".into(),
            ));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("p must be >= 1, got {p}")));
        }
        Ok(WeightedTranslation {
            group,
            step,
            weight,
            p,
        })
    }

    /// The bilateral weighted shift: `a = -1` on the integer line.
    pub fn bilateral_shift(weight: WeightSpec, p: f64) -> Result<Self> {
        Self::new(weight, GroupElement::line(-1), p)
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn step(&self) -> &GroupElement {
        &self.step
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Exact cocycle value `phi_n(x)`, with a bit-length guard so runaway
    /// products surface as a numeric-range error instead of stalling.
    pub fn phi_exact_capped(
        &self,
        n: u64,
        x: &GroupElement,
        bit_cap: u64,
    ) -> Result<BigRational> {
        if n < 1 {
            return Err(Error::Domain("phi needs n >= 1".into()));
        }
        let mut product = BigRational::one();
        let mut point = *x;
        for _ in 0..n {
            point = self.group.compose(&point, &self.step)?;
            product *= self.weight.eval(&point)?;
            let bits = product.numer().bits() + product.denom().bits();
            if bits > bit_cap {
                return Err(Error::NumericRange(format!(
                    "exact cocycle product exceeds {bit_cap} bits; retry in log mode"
                )));
            }
        }
        Ok(product)
    }

    /// Exact cocycle value with the default bit cap.
    pub fn phi_exact(&self, n: u64, x: &GroupElement) -> Result<BigRational> {
        self.phi_exact_capped(n, x, DEFAULT_RATIONAL_BIT_CAP)
    }

    /// Log-domain cocycle value `ln phi_n(x)`.
    pub fn phi_ln(&self, n: u64, x: &GroupElement) -> Result<f64> {
        if n < 1 {
            return Err(Error::Domain("phi needs n >= 1".into()));
        }
        let mut acc = CompensatedSum::new();
        let mut point = *x;
        for _ in 0..n {
            point = self.group.compose(&point, &self.step)?;
            acc.add(self.weight.eval_f64(&point)?.ln());
        }
        Ok(acc.total())
    }

    /// The cocycle as a [`LogValue`] (never zero: weights are positive).
    pub fn phi(&self, n: u64, x: &GroupElement) -> Result<LogValue> {
        Ok(LogValue::from_ln(self.phi_ln(n, x)?))
    }

    /// `ln phi_n(x)` for every `n = 1..=horizon`, sharing one compensated
    /// accumulation across the whole series.
    pub fn phi_series_ln(&self, x: &GroupElement, horizon: u64) -> Result<Vec<f64>> {
        if horizon < 1 {
            return Err(Error::Domain("phi series needs horizon >= 1".into()));
        }
        let mut out = Vec::with_capacity(horizon as usize);
        let mut acc = CompensatedSum::new();
        let mut point = *x;
        for _ in 0..horizon {
            point = self.group.compose(&point, &self.step)?;
            acc.add(self.weight.eval_f64(&point)?.ln());
            out.push(acc.total());
        }
        Ok(out)
    }

    /// Apply `T^n` exactly: `(T^n f)(x a^n) = phi_n(x) f(x)` for every
    /// support point `x`. The cocycle factors are exact rationals in both
    /// scalar modes, so the semigroup law holds bit-for-bit on rational
    /// vectors.
    pub fn apply_power<S: Coefficient>(
        &self,
        f: &SparseVector<S>,
        n: u64,
    ) -> Result<SparseVector<S>> {
        if n == 0 {
            return Ok(f.clone());
        }
        let shift = self.group.power(&self.step, n as i64)?;
        let mut out = SparseVector::new();
        for (g, value) in f.iter() {
            let factor = self.phi_exact(n, g)?;
            out.add_assign_entry(self.group.compose(g, &shift)?, value.scale_rational(&factor));
        }
        Ok(out)
    }

    /// Apply the inverse `S_{a,w} = T_{a^{-1}, w^{-1} * delta_{a^{-1}}}`:
    /// each support point moves to `g a^{-1}` with value `f(g) / w(g)`.
    pub fn apply_inverse<S: Coefficient>(&self, f: &SparseVector<S>) -> Result<SparseVector<S>> {
        if !self.weight.invertibility_check().invertible {
            return Err(Error::Precondition("weight is not boundedly invertible".into()));
        }
        if f.is_empty() {
            return Err(Error::Domain("cannot invert the zero vector".into()));
        }
        let back = self.group.inverse(&self.step)?;
        let mut out = SparseVector::new();
        for (g, value) in f.iter() {
            let factor = self.weight.eval(g)?.recip();
            out.add_assign_entry(self.group.compose(g, &back)?, value.scale_rational(&factor));
        }
        Ok(out)
    }

    /// The inverse as an operator in its own right.
    pub fn inverse_operator(&self) -> Result<WeightedTranslation> {
        let inv_weight = self.weight.inverse_weight(&self.step)?;
        let back = self.group.inverse(&self.step)?;
        WeightedTranslation::new(inv_weight, back, self.p)
    }

    /// Unweighted translate `T_{a^m} f`.
    pub fn translate_by_power<S: Coefficient>(
        &self,
        f: &SparseVector<S>,
        m: i64,
    ) -> Result<SparseVector<S>> {
        let shift = self.group.power(&self.step, m)?;
        f.translate(&self.group, &shift)
    }

    /// `||T^n f||_p` without materializing `T^n f`:
    /// `(sum_x phi_n(x)^p |f(x)|^p)^(1/p)` over the finite support, in the
    /// log domain.
    pub fn orbit_norm<S: Coefficient>(&self, f: &SparseVector<S>, n: u64) -> Result<LogValue> {
        if n < 1 {
            return Err(Error::Domain("orbit norm needs n >= 1".into()));
        }
        if f.is_empty() {
            return Err(Error::Domain("orbit norm of the empty-support vector".into()));
        }
        let mut terms = Vec::with_capacity(f.support_size());
        for (g, value) in f.iter() {
            terms.push(self.p * (self.phi_ln(n, g)? + value.ln_modulus()));
        }
        Ok(LogValue::from_ln(log_sum_exp(&terms) / self.p))
    }

    /// The whole norm series `||T^n f||_p` for `n = 1..=horizon`, reusing
    /// the running cocycle per support point.
    pub fn orbit_norm_series<S: Coefficient>(
        &self,
        f: &SparseVector<S>,
        horizon: u64,
    ) -> Result<Vec<LogValue>> {
        if horizon < 1 {
            return Err(Error::Domain("orbit series needs horizon >= 1".into()));
        }
        if f.is_empty() {
            return Err(Error::Domain("orbit series of the empty-support vector".into()));
        }
        let mut per_point: Vec<(f64, Vec<f64>)> = Vec::with_capacity(f.support_size());
        for (g, value) in f.iter() {
            per_point.push((value.ln_modulus(), self.phi_series_ln(g, horizon)?));
        }
        let mut out = Vec::with_capacity(horizon as usize);
        let mut terms = vec![0.0; per_point.len()];
        for step in 0..horizon as usize {
            for (slot, (ln_value, series)) in terms.iter_mut().zip(&per_point) {
                *slot = self.p * (series[step] + ln_value);
            }
            out.push(LogValue::from_ln(log_sum_exp(&terms) / self.p));
        }
        Ok(out)
    }

    /// Exact `||T^n f||_p^p` for rational vectors:
    /// `sum_x phi_n(x)^p |f(x)|^p`, requiring integer `p`.
    pub fn orbit_norm_pth_power_exact(
        &self,
        f: &SparseVector<BigRational>,
        n: u64,
    ) -> Result<BigRational> {
        if self.p.fract() != 0.0 {
            return Err(Error::Domain(format!(
                "exact orbit norms need integer p, got {}",
                self.p
            )));
        }
        if f.is_empty() {
            return Err(Error::Domain("orbit norm of the empty-support vector".into()));
        }
        let p = self.p as i32;
        let mut total = BigRational::from_integer(0.into());
        for (g, value) in f.iter() {
            let phi = self.phi_exact(n, g)?;
            total += phi.pow(p) * value.modulus().pow(p);
        }
        Ok(total)
    }
}

/// Pointwise multiplication operator `M_w f(x) = w(x) f(x)`.
pub fn multiply<S: Coefficient>(
    weight: &WeightSpec,
    f: &SparseVector<S>,
) -> Result<SparseVector<S>> {
    let mut out = SparseVector::new();
    for (g, value) in f.iter() {
        let factor = weight.eval(g)?;
        out.add_assign_entry(*g, value.scale_rational(&factor));
    }
    Ok(out)
}

/// Convert an exact positive rational into a [`LogValue`].
pub fn log_of_rational(value: &BigRational) -> LogValue {
    if num::Zero::is_zero(value) {
        LogValue::zero()
    } else {
        LogValue::from_ln(rational_ln(value))
    }
}
