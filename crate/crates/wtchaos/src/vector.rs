//! Finitely supported vectors on a group: the dense-free representation of
//! `l^p` elements after truncation.
//!
//! The same container runs in two scalar modes: `Complex64` entries for
//! float/log-domain work and exact `BigRational` entries for the identities
//! the acceptance checks demand bit-for-bit. Zero entries are pruned on
//! every construction path so support size is an honest complexity measure.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::logval::{log_sum_exp, LogValue};
use crate::weight::rational_to_f64;

/// Scalar types a sparse vector can carry.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// Multiply by a positive rational (a weight or cocycle value).
    fn scale_rational(&self, factor: &BigRational) -> Self;
    /// Entrywise modulus `|z|`.
    fn modulus(&self) -> Self;
    /// `ln |z|`, for log-domain norms.
    fn ln_modulus(&self) -> f64;
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn scale_rational(&self, factor: &BigRational) -> Self {
        self * rational_to_f64(factor)
    }

    fn modulus(&self) -> Self {
        Complex64::new(self.norm(), 0.0)
    }

    fn ln_modulus(&self) -> f64 {
        self.norm().ln()
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn scale_rational(&self, factor: &BigRational) -> Self {
        self * factor
    }

    fn modulus(&self) -> Self {
        self.abs()
    }

    fn ln_modulus(&self) -> f64 {
        rational_to_f64(&self.abs()).ln()
    }
}

/// A finitely supported function on the group.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<S: Coefficient> {
    entries: BTreeMap<GroupElement, S>,
}

/// Float-mode vector: complex entries.
pub type Vector = SparseVector<Complex64>;
/// Exact-mode vector: rational entries.
pub type RationalVector = SparseVector<BigRational>;

impl<S: Coefficient> Default for SparseVector<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Coefficient> SparseVector<S> {
    pub fn new() -> Self {
        SparseVector {
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (GroupElement, S)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (g, value) in entries {
            v.add_assign_entry(g, value);
        }
        v
    }

    /// The characteristic function of a single point.
    pub fn unit(g: GroupElement, value: S) -> Self {
        Self::from_entries([(g, value)])
    }

    /// Adds `value` to the entry at `g`, pruning zeros.
    pub fn add_assign_entry(&mut self, g: GroupElement, value: S) {
        if value.is_zero() {
            return;
        }
        let updated = match self.entries.get(&g) {
            Some(existing) => existing.add(&value),
            None => value,
        };
        if updated.is_zero() {
            self.entries.remove(&g);
        } else {
            self.entries.insert(g, updated);
        }
    }

    pub fn get(&self, g: &GroupElement) -> Option<&S> {
        self.entries.get(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &S)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.entries.keys()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, value) in other.iter() {
            out.add_assign_entry(*g, value.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, value) in other.iter() {
            out.add_assign_entry(*g, S::zero().sub(value));
        }
        out
    }

    pub fn scale_rational(&self, factor: &BigRational) -> Self {
        Self::from_entries(
            self.iter()
                .map(|(g, value)| (*g, value.scale_rational(factor))),
        )
    }

    /// Entrywise modulus `|f|`.
    pub fn modulus(&self) -> Self {
        Self::from_entries(self.iter().map(|(g, value)| (*g, value.modulus())))
    }

    /// Translate by `a`: the support moves from `g` to `g * a`, values
    /// unchanged. This is the unweighted translation `T_a`.
    pub fn translate(&self, spec: &GroupSpec, a: &GroupElement) -> Result<Self> {
        let mut out = Self::new();
        for (g, value) in self.iter() {
            out.add_assign_entry(spec.compose(g, a)?, value.clone());
        }
        Ok(out)
    }

    /// The `l^p` norm in log domain.
    pub fn norm(&self, p: f64) -> Result<LogValue> {
        if self.is_empty() {
            return Err(Error::Domain("norm of the empty-support vector".into()));
        }
        let terms: Vec<f64> = self
            .iter()
            .map(|(_, value)| p * value.ln_modulus())
            .collect();
        Ok(LogValue::from_ln(log_sum_exp(&terms) / p))
    }
}

impl Vector {
    /// Convenience: the characteristic function `chi_g` (float mode).
    pub fn chi(g: GroupElement) -> Vector {
        Vector::unit(g, Complex64::new(1.0, 0.0))
    }
}

impl RationalVector {
    /// Convenience: the characteristic function `chi_g` (exact mode).
    pub fn chi(g: GroupElement) -> RationalVector {
        RationalVector::unit(g, BigRational::from_integer(1.into()))
    }

    /// Lossy conversion to the float representation.
    pub fn to_float(&self) -> Vector {
        Vector::from_entries(
            self.iter()
                .map(|(g, value)| (*g, Complex64::new(rational_to_f64(value), 0.0))),
        )
    }
}
