//! Discrete-group arithmetic for the two groups the toolkit supports:
//! the integer line `Z` and the product `Z x Z_m` with a cyclic factor.
//!
//! Haar measure on a discrete group is counting measure, so [`measure`]
//! is plain cardinality. Group elements carry their coordinates only;
//! all operations go through a [`GroupSpec`] so that mixing elements of
//! different groups is caught as an error rather than silently accepted.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which discrete group the experiment lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    /// The integers under addition.
    IntegerLine,
    /// `Z x Z_m` with componentwise addition, cyclic coordinate mod `m`.
    ProductWithCyclic { modulus: u32 },
}

impl GroupSpec {
    /// Product group constructor; the modulus must be at least 2.
    pub fn product(modulus: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Domain(format!(
                "cyclic modulus must be >= 2, got {modulus}"
            )));
        }
        Ok(GroupSpec::ProductWithCyclic { modulus })
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            GroupSpec::IntegerLine => None,
            GroupSpec::ProductWithCyclic { modulus } => Some(*modulus),
        }
    }

    /// The identity element of this group.
    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::IntegerLine => GroupElement::line(0),
            GroupSpec::ProductWithCyclic { .. } => GroupElement::product(0, 0),
        }
    }

    /// Checks that `g` is a well-formed element of this group.
    pub fn contains(&self, g: &GroupElement) -> Result<()> {
        match (self, g.cyclic) {
            (GroupSpec::IntegerLine, None) => Ok(()),
            (GroupSpec::ProductWithCyclic { modulus }, Some(c)) if c < *modulus => Ok(()),
            (GroupSpec::ProductWithCyclic { modulus }, Some(c)) => Err(Error::GroupMismatch(
                format!("cyclic coordinate {c} out of range for modulus {modulus}"),
            )),
            _ => Err(Error::GroupMismatch(format!(
                "element {g} does not belong to {self:?}"
            ))),
        }
    }

    /// Group law: componentwise addition, cyclic coordinate mod `m`.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.contains(g)?;
        self.contains(h)?;
        let z = g.translation.checked_add(h.translation).ok_or_else(|| {
            Error::NumericRange(format!(
                "integer coordinate overflow composing {} and {}",
                g.translation, h.translation
            ))
        })?;
        let cyclic = match (self.modulus(), g.cyclic, h.cyclic) {
            (Some(m), Some(a), Some(b)) => Some((a + b) % m),
            _ => None,
        };
        Ok(GroupElement {
            translation: z,
            cyclic,
        })
    }

    /// Inverse: negate the integer coordinate, negate mod `m` on the cyclic one.
    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.contains(g)?;
        let z = g.translation.checked_neg().ok_or_else(|| {
            Error::NumericRange(format!("cannot negate {} without overflow", g.translation))
        })?;
        let cyclic = match (self.modulus(), g.cyclic) {
            (Some(m), Some(c)) => Some((m - c) % m),
            _ => None,
        };
        Ok(GroupElement {
            translation: z,
            cyclic,
        })
    }

    /// n-fold composition `a^n`; negative `n` goes through the inverse.
    pub fn power(&self, a: &GroupElement, n: i64) -> Result<GroupElement> {
        self.contains(a)?;
        let z = a.translation.checked_mul(n).ok_or_else(|| {
            Error::NumericRange(format!("overflow computing {}^{n}", a.translation))
        })?;
        let cyclic = match (self.modulus(), a.cyclic) {
            (Some(m), Some(c)) => {
                let m64 = i64::from(m);
                Some(((i64::from(c) * (n % m64)).rem_euclid(m64)) as u32)
            }
            _ => None,
        };
        Ok(GroupElement {
            translation: z,
            cyclic,
        })
    }
}

/// A point of `Z` or `Z x Z_m`.
///
/// The cyclic coordinate is present exactly when the group is a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    /// Coordinate on the integer line.
    pub translation: i64,
    /// Coordinate in `Z_m`, in `[0, m)`; `None` on the integer line.
    pub cyclic: Option<u32>,
}

impl GroupElement {
    /// Element of the integer line.
    pub fn line(z: i64) -> Self {
        GroupElement {
            translation: z,
            cyclic: None,
        }
    }

    /// Element of a product group.
    pub fn product(z: i64, c: u32) -> Self {
        GroupElement {
            translation: z,
            cyclic: Some(c),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cyclic {
            None => write!(f, "{}", self.translation),
            Some(c) => write!(f, "({},{})", self.translation, c),
        }
    }
}

/// Counting (Haar) measure of a finite set of group elements.
pub fn measure(set: &BTreeSet<GroupElement>) -> u64 {
    set.len() as u64
}
