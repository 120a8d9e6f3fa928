//! Finite-horizon shadows of the structure theory of distributionally
//! irregular vectors: modulus invariance, translate comparability, cone
//! combinations, equivalence-class witnesses, nonnegative splittings, and
//! the two-component mirror construction on `Z x Z_2`.
//!
//! Membership in the irregular-vector set is a limit statement, so none of
//! these functions claim it. What they report is the finite-horizon
//! surrogate: density estimates of the near-zero and unbounded exponent
//! sets, sandwich and containment checks at explicit tolerances.

use num::complex::Complex64;

use crate::density::{density_estimate, DensityEstimate, IndexSet};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::logval::LogValue;
use crate::operator::WeightedTranslation;
use crate::vector::Vector;
use crate::weight::WeightSpec;

/// Density evidence that a vector's orbit is both distributionally near
/// zero and distributionally unbounded.
#[derive(Debug, Clone)]
pub struct IrregularityEvidence {
    /// Near-zero threshold (the orbit norm must drop below this).
    pub near_zero_threshold: f64,
    /// Unboundedness threshold (the orbit norm must exceed this).
    pub unbounded_threshold: f64,
    /// `{n <= N : ||T^n y||_p < delta}` and its density estimate.
    pub near_zero: IndexSet,
    pub near_zero_density: DensityEstimate,
    /// `{n <= N : ||T^n y||_p > lambda}` and its density estimate.
    pub unbounded: IndexSet,
    pub unbounded_density: DensityEstimate,
    /// Largest orbit norm seen on the horizon.
    pub max_norm: LogValue,
    /// The full norm series, for reporting.
    pub norms: Vec<LogValue>,
}

/// Collect the near-zero / unbounded exponent sets of one orbit.
pub fn irregularity_evidence(
    op: &WeightedTranslation,
    y: &Vector,
    horizon: u64,
    near_zero_threshold: f64,
    unbounded_threshold: f64,
    theta: f64,
) -> Result<IrregularityEvidence> {
    if y.is_empty() {
        return Err(Error::Domain("irregularity evidence needs a nonzero vector".into()));
    }
    let norms = op.orbit_norm_series(y, horizon)?;
    let near_zero = IndexSet::from_predicate(horizon, |n| {
        norms[(n - 1) as usize].ln() < near_zero_threshold.ln()
    })?;
    let unbounded = IndexSet::from_predicate(horizon, |n| {
        norms[(n - 1) as usize].ln() > unbounded_threshold.ln()
    })?;
    let near_zero_density = density_estimate(&near_zero, theta)?;
    let unbounded_density = density_estimate(&unbounded, theta)?;
    let max_norm = norms
        .iter()
        .copied()
        .fold(LogValue::zero(), |acc, v| if v > acc { v } else { acc });
    Ok(IrregularityEvidence {
        near_zero_threshold,
        unbounded_threshold,
        near_zero,
        near_zero_density,
        unbounded,
        unbounded_density,
        max_norm,
        norms,
    })
}

/// Orbit norms depend on the modulus only: compare the norm series of `y`
/// and `|y|` to relative `1e-12` on the log scale. Both series run through
/// the same cocycle accumulation, so agreement is normally bitwise.
pub fn modulus_check(op: &WeightedTranslation, y: &Vector, horizon: u64) -> Result<bool> {
    if y.is_empty() {
        return Err(Error::Domain("modulus check needs a nonzero vector".into()));
    }
    let plain = op.orbit_norm_series(y, horizon)?;
    let modulus = op.orbit_norm_series(&y.modulus(), horizon)?;
    Ok(plain
        .iter()
        .zip(&modulus)
        .all(|(a, b)| a.approx_eq(b, 1e-12)))
}

/// Positive combination of moduli: `sum_j c_j |y_j|`.
pub fn cone_combine(vectors: &[Vector], coefficients: &[f64]) -> Result<Vector> {
    if vectors.is_empty() || vectors.len() != coefficients.len() {
        return Err(Error::Domain(
            "cone combination needs matching nonempty vector/coefficient lists".into(),
        ));
    }
    if let Some(bad) = coefficients.iter().find(|c| c.is_nan() || **c <= 0.0) {
        return Err(Error::Domain(format!(
            "cone coefficients must be positive, got {bad}"
        )));
    }
    let mut out = Vector::new();
    for (vector, &c) in vectors.iter().zip(coefficients) {
        for (g, value) in vector.modulus().iter() {
            out.add_assign_entry(*g, value * c);
        }
    }
    Ok(out)
}

/// The cone lower bound: `||T^n (sum c_j |y_j|)||_p >= c_j ||T^n |y_j| ||_p`
/// for every member, checked over the horizon with `1e-9` log slack.
pub fn cone_dominance_check(
    op: &WeightedTranslation,
    combined: &Vector,
    vectors: &[Vector],
    coefficients: &[f64],
    horizon: u64,
) -> Result<bool> {
    let combined_norms = op.orbit_norm_series(combined, horizon)?;
    for (vector, &c) in vectors.iter().zip(coefficients) {
        let member_norms = op.orbit_norm_series(&vector.modulus(), horizon)?;
        for (total, member) in combined_norms.iter().zip(&member_norms) {
            if total.ln() < member.ln() + c.ln() - 1e-9 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two-sided modulus comparability `c1 |z| <= |y| <= c2 |z|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceWitness {
    pub c1: f64,
    pub c2: f64,
}

/// Witness that `y` and `z` are equivalent: the extreme pointwise ratios
/// `|y| / |z|`, defined exactly when the supports coincide (and nonempty).
pub fn equivalence_member(y: &Vector, z: &Vector) -> Option<EquivalenceWitness> {
    if y.is_empty() || y.support_size() != z.support_size() {
        return None;
    }
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for (g, value) in y.iter() {
        let other = z.get(g)?;
        let ratio = value.norm() / other.norm();
        c1 = c1.min(ratio);
        c2 = c2.max(ratio);
    }
    Some(EquivalenceWitness { c1, c2 })
}

/// Split a nonnegative vector along a proper subset `K` of its support:
/// `y1 = (y/3)(2 - chi_K)`, `y2 = (y/3)(1 + chi_K)`. The pieces sum back
/// to `y` bit-for-bit and sandwich between `y/3` and `y`.
pub fn split_vector(
    y: &Vector,
    subset: &[GroupElement],
) -> Result<(Vector, Vector)> {
    for (g, value) in y.iter() {
        if value.im != 0.0 || value.re < 0.0 {
            return Err(Error::Precondition(format!(
                "split needs an entrywise nonnegative vector; offending entry at {g}"
            )));
        }
    }
    let in_subset = |g: &GroupElement| subset.contains(g);
    let support: Vec<&GroupElement> = y.support().collect();
    if subset.is_empty() || !subset.iter().all(|g| y.get(g).is_some()) {
        return Err(Error::Precondition(
            "split set must be a nonempty subset of the support".into(),
        ));
    }
    if support.iter().all(|g| in_subset(g)) {
        return Err(Error::Precondition(
            "split set must be a proper subset of the support".into(),
        ));
    }
    let mut first = Vector::new();
    let mut second = Vector::new();
    for (g, value) in y.iter() {
        // large lands in [v/2, v], so the subtraction is exact (Sterbenz)
        // and the pieces sum back to v bit-for-bit
        let large = value.re * 2.0 / 3.0;
        let small = value.re - large;
        let (a, b) = if in_subset(g) {
            (small, large)
        } else {
            (large, small)
        };
        first.add_assign_entry(*g, Complex64::new(a, 0.0));
        second.add_assign_entry(*g, Complex64::new(b, 0.0));
    }
    Ok((first, second))
}

/// Restrict a vector to the orbit `{anchor * a^i : i in Z}` of one point
/// under the translation element. On a discrete group an atom is a
/// singleton, and the dynamics of an atomic-supported vector live entirely
/// on such an orbit; this is the support restriction that analysis.
pub fn restrict_to_orbit(
    op: &WeightedTranslation,
    y: &Vector,
    anchor: &GroupElement,
) -> Result<Vector> {
    let spec = op.group();
    spec.contains(anchor)?;
    let step = op.step();
    let modulus = spec.modulus();
    let on_orbit = |g: &GroupElement| -> bool {
        if step.translation != 0 {
            let offset = g.translation - anchor.translation;
            if offset % step.translation != 0 {
                return false;
            }
            let i = offset / step.translation;
            match (modulus, step.cyclic, anchor.cyclic, g.cyclic) {
                (Some(m), Some(sc), Some(ac), Some(gc)) => {
                    let m = i64::from(m);
                    (i64::from(ac) + i * i64::from(sc)).rem_euclid(m) == i64::from(gc)
                }
                _ => true,
            }
        } else {
            // pure cyclic translation: finite orbit, walk it
            if g.translation != anchor.translation {
                return false;
            }
            match (modulus, step.cyclic, anchor.cyclic, g.cyclic) {
                (Some(m), Some(sc), Some(ac), Some(gc)) => {
                    (0..m).any(|i| (ac + i * sc) % m == gc)
                }
                _ => true,
            }
        }
    };
    Ok(Vector::from_entries(
        y.iter()
            .filter(|(g, _)| on_orbit(g))
            .map(|(g, value)| (*g, *value)),
    ))
}

/// Report of the two-component mirror construction.
#[derive(Debug, Clone)]
pub struct MirrorReport {
    /// Largest `| ln ||T^n chi_(g,0)|| + ln ||T^n chi_(g,1)|| |` seen.
    pub max_reciprocity_error: f64,
    pub reciprocity_ok: bool,
    /// Irregularity evidence for the `c = 0` component representative.
    pub component_zero: IrregularityEvidence,
    /// Irregularity evidence for the `c = 1` component representative.
    pub component_one: IrregularityEvidence,
    /// Mixed-support orbit norms dominate both components.
    pub mixed_support_dominates: bool,
}

/// Build the mirror weight of `base` on `Z x Z_2` with `a = (-1, 0)` and
/// verify the pairing `||T^n chi_(g,0)|| * ||T^n chi_(g,1)|| = 1` on the
/// sampled positions, plus per-component irregularity evidence.
pub fn mirror_two_component_check(
    base: WeightSpec,
    p: f64,
    horizon: u64,
    sample_positions: &[i64],
    near_zero_threshold: f64,
    unbounded_threshold: f64,
    theta: f64,
) -> Result<MirrorReport> {
    if base.group() != GroupSpec::IntegerLine {
        return Err(Error::Precondition(
            "mirror construction expects a base weight on the integer line".into(),
        ));
    }
    if !base.invertibility_check().invertible {
        return Err(Error::Precondition("mirror construction needs an invertible base".into()));
    }
    if sample_positions.is_empty() {
        return Err(Error::Domain("mirror check needs at least one sample position".into()));
    }
    let weight = WeightSpec::mirror_product(base, 2)?;
    let op = WeightedTranslation::new(weight, GroupElement::product(-1, 0), p)?;

    let mut max_reciprocity_error = 0.0f64;
    for &z in sample_positions {
        let top = op.orbit_norm_series(&Vector::chi(GroupElement::product(z, 0)), horizon)?;
        let bottom = op.orbit_norm_series(&Vector::chi(GroupElement::product(z, 1)), horizon)?;
        for (a, b) in top.iter().zip(&bottom) {
            max_reciprocity_error = max_reciprocity_error.max((a.ln() + b.ln()).abs());
        }
    }
    let reciprocity_ok = max_reciprocity_error <= 1e-10;

    let anchor = sample_positions[0];
    let component_zero = irregularity_evidence(
        &op,
        &Vector::chi(GroupElement::product(anchor, 0)),
        horizon,
        near_zero_threshold,
        unbounded_threshold,
        theta,
    )?;
    let component_one = irregularity_evidence(
        &op,
        &Vector::chi(GroupElement::product(anchor, 1)),
        horizon,
        near_zero_threshold,
        unbounded_threshold,
        theta,
    )?;

    // a mixed-support vector decomposes into its per-component orbit
    // restrictions, and its orbit norms dominate both
    let mixed = Vector::chi(GroupElement::product(anchor, 0))
        .add(&Vector::chi(GroupElement::product(anchor, 1)));
    let restricted_zero = restrict_to_orbit(&op, &mixed, &GroupElement::product(anchor, 0))?;
    let restricted_one = restrict_to_orbit(&op, &mixed, &GroupElement::product(anchor, 1))?;
    let zero_norms = op.orbit_norm_series(&restricted_zero, horizon)?;
    let one_norms = op.orbit_norm_series(&restricted_one, horizon)?;
    let mixed_norms = op.orbit_norm_series(&mixed, horizon)?;
    let mut mixed_support_dominates = true;
    for ((m, a), b) in mixed_norms.iter().zip(&zero_norms).zip(&one_norms) {
        if m.ln() < a.ln().max(b.ln()) - 1e-9 {
            mixed_support_dominates = false;
        }
    }
    Ok(MirrorReport {
        max_reciprocity_error,
        reciprocity_ok,
        component_zero,
        component_one,
        mixed_support_dominates,
    })
}
