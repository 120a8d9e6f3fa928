//! Weight specifications `w: G -> (0, inf)` with exact rational evaluation.
//!
//! Every weight carries declared global bounds `inf <= w <= sup` that are
//! computed by the constructors and re-checked on every evaluation. The
//! bounds are what make the translated operator bounded and (when `inf > 0`)
//! invertible, so they are part of the value, not an afterthought.
//!
//! Scalar rules read the integer coordinate of a group element and ignore
//! the cyclic one; [`WeightRule::MirrorProduct`] is the exception and takes
//! the reciprocal of its base on the `c = 1` copy of a product group.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// A closed integer interval `[lo, hi]` used as a search window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }

    /// Number of integer points in the window.
    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// Parse an exact rational from `"n"`, `"n/d"` or a decimal literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Config(format!("cannot parse rational from {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Config(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.trim();
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let int_part: BigInt = if int.trim().is_empty() {
            BigInt::zero()
        } else {
            int.trim().parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let negative = int.trim_start().starts_with('-');
        let magnitude = int_part.abs() * &scale + frac_part;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// The evaluation rule of a weight.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// `w(x) = v` everywhere.
    Constant(BigRational),
    /// `left` for `z < 0`, `right` for `z >= 0`.
    TwoSided {
        left: BigRational,
        right: BigRational,
    },
    /// `w(z) = values[z mod len]`.
    Periodic(Vec<BigRational>),
    /// Explicit per-position values with a default everywhere else.
    Table {
        entries: BTreeMap<i64, BigRational>,
        default: BigRational,
    },
    /// The run preset: `w(z) = 2` on the cubic runs `[n^3, n^3 + n)`,
    /// `1/2` for `z < 0`, and `1` otherwise. The superlevel set `{w > C}`
    /// for any `1 < C < 2` contains an interval of every length.
    CubicRuns,
    /// On `Z x Z_m`: base value on `c = 0`, the reciprocal on `c = 1`,
    /// base again on any remaining copies.
    MirrorProduct(Box<WeightSpec>),
    /// Derived rule for the inverse operator: `1 / base(x * shift)`.
    InverseTranslate {
        base: Box<WeightSpec>,
        shift: GroupElement,
    },
}

/// A positive, bounded weight on a group, evaluated in exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    group: GroupSpec,
    rule: WeightRule,
    declared_sup: BigRational,
    declared_inf: BigRational,
}

/// Invertibility report: always boundedly invertible by construction,
/// reported with the constant `M = max(sup w, 1/inf w)` from the
/// translate-comparison bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Invertibility {
    pub invertible: bool,
    pub bound_m: BigRational,
}

fn require_positive(v: &BigRational, what: &str) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {v}")))
    }
}

/// Largest `n >= 0` with `n^3 <= z` (for `z >= 0`).
fn integer_cbrt(z: i64) -> i64 {
    debug_assert!(z >= 0);
    let mut n = (z as f64).cbrt().round() as i64;
    while n > 0 && n.saturating_mul(n).saturating_mul(n) > z {
        n -= 1;
    }
    while (n + 1).saturating_mul(n + 1).saturating_mul(n + 1) <= z {
        n += 1;
    }
    n
}

/// Whether `z` lies in some cubic run `[n^3, n^3 + n)` with `n >= 1`.
fn in_cubic_run(z: i64) -> bool {
    if z < 1 {
        return false;
    }
    let n = integer_cbrt(z);
    n >= 1 && z < n * n * n + n
}

impl WeightSpec {
    fn from_rule(group: GroupSpec, rule: WeightRule) -> Result<Self> {
        let (inf, sup) = Self::natural_bounds(&rule)?;
        Ok(WeightSpec {
            group,
            rule,
            declared_sup: sup,
            declared_inf: inf,
        })
    }

    fn natural_bounds(rule: &WeightRule) -> Result<(BigRational, BigRational)> {
        let minmax = |values: &mut dyn Iterator<Item = BigRational>| -> Result<(BigRational, BigRational)> {
            let mut lo: Option<BigRational> = None;
            let mut hi: Option<BigRational> = None;
            for v in values {
                require_positive(&v, "weight value")?;
                if lo.as_ref().is_none_or(|cur| v < *cur) {
                    lo = Some(v.clone());
                }
                if hi.as_ref().is_none_or(|cur| v > *cur) {
                    hi = Some(v);
                }
            }
            match (lo, hi) {
                (Some(lo), Some(hi)) => Ok((lo, hi)),
                _ => Err(Error::Domain("weight rule has no values".into())),
            }
        };
        match rule {
            WeightRule::Constant(v) => minmax(&mut std::iter::once(v.clone())),
            WeightRule::TwoSided { left, right } => {
                minmax(&mut [left.clone(), right.clone()].into_iter())
            }
            WeightRule::Periodic(values) => minmax(&mut values.iter().cloned()),
            WeightRule::Table { entries, default } => minmax(
                &mut entries
                    .values()
                    .cloned()
                    .chain(std::iter::once(default.clone())),
            ),
            WeightRule::CubicRuns => Ok((
                BigRational::new(BigInt::one(), BigInt::from(2)),
                BigRational::from_integer(BigInt::from(2)),
            )),
            WeightRule::MirrorProduct(base) => {
                let recip_sup = base.declared_inf.recip();
                let recip_inf = base.declared_sup.recip();
                let inf = base.declared_inf.clone().min(recip_inf);
                let sup = base.declared_sup.clone().max(recip_sup);
                Ok((inf, sup))
            }
            // only reciprocal values occur: bounds swap and invert
            WeightRule::InverseTranslate { base, .. } => Ok((
                base.declared_sup.recip(),
                base.declared_inf.recip(),
            )),
        }
    }

    pub fn constant(group: GroupSpec, value: BigRational) -> Result<Self> {
        Self::from_rule(group, WeightRule::Constant(value))
    }

    pub fn two_sided(group: GroupSpec, left: BigRational, right: BigRational) -> Result<Self> {
        Self::from_rule(group, WeightRule::TwoSided { left, right })
    }

    pub fn periodic(group: GroupSpec, values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("periodic weight needs at least one value".into()));
        }
        Self::from_rule(group, WeightRule::Periodic(values))
    }

    pub fn table(
        group: GroupSpec,
        entries: BTreeMap<i64, BigRational>,
        default: BigRational,
    ) -> Result<Self> {
        Self::from_rule(group, WeightRule::Table { entries, default })
    }

    pub fn cubic_runs(group: GroupSpec) -> Result<Self> {
        Self::from_rule(group, WeightRule::CubicRuns)
    }

    /// Mirror a line weight onto `Z x Z_m`: reciprocal values on the
    /// `c = 1` copy. This is the two-component construction.
    pub fn mirror_product(base: WeightSpec, modulus: u32) -> Result<Self> {
        if base.group != GroupSpec::IntegerLine {
            return Err(Error::Precondition(
                "mirror product expects a base weight on the integer line".into(),
            ));
        }
        let group = GroupSpec::product(modulus)?;
        Self::from_rule(group, WeightRule::MirrorProduct(Box::new(base)))
    }

    /// Override the declared bounds. Evaluations outside the declared
    /// range fail, so narrowing the bounds below the rule's actual range
    /// turns the invariant check into an error path.
    pub fn with_declared_bounds(mut self, inf: BigRational, sup: BigRational) -> Result<Self> {
        require_positive(&inf, "declared_inf")?;
        if inf > sup {
            return Err(Error::Domain(format!(
                "declared_inf {inf} exceeds declared_sup {sup}"
            )));
        }
        self.declared_inf = inf;
        self.declared_sup = sup;
        Ok(self)
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    pub fn declared_sup(&self) -> &BigRational {
        &self.declared_sup
    }

    pub fn declared_inf(&self) -> &BigRational {
        &self.declared_inf
    }

    fn eval_rule(&self, g: &GroupElement) -> Result<BigRational> {
        let z = g.translation;
        match &self.rule {
            WeightRule::Constant(v) => Ok(v.clone()),
            WeightRule::TwoSided { left, right } => {
                Ok(if z < 0 { left.clone() } else { right.clone() })
            }
            WeightRule::Periodic(values) => {
                let idx = z.rem_euclid(values.len() as i64) as usize;
                Ok(values[idx].clone())
            }
            WeightRule::Table { entries, default } => {
                Ok(entries.get(&z).unwrap_or(default).clone())
            }
            WeightRule::CubicRuns => Ok(if in_cubic_run(z) {
                BigRational::from_integer(BigInt::from(2))
            } else if z < 0 {
                BigRational::new(BigInt::one(), BigInt::from(2))
            } else {
                BigRational::one()
            }),
            WeightRule::MirrorProduct(base) => {
                let on_line = GroupElement::line(z);
                let v = base.eval(&on_line)?;
                if g.cyclic == Some(1) {
                    Ok(v.recip())
                } else {
                    Ok(v)
                }
            }
            WeightRule::InverseTranslate { base, shift } => {
                let moved = base.group.compose(g, shift)?;
                Ok(base.eval(&moved)?.recip())
            }
        }
    }

    /// Evaluate the weight at a group element, checking membership and the
    /// declared bounds.
    pub fn eval(&self, g: &GroupElement) -> Result<BigRational> {
        self.group.contains(g)?;
        let v = self.eval_rule(g)?;
        if v < self.declared_inf || v > self.declared_sup {
            return Err(Error::InvariantViolation(format!(
                "weight value {v} at {g} escapes declared bounds [{}, {}]",
                self.declared_inf, self.declared_sup
            )));
        }
        Ok(v)
    }

    /// Evaluate as `f64`, for log-domain work.
    pub fn eval_f64(&self, g: &GroupElement) -> Result<f64> {
        Ok(rational_to_f64(&self.eval(g)?))
    }

    /// Whether the inverse translation operator exists, together with the
    /// comparison constant `M = max(sup w, 1/inf w)`.
    pub fn invertibility_check(&self) -> Invertibility {
        let recip_inf = self.declared_inf.recip();
        let bound_m = self.declared_sup.clone().max(recip_inf);
        Invertibility {
            invertible: true,
            bound_m,
        }
    }

    /// The weight of the inverse operator: `v(x) = 1 / w(x * a)`, with the
    /// declared bounds swapped and inverted.
    pub fn inverse_weight(&self, a: &GroupElement) -> Result<WeightSpec> {
        self.group.contains(a)?;
        let rule = WeightRule::InverseTranslate {
            base: Box::new(self.clone()),
            shift: *a,
        };
        Self::from_rule(self.group, rule)
    }

    /// Maximal run lengths of the superlevel set `{z : w(z) > threshold}`
    /// inside the window, sorted ascending. Line weights only: runs are an
    /// interval notion on `Z`.
    pub fn run_length_profile(&self, threshold: &BigRational, window: Window) -> Result<Vec<u64>> {
        if self.group != GroupSpec::IntegerLine {
            return Err(Error::Domain(
                "run profile is defined for weights on the integer line".into(),
            ));
        }
        let mut lengths = Vec::new();
        let mut current = 0u64;
        for z in window.iter() {
            if self.eval(&GroupElement::line(z))? > *threshold {
                current += 1;
            } else if current > 0 {
                lengths.push(current);
                current = 0;
            }
        }
        if current > 0 {
            lengths.push(current);
        }
        lengths.sort_unstable();
        Ok(lengths)
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            WeightRule::Constant(v) => write!(f, "constant({v})"),
            WeightRule::TwoSided { left, right } => write!(f, "two_sided({left}, {right})"),
            WeightRule::Periodic(values) => write!(f, "periodic({} values)", values.len()),
            WeightRule::Table { entries, .. } => write!(f, "table({} entries)", entries.len()),
            WeightRule::CubicRuns => write!(f, "cubic_runs"),
            WeightRule::MirrorProduct(base) => write!(f, "mirror_product({base})"),
            WeightRule::InverseTranslate { base, shift } => {
                write!(f, "inverse_translate({base}, {shift})")
            }
        }
    }
}

/// Rational to nearest `f64`. Falls back to a quotient of the parts when
/// the exact conversion overflows intermediate precision.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    if let Some(v) = num::ToPrimitive::to_f64(value) {
        if !v.is_nan() {
            return v;
        }
    }
    // Both parts outside f64 range: divide 64-bit leading chunks and fix
    // the binary exponent by hand.
    let (num, den) = (value.numer(), value.denom());
    if num.is_zero() {
        return 0.0;
    }
    let chunk = |x: &BigInt| -> (f64, i64) {
        let bits = x.bits();
        if bits <= 53 {
            (num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN), 0)
        } else {
            let shift = bits - 53;
            let lead = x >> shift;
            (num::ToPrimitive::to_f64(&lead).unwrap_or(f64::NAN), shift as i64)
        }
    };
    let (n_lead, n_shift) = chunk(&num.abs());
    let (d_lead, d_shift) = chunk(den);
    let sign = if num.is_negative() { -1.0 } else { 1.0 };
    sign * (n_lead / d_lead) * ((n_shift - d_shift) as f64).exp2()
}

/// `ln` of a positive rational, accurate even when the parts are far
/// outside `f64` range.
pub fn rational_ln(value: &BigRational) -> f64 {
    debug_assert!(value.is_positive());
    fn big_ln(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 53 {
            return num::ToPrimitive::to_f64(x).unwrap_or(f64::NAN).ln();
        }
        let shift = bits - 53;
        let lead = x >> shift;
        num::ToPrimitive::to_f64(&lead).unwrap_or(f64::NAN).ln()
            + shift as f64 * std::f64::consts::LN_2
    }
    big_ln(value.numer()) - big_ln(value.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn line() -> GroupSpec {
        GroupSpec::IntegerLine
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cubic_runs_values() {
        let w = WeightSpec::cubic_runs(line()).unwrap();
        assert_eq!(w.eval(&GroupElement::line(1)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::line(-5)).unwrap(), rat(1, 2));
        assert_eq!(w.eval(&GroupElement::line(0)).unwrap(), rat(1, 1));
        // run n=2 is [8, 10)
        assert_eq!(w.eval(&GroupElement::line(8)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::line(9)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::line(10)).unwrap(), rat(1, 1));
        // run n=3 is [27, 30)
        assert_eq!(w.eval(&GroupElement::line(27)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::line(29)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::line(30)).unwrap(), rat(1, 1));
    }

    #[test]
    fn mirror_product_reciprocal_copy() {
        let base = WeightSpec::cubic_runs(line()).unwrap();
        let w = WeightSpec::mirror_product(base, 2).unwrap();
        assert_eq!(w.eval(&GroupElement::product(1, 0)).unwrap(), rat(2, 1));
        assert_eq!(w.eval(&GroupElement::product(1, 1)).unwrap(), rat(1, 2));
        // product of the two copies is exactly one
        for z in -40..40 {
            let a = w.eval(&GroupElement::product(z, 0)).unwrap();
            let b = w.eval(&GroupElement::product(z, 1)).unwrap();
            assert_eq!(a * b, BigRational::one());
        }
    }

    #[test]
    fn invertibility_reports_bound() {
        let w = WeightSpec::cubic_runs(line()).unwrap();
        let report = w.invertibility_check();
        assert!(report.invertible);
        assert_eq!(report.bound_m, rat(2, 1));

        let c = WeightSpec::constant(line(), rat(1, 1)).unwrap();
        assert_eq!(c.invertibility_check().bound_m, rat(1, 1));

        let t = WeightSpec::two_sided(line(), rat(1, 1), rat(2, 1)).unwrap();
        assert_eq!(t.invertibility_check().bound_m, rat(2, 1));
    }

    #[test]
    fn inverse_weight_points() {
        let a = GroupElement::line(-1);

        let c = WeightSpec::constant(line(), rat(2, 1)).unwrap();
        let inv = c.inverse_weight(&a).unwrap();
        assert_eq!(inv.eval(&GroupElement::line(7)).unwrap(), rat(1, 2));
        assert_eq!(*inv.declared_sup(), rat(1, 2));
        assert_eq!(*inv.declared_inf(), rat(1, 2));

        let w = WeightSpec::cubic_runs(line()).unwrap();
        let v = w.inverse_weight(&a).unwrap();
        // v(2) = 1 / w(1) = 1/2
        assert_eq!(v.eval(&GroupElement::line(2)).unwrap(), rat(1, 2));

        let t = WeightSpec::two_sided(line(), rat(1, 1), rat(2, 1)).unwrap();
        let tv = t.inverse_weight(&a).unwrap();
        // tv(0) = 1 / t(-1) = 1
        assert_eq!(tv.eval(&GroupElement::line(0)).unwrap(), rat(1, 1));
    }

    #[test]
    fn inverse_weight_twice_recovers_values() {
        let spec = line();
        let a = GroupElement::line(-1);
        let a_inv = spec.inverse(&a).unwrap();
        let w = WeightSpec::cubic_runs(spec).unwrap();
        let twice = w.inverse_weight(&a).unwrap().inverse_weight(&a_inv).unwrap();
        for z in -50..50 {
            let g = GroupElement::line(z);
            assert_eq!(twice.eval(&g).unwrap(), w.eval(&g).unwrap());
        }
    }

    #[test]
    fn run_profile_cubic() {
        let w = WeightSpec::cubic_runs(line()).unwrap();
        let runs = w
            .run_length_profile(&rat(3, 2), Window::new(0, 70).unwrap())
            .unwrap();
        assert_eq!(runs, vec![1, 2, 3, 4]);
    }

    #[test]
    fn run_profile_constant_below_threshold() {
        let w = WeightSpec::constant(line(), rat(1, 1)).unwrap();
        let runs = w
            .run_length_profile(&rat(3, 2), Window::new(-100, 100).unwrap())
            .unwrap();
        assert!(runs.is_empty());
    }

    #[test]
    fn run_profile_two_sided() {
        let w = WeightSpec::two_sided(line(), rat(1, 1), rat(2, 1)).unwrap();
        let runs = w
            .run_length_profile(&rat(3, 2), Window::new(-10, 10).unwrap())
            .unwrap();
        assert_eq!(runs, vec![11]);
    }

    #[test]
    fn declared_bounds_are_enforced() {
        let w = WeightSpec::cubic_runs(line())
            .unwrap()
            .with_declared_bounds(rat(1, 1), rat(2, 1))
            .unwrap();
        // -5 evaluates to 1/2, below the narrowed declared_inf
        assert!(matches!(
            w.eval(&GroupElement::line(-5)),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn eval_stays_in_bounds_on_samples() {
        let base = WeightSpec::cubic_runs(line()).unwrap();
        let mirror = WeightSpec::mirror_product(base.clone(), 2).unwrap();
        let presets: Vec<WeightSpec> = vec![
            base,
            WeightSpec::constant(line(), rat(3, 7)).unwrap(),
            WeightSpec::two_sided(line(), rat(1, 3), rat(5, 2)).unwrap(),
            WeightSpec::periodic(line(), vec![rat(1, 2), rat(2, 1), rat(3, 1)]).unwrap(),
        ];
        for w in &presets {
            for z in -500..500 {
                let v = w.eval(&GroupElement::line(z)).unwrap();
                assert!(v >= *w.declared_inf() && v <= *w.declared_sup());
            }
        }
        for z in -500..500 {
            for c in 0..2 {
                let v = mirror.eval(&GroupElement::product(z, c)).unwrap();
                assert!(v >= *mirror.declared_inf() && v <= *mirror.declared_sup());
            }
        }
    }

    #[test]
    fn table_uses_default_off_support() {
        let entries: BTreeMap<i64, BigRational> =
            [(0, rat(3, 1)), (5, rat(1, 3))].into_iter().collect();
        let w = WeightSpec::table(line(), entries, rat(1, 1)).unwrap();
        assert_eq!(w.eval(&GroupElement::line(0)).unwrap(), rat(3, 1));
        assert_eq!(w.eval(&GroupElement::line(5)).unwrap(), rat(1, 3));
        assert_eq!(w.eval(&GroupElement::line(17)).unwrap(), rat(1, 1));
        assert_eq!(*w.declared_inf(), rat(1, 3));
        assert_eq!(*w.declared_sup(), rat(3, 1));
    }

    #[test]
    fn integer_cbrt_matches_float_free_definition() {
        for z in 0..30_000i64 {
            let n = integer_cbrt(z);
            assert!(n * n * n <= z && (n + 1) * (n + 1) * (n + 1) > z, "z={z}");
        }
        let big = 4_000_000_000_000_000_000i64;
        let n = integer_cbrt(big);
        assert!(n * n * n <= big);
        assert!((n + 1).saturating_mul(n + 1).saturating_mul(n + 1) > big);
    }

    #[test]
    fn rational_to_f64_is_exact_for_dyadics() {
        assert_eq!(rational_to_f64(&rat(1, 4)), 0.25);
        assert_eq!(
            rational_to_f64(&BigRational::from_f64(0.1).unwrap()),
            0.1
        );
    }

    #[test]
    fn rational_ln_handles_huge_magnitudes() {
        let two = rat(2, 1);
        let big = num::pow::pow(two.clone(), 5000);
        let ln2 = std::f64::consts::LN_2;
        assert!((rational_ln(&big) - 5000.0 * ln2).abs() < 1e-9);
        assert!((rational_ln(&big.recip()) + 5000.0 * ln2).abs() < 1e-9);
        assert!((rational_ln(&rat(3, 7)) - (3f64 / 7.0).ln()).abs() < 1e-14);
        // ratio of two huge parts still lands near 1
        let ratio = num::pow::pow(rat(2, 1), 5000) / num::pow::pow(rat(2, 1), 4999);
        assert_eq!(rational_to_f64(&ratio), 2.0);
    }
}
