//! The distributional-chaos criterion for weighted translations, checked
//! at finite horizons.
//!
//! Condition (i) asks the restricted cocycle norms `||phi_n|_K||_p` to
//! decay along a full-upper-density set of exponents; condition (ii) asks
//! the reciprocal cocycle maxima `u_n = 1 / max_g phi_n(g)` to be summable
//! over a positive-upper-density set. For bilateral shifts the maximization
//! is an interval search: `u_n` is the reciprocal weight product over the
//! best length-`n` interval in the window.
//!
//! From the condition-(ii) witnesses the engine builds the explicit
//! `(a_n, r_n, c_n)` sequence and the candidate vector
//! `y = sum c_n chi_{g_n}`, then re-verifies the lower-bound inequality
//! `||T^n y||_p >= c_n phi_n(g_n)` the construction promises, exactly when
//! the scalar mode allows it.
//!
//! All verdicts are evidence at the computed horizon, not proofs; the
//! reports carry the raw series so the decay claims can be re-examined.

use std::collections::{BTreeMap, BTreeSet};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::density::{density_estimate, DensityEstimate, IndexSet};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::logval::LogValue;
use crate::operator::{log_of_rational, WeightedTranslation};
use crate::vector::Vector;
use crate::weight::{rational_ln, rational_to_f64, WeightSpec, Window};

/// One row of the interval search: the best length-`n` interval and the
/// reciprocal weight product `u_n` over it.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalEntry {
    pub length: u64,
    /// Left end of the best interval (smallest start on ties). `None` when
    /// the row came from the general cocycle maximization rather than an
    /// interval search.
    pub start: Option<i64>,
    /// The cocycle argmax `g_n` with `phi_n(g_n) = 1 / u_n`.
    pub point: GroupElement,
    /// `ln prod_{s in I_n} w(s)`.
    pub log_weight_product: f64,
    /// `u_n` in log domain.
    pub reciprocal: LogValue,
    /// `u_n` as an exact rational.
    pub reciprocal_exact: BigRational,
}

/// Find the length-`n` interval inside `window` maximizing the weight
/// product (equivalently minimizing `u_n`). Exact rational sliding
/// products keep ties honest; ties break to the smallest start.
pub fn best_interval(weight: &WeightSpec, n: u64, window: Window) -> Result<IntervalEntry> {
    if weight.group() != GroupSpec::IntegerLine {
        return Err(Error::Domain(
            "interval search runs on integer-line weights".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Domain("interval length must be positive".into()));
    }
    if window.len() < n {
        return Err(Error::Domain(format!(
            "window of {} points cannot hold an interval of length {n}",
            window.len()
        )));
    }
    let eval = |z: i64| weight.eval(&GroupElement::line(z));
    let mut product = BigRational::one();
    for z in window.lo..window.lo + n as i64 {
        product *= eval(z)?;
    }
    let mut best = product.clone();
    let mut best_start = window.lo;
    let mut start = window.lo;
    while start + n as i64 - 1 < window.hi {
        product *= eval(start + n as i64)?;
        product /= eval(start)?;
        start += 1;
        if product > best {
            best = product.clone();
            best_start = start;
        }
    }
    let reciprocal_exact = best.recip();
    Ok(IntervalEntry {
        length: n,
        start: Some(best_start),
        point: GroupElement::line(best_start + n as i64),
        log_weight_product: rational_ln(&best),
        reciprocal: log_of_rational(&reciprocal_exact),
        reciprocal_exact,
    })
}

/// Evidence-level summability verdict for the `u_n` series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummabilityVerdict {
    /// Tail ratios stay below one: geometric-decay evidence.
    SummableEvidence,
    /// The tail is bounded below by a constant: divergence evidence.
    DivergingEvidence,
    Inconclusive,
}

/// The corollary-style witness: a level `C > 1` whose superlevel set
/// `{w >= C}` contains an interval of every length up to the horizon.
///
/// `C` is the achieved level (weights on the found intervals are `>= C`),
/// so the strict superlevel hypothesis holds for every constant below `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryWitness {
    pub constant: BigRational,
    /// Maximal run lengths of the superlevel set in the window, ascending.
    pub run_lengths: Vec<u64>,
    /// Largest `n` such that runs of every length `<= n` exist.
    pub covers_up_to: u64,
}

/// Condition (ii) diagnostic report.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionIIReport {
    pub set_b: IndexSet,
    pub entries: Vec<IntervalEntry>,
    /// Running partial sums of `u_n` over the members of `B`.
    pub partial_sums: Vec<f64>,
    /// Max of `u_next / u_n` over consecutive members in the tail
    /// `n >= ceil(N/2)`; `NaN` when the tail has fewer than two members.
    pub rho_hat: f64,
    pub verdict: SummabilityVerdict,
    pub corollary_witness: Option<CorollaryWitness>,
}

impl ConditionIIReport {
    /// The `(n, g_n)` witnesses, ready for plan construction.
    pub fn witness_points(&self) -> BTreeMap<u64, GroupElement> {
        self.entries.iter().map(|e| (e.length, e.point)).collect()
    }
}

fn shift_direction(weight: &WeightSpec, step: &GroupElement) -> Option<i64> {
    if weight.group() == GroupSpec::IntegerLine && step.translation.abs() == 1 {
        Some(step.translation)
    } else {
        None
    }
}

/// Cocycle-maximum search for one `n` over all window points (and all
/// cyclic coordinates on product groups).
fn max_phi_over_window(
    op: &WeightedTranslation,
    horizon: u64,
    window: Window,
) -> Result<Vec<(GroupElement, f64)>> {
    let cyclic_range = op.group().modulus().unwrap_or(1);
    let mut best: Vec<Option<(GroupElement, f64)>> = vec![None; horizon as usize];
    for z in window.iter() {
        for c in 0..cyclic_range {
            let g = match op.group() {
                GroupSpec::IntegerLine => GroupElement::line(z),
                GroupSpec::ProductWithCyclic { .. } => GroupElement::product(z, c),
            };
            let series = op.phi_series_ln(&g, horizon)?;
            for (slot, ln_phi) in best.iter_mut().zip(series) {
                if slot.as_ref().is_none_or(|(_, cur)| ln_phi > *cur) {
                    *slot = Some((g, ln_phi));
                }
            }
        }
    }
    Ok(best.into_iter().map(Option::unwrap).collect())
}

fn corollary_witness_search(
    weight: &WeightSpec,
    window: Window,
    horizon: u64,
) -> Result<Option<CorollaryWitness>> {
    if weight.group() != GroupSpec::IntegerLine {
        return Ok(None);
    }
    let mut values: BTreeSet<BigRational> = BTreeSet::new();
    for z in window.iter() {
        values.insert(weight.eval(&GroupElement::line(z))?);
    }
    // Largest achieved level above 1 whose superlevel set has a run
    // spanning every length up to the horizon.
    let one = BigRational::one();
    for level in values.into_iter().rev() {
        if level <= one {
            break;
        }
        let mut run_lengths: Vec<u64> = Vec::new();
        let mut current = 0u64;
        for z in window.iter() {
            if weight.eval(&GroupElement::line(z))? >= level {
                current += 1;
            } else if current > 0 {
                run_lengths.push(current);
                current = 0;
            }
        }
        if current > 0 {
            run_lengths.push(current);
        }
        run_lengths.sort_unstable();
        let longest = run_lengths.last().copied().unwrap_or(0);
        if longest >= horizon {
            return Ok(Some(CorollaryWitness {
                constant: level,
                run_lengths,
                covers_up_to: longest,
            }));
        }
    }
    Ok(None)
}

/// Check condition (ii) of the criterion for `T_{a,w}` at horizon `N`.
///
/// For bilateral shifts every `u_n` comes from the exact interval search;
/// otherwise the cocycle is maximized pointwise over the window. `B`
/// defaults to all of `[1, N]`.
pub fn condition_ii_diagnostic(
    weight: &WeightSpec,
    step: &GroupElement,
    horizon: u64,
    window: Window,
    set_b: Option<IndexSet>,
) -> Result<ConditionIIReport> {
    if horizon < 1 {
        return Err(Error::Domain("condition (ii) needs horizon >= 1".into()));
    }
    let set_b = match set_b {
        Some(b) => b,
        None => IndexSet::full(horizon)?,
    };
    let members: Vec<u64> = set_b
        .members()
        .iter()
        .copied()
        .filter(|n| *n <= horizon)
        .collect();
    if members.is_empty() {
        return Err(Error::Domain(
            "condition (ii) needs at least one exponent in B within the horizon".into(),
        ));
    }

    let mut entries = Vec::with_capacity(members.len());
    match shift_direction(weight, step) {
        Some(direction) => {
            for &n in &members {
                let mut entry = best_interval(weight, n, window)?;
                // map the best interval [s, s+n-1] to the cocycle argmax
                let start = entry.start.unwrap();
                entry.point = if direction < 0 {
                    GroupElement::line(start + n as i64)
                } else {
                    GroupElement::line(start - 1)
                };
                entries.push(entry);
            }
        }
        None => {
            let op = WeightedTranslation::new(weight.clone(), *step, 1.0)?;
            let maxima = max_phi_over_window(&op, horizon, window)?;
            for &n in &members {
                let (point, ln_phi) = maxima[(n - 1) as usize];
                let phi = op.phi_exact(n, &point)?;
                let reciprocal_exact = phi.recip();
                entries.push(IntervalEntry {
                    length: n,
                    start: None,
                    point,
                    log_weight_product: ln_phi,
                    reciprocal: log_of_rational(&reciprocal_exact),
                    reciprocal_exact,
                });
            }
        }
    }

    let mut partial_sums = Vec::with_capacity(entries.len());
    let mut running = 0f64;
    for entry in &entries {
        running += entry.reciprocal.value();
        partial_sums.push(running);
    }

    let tail_from = horizon.div_ceil(2);
    let tail: Vec<&IntervalEntry> = entries.iter().filter(|e| e.length >= tail_from).collect();
    let rho_hat = if tail.len() >= 2 {
        tail.windows(2)
            .map(|pair| (pair[1].reciprocal.ln() - pair[0].reciprocal.ln()).exp())
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        f64::NAN
    };

    let verdict = if rho_hat.is_finite() && rho_hat < 1.0 {
        SummabilityVerdict::SummableEvidence
    } else if !tail.is_empty() {
        let first = tail[0].reciprocal.ln();
        let floor = tail
            .iter()
            .map(|e| e.reciprocal.ln())
            .fold(f64::INFINITY, f64::min);
        // bounded below by half the tail's starting value
        if floor >= first - std::f64::consts::LN_2 {
            SummabilityVerdict::DivergingEvidence
        } else {
            SummabilityVerdict::Inconclusive
        }
    } else {
        SummabilityVerdict::Inconclusive
    };

    let corollary_witness = corollary_witness_search(weight, window, horizon)?;

    Ok(ConditionIIReport {
        set_b,
        entries,
        partial_sums,
        rho_hat,
        verdict,
        corollary_witness,
    })
}

/// One decay level of the condition (i) report.
#[derive(Debug, Clone)]
pub struct DecayLevel {
    pub delta: f64,
    pub exponents: IndexSet,
    pub density: DensityEstimate,
}

/// Condition (i) diagnostic for one compact set.
#[derive(Debug, Clone)]
pub struct ConditionIReport {
    pub compact_set: Vec<GroupElement>,
    /// `s_n = ||phi_n|_K||_p` for `n = 1..=N`, log domain.
    pub restricted_norms: Vec<LogValue>,
    pub levels: Vec<DecayLevel>,
    /// Some level's upper-density estimate reached `1 - theta`.
    pub full_density_evidence: bool,
}

/// Check condition (i): decay of `||phi_n|_K||_p` along high-density sets
/// of exponents, one `A_delta = {n : s_n < delta}` per grid level.
pub fn condition_i_diagnostic(
    op: &WeightedTranslation,
    compact_set: &[GroupElement],
    horizon: u64,
    delta_grid: &[f64],
    theta: f64,
) -> Result<ConditionIReport> {
    if compact_set.is_empty() {
        return Err(Error::Domain("condition (i) needs a nonempty compact set".into()));
    }
    if delta_grid.is_empty() {
        return Err(Error::Domain("condition (i) needs at least one decay level".into()));
    }
    let unique: BTreeSet<GroupElement> = compact_set.iter().copied().collect();
    let chi = Vector::from_entries(
        unique
            .iter()
            .map(|g| (*g, num::complex::Complex64::new(1.0, 0.0))),
    );
    let restricted_norms = op.orbit_norm_series(&chi, horizon)?;
    let mut levels = Vec::with_capacity(delta_grid.len());
    let mut full_density_evidence = false;
    for &delta in delta_grid {
        let exponents = IndexSet::from_predicate(horizon, |n| {
            restricted_norms[(n - 1) as usize].ln() < delta.ln()
        })?;
        let density = density_estimate(&exponents, theta)?;
        if density.upper_est >= 1.0 - theta {
            full_density_evidence = true;
        }
        levels.push(DecayLevel {
            delta,
            exponents,
            density,
        });
    }
    Ok(ConditionIReport {
        compact_set: unique.into_iter().collect(),
        restricted_norms,
        levels,
        full_density_evidence,
    })
}

/// One exponent of a synthesis plan: the singleton `K_n = {g_n}` with the
/// lemma's `a_n`, truncated tail sum `r_n`, and coefficient `c_n`.
#[derive(Debug, Clone)]
pub struct PlanEntry {
    pub n: u64,
    pub point: GroupElement,
    /// `phi_n(g_n)`, exact.
    pub phi_at_point: BigRational,
    /// `a_n = 1 / phi_n(g_n)`, exact.
    pub a_n: BigRational,
    /// `r_n = sum_{i in B, n <= i <= N} a_i`, exact (truncated at `N`).
    pub r_n: BigRational,
    /// `c_n = 1 / (sqrt(r_n) phi_n(g_n))`, log domain.
    pub c_n: LogValue,
    /// `c_n^2 = 1 / (r_n phi_n(g_n)^2)`, exact.
    pub c_n_squared: BigRational,
}

impl PlanEntry {
    /// The guaranteed orbit lower bound `c_n phi_n(g_n) = r_n^{-1/2}`.
    pub fn lower_bound(&self) -> LogValue {
        LogValue::from_ln(-0.5 * rational_ln(&self.r_n))
    }

    /// `(c_n phi_n(g_n))^2 = 1 / r_n`, exact.
    pub fn lower_bound_squared(&self) -> BigRational {
        self.r_n.recip()
    }
}

/// The `(B, g_n, a_n, r_n, c_n)` data of the irregular-vector construction,
/// truncated at a finite horizon.
#[derive(Debug, Clone)]
pub struct SynthesisPlan {
    pub set_b: IndexSet,
    pub truncation: u64,
    pub entries: Vec<PlanEntry>,
}

/// Outcome of re-verifying the lemma chain on a concrete plan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainCheck {
    /// `r` is nonincreasing along the plan (equivalently the per-step
    /// inequality `a_n <= 2 sqrt(r_n)(sqrt(r_n) - sqrt(r_next))` holds).
    pub steps_hold: bool,
    /// The telescoped bound `sum c_n <= 2 sqrt(sum a_n)` verified with
    /// outward-rounded rational square roots.
    pub sum_bounded: bool,
    /// Upper bound used for `sum c_n`.
    pub coefficient_sum_upper: f64,
    /// Lower bound used for `2 sqrt(sum a_n)`.
    pub budget_lower: f64,
    /// `c_n phi_n(g_n)` is nondecreasing in `n`.
    pub bound_monotone: bool,
}

/// Rational bracket around `sqrt(value)`: returns `(lo, hi)` with
/// `lo <= sqrt(value) <= hi` and `hi - lo <= 2^-precision / denom` scale.
pub fn sqrt_bounds(value: &BigRational, precision_bits: u32) -> (BigRational, BigRational) {
    assert!(!value.is_negative(), "sqrt of a negative rational");
    if value.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    // sqrt(p/q) = sqrt(p q 4^k) / (q 2^k), bracketed by the integer sqrt
    let scaled: BigInt = (value.numer() * value.denom()) << (2 * precision_bits as u64);
    let root = num::integer::Roots::sqrt(&scaled);
    let denom: BigInt = value.denom() << (precision_bits as u64);
    (
        BigRational::new(root.clone(), denom.clone()),
        BigRational::new(root + BigInt::one(), denom),
    )
}

impl SynthesisPlan {
    pub fn entry(&self, n: u64) -> Option<&PlanEntry> {
        self.entries.iter().find(|e| e.n == n)
    }

    /// Total coefficient budget `sum_n c_n lambda(K_n)^{1/p}` (singleton
    /// sets, so the measure factor is one), as a float.
    pub fn coefficient_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.c_n.value()).sum()
    }

    /// Re-verify the construction chain in exact arithmetic.
    pub fn verify_chain(&self) -> ChainCheck {
        let mut steps_hold = true;
        for pair in self.entries.windows(2) {
            if pair[1].r_n > pair[0].r_n {
                steps_hold = false;
            }
        }
        let mut bound_monotone = true;
        for pair in self.entries.windows(2) {
            // bounds are r^{-1/2}: nondecreasing iff r nonincreasing
            if pair[1].r_n > pair[0].r_n {
                bound_monotone = false;
            }
        }
        let total_a: BigRational = self.entries.iter().map(|e| e.a_n.clone()).sum();
        let mut sum_bounded = false;
        let mut coefficient_sum_upper = f64::NAN;
        let mut budget_lower = f64::NAN;
        for precision in [128u32, 256, 512] {
            let mut upper = BigRational::zero();
            for entry in &self.entries {
                let (lo, _) = sqrt_bounds(&entry.r_n, precision);
                if lo.is_zero() {
                    upper = BigRational::zero();
                    break;
                }
                upper += &entry.a_n / lo;
            }
            if upper.is_zero() {
                continue;
            }
            let (budget_lo, _) = sqrt_bounds(&total_a, precision);
            let budget = BigRational::from_integer(2.into()) * budget_lo;
            coefficient_sum_upper = rational_to_f64(&upper);
            budget_lower = rational_to_f64(&budget);
            if upper <= budget {
                sum_bounded = true;
                break;
            }
        }
        ChainCheck {
            steps_hold,
            sum_bounded,
            coefficient_sum_upper,
            budget_lower,
            bound_monotone,
        }
    }
}

/// Build the synthesis plan for exponents `B` (truncated at `N`) and the
/// chosen cocycle points `g_n`.
pub fn build_synthesis_plan(
    op: &WeightedTranslation,
    set_b: &IndexSet,
    points: &BTreeMap<u64, GroupElement>,
    truncation: u64,
) -> Result<SynthesisPlan> {
    let members: Vec<u64> = set_b
        .members()
        .iter()
        .copied()
        .filter(|n| *n <= truncation)
        .collect();
    if members.is_empty() {
        return Err(Error::Domain(
            "synthesis needs at least one exponent in B within the truncation".into(),
        ));
    }
    let mut rows: Vec<(u64, GroupElement, BigRational, BigRational)> = Vec::new();
    for &n in &members {
        let point = *points.get(&n).ok_or_else(|| {
            Error::Domain(format!("no cocycle point g_{n} supplied for exponent {n}"))
        })?;
        let phi = op.phi_exact(n, &point)?;
        let a_n = phi.recip();
        rows.push((n, point, phi, a_n));
    }
    // suffix sums r_n = sum_{i >= n} a_i over the truncated plan
    let mut suffix = BigRational::zero();
    let mut tails = vec![BigRational::zero(); rows.len()];
    for (idx, row) in rows.iter().enumerate().rev() {
        suffix += &row.3;
        tails[idx] = suffix.clone();
    }
    let entries = rows
        .into_iter()
        .zip(tails)
        .map(|((n, point, phi, a_n), r_n)| {
            let c_n_squared = (&r_n * &phi * &phi).recip();
            let c_n = LogValue::from_ln(0.5 * rational_ln(&c_n_squared));
            PlanEntry {
                n,
                point,
                phi_at_point: phi,
                a_n,
                r_n,
                c_n,
                c_n_squared,
            }
        })
        .collect();
    Ok(SynthesisPlan {
        set_b: set_b.clone(),
        truncation,
        entries,
    })
}

/// The synthesized candidate vector `y = sum_{n in B} c_n chi_{g_n}` and
/// the bookkeeping around it.
#[derive(Debug, Clone)]
pub struct SynthesizedVector {
    pub vector: Vector,
    pub plan: SynthesisPlan,
    /// Support points shared by several plan exponents; coefficients were
    /// summed there.
    pub collisions: Vec<GroupElement>,
    /// `||y||_p` of the float vector.
    pub norm: f64,
    /// The triangle-inequality budget `sum c_n`.
    pub norm_budget: f64,
}

/// Materialize the plan's vector and check the triangle-inequality budget.
pub fn synthesize_vector(op: &WeightedTranslation, plan: SynthesisPlan) -> Result<SynthesizedVector> {
    let mut seen: BTreeMap<GroupElement, u32> = BTreeMap::new();
    let mut vector = Vector::new();
    for entry in &plan.entries {
        *seen.entry(entry.point).or_insert(0) += 1;
        vector.add_assign_entry(
            entry.point,
            num::complex::Complex64::new(entry.c_n.value(), 0.0),
        );
    }
    let collisions: Vec<GroupElement> = seen
        .into_iter()
        .filter_map(|(g, count)| (count > 1).then_some(g))
        .collect();
    if vector.is_empty() {
        return Err(Error::Domain("synthesized vector has empty support".into()));
    }
    let norm = vector.norm(op.p())?.value();
    let norm_budget = plan.coefficient_sum();
    Ok(SynthesizedVector {
        vector,
        plan,
        collisions,
        norm,
        norm_budget,
    })
}

/// Decay evidence for one basis set `K_k` in the DCC sense.
#[derive(Debug, Clone)]
pub struct BasisDecay {
    pub compact_set: Vec<GroupElement>,
    /// Max of `||T^n chi_K||_p` over `n` in `A` intersected with the upper
    /// half `[ceil(N/2), N]`; `None` when that intersection is empty.
    pub max_tail_norm: Option<LogValue>,
}

/// One lower-bound row of the DCC verification.
#[derive(Debug, Clone)]
pub struct LowerBoundCheck {
    pub n: u64,
    pub orbit_norm: LogValue,
    pub bound: LogValue,
    pub holds: bool,
    /// Whether the comparison ran in exact rationals.
    pub exact: bool,
}

/// Full DCC verification report for a synthesized vector.
#[derive(Debug, Clone)]
pub struct DccVerification {
    pub basis_decay: Vec<BasisDecay>,
    pub lower_bounds: Vec<LowerBoundCheck>,
    pub all_bounds_hold: bool,
}

/// Whether the synthesized float vector still matches its plan closely
/// enough for plan coefficients to stand in for vector entries.
fn vector_matches_plan(y: &SynthesizedVector) -> bool {
    if !y.collisions.is_empty() {
        return false;
    }
    if y.vector.support_size() != y.plan.entries.len() {
        return false;
    }
    y.plan.entries.iter().all(|entry| {
        y.vector
            .get(&entry.point)
            .map(|value| {
                let expected = entry.c_n.value();
                value.im == 0.0 && (value.re - expected).abs() <= 1e-12 * expected.abs()
            })
            .unwrap_or(false)
    })
}

/// Verify the DCC data: per-basis decay evidence and the per-exponent
/// lower bounds `||T^n y||_p >= c_n phi_n(g_n)`.
///
/// With `allow_exact`, `p = 2`, and a collision-free plan whose vector
/// still matches it, the bound comparison is exact:
/// `||T^n y||_2^2 = sum_m c_m^2 phi_n(g_m)^2` against `1 / r_n` in
/// rationals. Otherwise the log-domain norms are compared with a `1e-9`
/// slack on the log scale.
pub fn verify_dcc(
    op: &WeightedTranslation,
    y: &SynthesizedVector,
    basis: &[Vec<GroupElement>],
    set_a: &IndexSet,
    horizon: u64,
    allow_exact: bool,
) -> Result<DccVerification> {
    let mut basis_decay = Vec::with_capacity(basis.len());
    let half = horizon.div_ceil(2);
    for compact_set in basis {
        let chi = Vector::from_entries(
            compact_set
                .iter()
                .map(|g| (*g, num::complex::Complex64::new(1.0, 0.0))),
        );
        if chi.is_empty() {
            return Err(Error::Domain("empty basis set in DCC verification".into()));
        }
        let series = op.orbit_norm_series(&chi, horizon)?;
        let mut max_tail_norm: Option<LogValue> = None;
        for n in half..=horizon {
            if set_a.contains(n) {
                let value = series[(n - 1) as usize];
                if max_tail_norm.is_none_or(|cur| value > cur) {
                    max_tail_norm = Some(value);
                }
            }
        }
        basis_decay.push(BasisDecay {
            compact_set: compact_set.clone(),
            max_tail_norm,
        });
    }

    let use_exact = allow_exact && op.p() == 2.0 && vector_matches_plan(y);
    let mut lower_bounds = Vec::new();
    for entry in &y.plan.entries {
        if entry.n > horizon {
            continue;
        }
        let n = entry.n;
        let (orbit_norm, bound, holds, exact) = if use_exact {
            let mut norm_sq = BigRational::zero();
            for other in &y.plan.entries {
                let phi = op.phi_exact(n, &other.point)?;
                norm_sq += &other.c_n_squared * &phi * &phi;
            }
            let bound_sq = entry.lower_bound_squared();
            let holds = norm_sq >= bound_sq;
            (
                LogValue::from_ln(0.5 * rational_ln(&norm_sq)),
                entry.lower_bound(),
                holds,
                true,
            )
        } else {
            let norm = op.orbit_norm(&y.vector, n)?;
            let bound = entry.lower_bound();
            (norm, bound, norm.ln() >= bound.ln() - 1e-9, false)
        };
        lower_bounds.push(LowerBoundCheck {
            n,
            orbit_norm,
            bound,
            holds,
            exact,
        });
    }
    let all_bounds_hold = lower_bounds.iter().all(|row| row.holds);
    Ok(DccVerification {
        basis_decay,
        lower_bounds,
        all_bounds_hold,
    })
}
