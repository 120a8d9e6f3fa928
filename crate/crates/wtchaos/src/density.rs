//! Finite-horizon density estimation and the distributional functions
//! of orbit-distance series.
//!
//! Upper and lower densities are limsup/liminf statements, so they are not
//! computable; what this module produces are tail-window extrema of the
//! running density, flagged as estimates everywhere they appear. The same
//! convention applies to the distributional functions `F` and `F*`: the
//! reported values are max/min of `F^n` over the tail window `[theta*N, N]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::WeightedTranslation;
use crate::vector::Vector;

/// A subset of `[1, N]`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    horizon: u64,
    members: Vec<u64>,
}

impl IndexSet {
    pub fn new(horizon: u64, mut members: Vec<u64>) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Domain("index set needs a positive horizon".into()));
        }
        members.sort_unstable();
        members.dedup();
        if let (Some(first), Some(last)) = (members.first(), members.last()) {
            if *first < 1 || *last > horizon {
                return Err(Error::Domain(format!(
                    "index set members must lie in [1, {horizon}]"
                )));
            }
        }
        Ok(IndexSet { horizon, members })
    }

    /// The full set `[1, N]`.
    pub fn full(horizon: u64) -> Result<Self> {
        Self::new(horizon, (1..=horizon).collect())
    }

    /// Members selected by a predicate on `1..=horizon`.
    pub fn from_predicate<F: FnMut(u64) -> bool>(horizon: u64, mut keep: F) -> Result<Self> {
        Self::new(horizon, (1..=horizon).filter(|n| keep(*n)).collect())
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Complement within `[1, horizon]`.
    pub fn complement(&self) -> IndexSet {
        let members = (1..=self.horizon).filter(|n| !self.contains(*n)).collect();
        IndexSet {
            horizon: self.horizon,
            members,
        }
    }

    /// Subset relation (same horizon assumed).
    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.members.iter().all(|n| other.contains(*n))
    }
}

/// Tail-window estimates of upper and lower density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityEstimate {
    /// Running density `card(A \cap [1, n]) / n` for `n = 1..=N`.
    pub running: Vec<f64>,
    /// Max of the running density over the tail window: upper-density estimate.
    pub upper_est: f64,
    /// Min over the same window: lower-density estimate.
    pub lower_est: f64,
    /// Fraction of the horizon skipped before the tail window starts.
    pub tail_fraction: f64,
}

impl DensityEstimate {
    /// First `n` inside the tail window.
    pub fn tail_start(&self) -> u64 {
        tail_start(self.running.len() as u64, self.tail_fraction)
    }
}

fn tail_start(horizon: u64, theta: f64) -> u64 {
    ((theta * horizon as f64).ceil() as u64).clamp(1, horizon)
}

/// Running-density estimate for a set of indices.
pub fn density_estimate(set: &IndexSet, theta: f64) -> Result<DensityEstimate> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must be in (0,1), got {theta}")));
    }
    let horizon = set.horizon();
    let mut running = Vec::with_capacity(horizon as usize);
    let mut count = 0usize;
    let mut iter = set.members().iter().peekable();
    for n in 1..=horizon {
        while iter.peek().is_some_and(|m| **m == n) {
            iter.next();
            count += 1;
        }
        running.push(count as f64 / n as f64);
    }
    let start = tail_start(horizon, theta) as usize;
    let tail = &running[start - 1..];
    let upper_est = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lower_est = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DensityEstimate {
        running,
        upper_est,
        lower_est,
        tail_fraction: theta,
    })
}

/// `F^n(tau) = (1/n) card{1 <= j <= n-1 : dist_j < tau}`, with the strict
/// inequality. `dist` is indexed from `j = 1`.
pub fn distributional_function(dist: &[f64], n: u64, tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "distributional function needs n >= 2, got {n}"
        )));
    }
    let needed = (n - 1) as usize;
    if dist.len() < needed {
        return Err(Error::Domain(format!(
            "distance series has {} entries, need {needed}",
            dist.len()
        )));
    }
    let count = dist[..needed].iter().filter(|d| **d < tau).count();
    Ok(count as f64 / n as f64)
}

/// Distributional profile of a pair of orbits: the full `F^n` table plus
/// tail-window estimates of `F*` (max) and `F` (min) per tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionalProfile {
    pub tau_grid: Vec<f64>,
    /// Orbit distance `||T^j x - T^j y||_p` for `j = 1..=N`.
    pub distances: Vec<f64>,
    /// `f_table[i][k] = F^n(tau_grid[k])` for `n = i + 2`.
    pub f_table: Vec<Vec<f64>>,
    /// Per tolerance: max of `F^n` over the tail window.
    pub f_star_est: Vec<f64>,
    /// Per tolerance: min of `F^n` over the tail window.
    pub f_lower_est: Vec<f64>,
    pub horizon: u64,
    pub tail_fraction: f64,
}

impl DistributionalProfile {
    fn grid_index(&self, value: f64) -> Result<usize> {
        self.tau_grid
            .iter()
            .position(|t| *t == value)
            .ok_or_else(|| Error::Domain(format!("{value} is not on the tolerance grid")))
    }

    pub fn f_star_at(&self, tau: f64) -> Result<f64> {
        Ok(self.f_star_est[self.grid_index(tau)?])
    }

    pub fn f_lower_at(&self, epsilon: f64) -> Result<f64> {
        Ok(self.f_lower_est[self.grid_index(epsilon)?])
    }
}

/// Distances between the orbits of `x` and `y` under `T`, for `j = 1..=N`.
/// Linearity collapses the pair distance to one orbit-norm series of `x - y`.
pub fn orbit_distance_series(
    op: &WeightedTranslation,
    x: &Vector,
    y: &Vector,
    horizon: u64,
) -> Result<Vec<f64>> {
    let difference = x.sub(y);
    if difference.is_empty() {
        return Ok(vec![0.0; horizon as usize]);
    }
    Ok(op
        .orbit_norm_series(&difference, horizon)?
        .iter()
        .map(|v| v.value())
        .collect())
}

/// Build the distributional profile of the pair `(x, y)` at finite horizon.
pub fn pair_profile(
    op: &WeightedTranslation,
    x: &Vector,
    y: &Vector,
    horizon: u64,
    tau_grid: &[f64],
    theta: f64,
) -> Result<DistributionalProfile> {
    if horizon < 2 {
        return Err(Error::Domain("pair profile needs horizon >= 2".into()));
    }
    if tau_grid.is_empty() {
        return Err(Error::Domain("empty tolerance grid".into()));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta must be in (0,1), got {theta}")));
    }
    let distances = orbit_distance_series(op, x, y, horizon)?;
    let mut f_table = Vec::with_capacity((horizon - 1) as usize);
    let mut counts = vec![0u64; tau_grid.len()];
    for n in 2..=horizon {
        // account for j = n - 1, then emit F^n
        let d = distances[(n - 2) as usize];
        for (count, tau) in counts.iter_mut().zip(tau_grid) {
            if d < *tau {
                *count += 1;
            }
        }
        f_table.push(counts.iter().map(|c| *c as f64 / n as f64).collect());
    }
    let start = tail_start(horizon, theta).max(2);
    let mut f_star_est = vec![f64::NEG_INFINITY; tau_grid.len()];
    let mut f_lower_est = vec![f64::INFINITY; tau_grid.len()];
    for n in start..=horizon {
        let row: &Vec<f64> = &f_table[(n - 2) as usize];
        for k in 0..tau_grid.len() {
            f_star_est[k] = f_star_est[k].max(row[k]);
            f_lower_est[k] = f_lower_est[k].min(row[k]);
        }
    }
    Ok(DistributionalProfile {
        tau_grid: tau_grid.to_vec(),
        distances,
        f_table,
        f_star_est,
        f_lower_est,
        horizon,
        tail_fraction: theta,
    })
}

/// Outcome of the scrambled-pair test. Never a proof: the chaotic verdict
/// only says the finite-horizon estimates crossed the requested thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVerdict {
    EvidenceChaoticPair,
    Inconclusive,
}

/// The scrambled-pair decision record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairTestReport {
    pub verdict: PairVerdict,
    pub epsilon: f64,
    pub tau: f64,
    pub delta_low: f64,
    pub delta_high: f64,
    pub f_lower_at_epsilon: f64,
    pub f_star_at_tau: f64,
}

/// Apply the separation/proximity thresholds to a profile.
pub fn scrambled_pair_verdict(
    profile: &DistributionalProfile,
    epsilon: f64,
    tau: f64,
    delta_low: f64,
    delta_high: f64,
) -> Result<PairTestReport> {
    let f_lower_at_epsilon = profile.f_lower_at(epsilon)?;
    let f_star_at_tau = profile.f_star_at(tau)?;
    let verdict = if f_lower_at_epsilon <= delta_low && f_star_at_tau >= 1.0 - delta_high {
        PairVerdict::EvidenceChaoticPair
    } else {
        PairVerdict::Inconclusive
    };
    Ok(PairTestReport {
        verdict,
        epsilon,
        tau,
        delta_low,
        delta_high,
        f_lower_at_epsilon,
        f_star_at_tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, GroupSpec};
    use crate::weight::WeightSpec;
    use num::rational::BigRational;

    fn evens(horizon: u64) -> IndexSet {
        IndexSet::from_predicate(horizon, |n| n % 2 == 0).unwrap()
    }

    #[test]
    fn periodic_set_density_is_a_half() {
        let est = density_estimate(&evens(10_000), 0.1).unwrap();
        assert!((est.upper_est - 0.5).abs() < 1e-3);
        assert!((est.lower_est - 0.5).abs() < 1e-3);
    }

    #[test]
    fn full_set_density_is_one() {
        let est = density_estimate(&IndexSet::full(500).unwrap(), 0.1).unwrap();
        assert_eq!(est.upper_est, 1.0);
        assert_eq!(est.lower_est, 1.0);
    }

    #[test]
    fn block_set_oscillates_between_thirds() {
        // union of [4^k, 2*4^k)
        let horizon = 65_536;
        let set = IndexSet::from_predicate(horizon, |n| {
            let mut base = 1u64;
            loop {
                if n >= base && n < 2 * base {
                    return true;
                }
                if base > n {
                    return false;
                }
                base *= 4;
            }
        })
        .unwrap();
        let est = density_estimate(&set, 0.01).unwrap();
        assert!((est.upper_est - 2.0 / 3.0).abs() < 0.02, "upper {}", est.upper_est);
        assert!((est.lower_est - 1.0 / 3.0).abs() < 0.02, "lower {}", est.lower_est);
    }

    #[test]
    fn bad_theta_is_rejected() {
        assert!(density_estimate(&evens(100), 0.0).is_err());
        assert!(density_estimate(&evens(100), 1.0).is_err());
    }

    #[test]
    fn complement_duality_slack() {
        let horizon = 4096;
        let set = IndexSet::from_predicate(horizon, |n| (n / 64) % 3 == 0).unwrap();
        let theta = 0.1;
        let a = density_estimate(&set, theta).unwrap();
        let b = density_estimate(&set.complement(), theta).unwrap();
        let slack = 2.0 / tail_start(horizon, theta) as f64;
        assert!(b.upper_est >= 1.0 - a.upper_est - slack);
    }

    #[test]
    fn union_running_density_is_additive() {
        let horizon = 2_000;
        let a = IndexSet::from_predicate(horizon, |n| n % 3 == 0).unwrap();
        let b = IndexSet::from_predicate(horizon, |n| n % 3 == 1).unwrap();
        let union = IndexSet::from_predicate(horizon, |n| n % 3 != 2).unwrap();
        let theta = 0.25;
        let da = density_estimate(&a, theta).unwrap();
        let db = density_estimate(&b, theta).unwrap();
        let du = density_estimate(&union, theta).unwrap();
        for n in 0..horizon as usize {
            assert!((da.running[n] + db.running[n] - du.running[n]).abs() < 1e-12);
        }
    }

    #[test]
    fn distributional_function_examples() {
        // identical orbits: everything counts
        let zeros = vec![0.0; 9];
        assert_eq!(distributional_function(&zeros, 10, 1.0).unwrap(), 0.9);

        // dist_j = j, n=5, tau=3: j in {1,2} counts
        let ramp: Vec<f64> = (1..=10).map(|j| j as f64).collect();
        assert_eq!(distributional_function(&ramp, 5, 3.0).unwrap(), 2.0 / 5.0);

        // dist_j = 2^j, n=6, tau=10: 2^j < 10 iff j <= 3
        let doubling: Vec<f64> = (1..=10).map(|j| 2f64.powi(j)).collect();
        assert_eq!(distributional_function(&doubling, 6, 10.0).unwrap(), 0.5);

        assert!(distributional_function(&ramp, 1, 3.0).is_err());
        assert!(distributional_function(&ramp[..2], 9, 3.0).is_err());
    }

    #[test]
    fn strict_inequality_excludes_ties() {
        let flat = vec![1.0; 9];
        assert_eq!(distributional_function(&flat, 10, 1.0).unwrap(), 0.0);
        assert_eq!(
            distributional_function(&flat, 10, 1.0 + 1e-9).unwrap(),
            0.9
        );
    }

    fn doubling_shift() -> WeightedTranslation {
        let w = WeightSpec::constant(
            GroupSpec::IntegerLine,
            BigRational::from_integer(2.into()),
        )
        .unwrap();
        WeightedTranslation::bilateral_shift(w, 2.0).unwrap()
    }

    #[test]
    fn profile_of_identical_orbits() {
        let op = doubling_shift();
        let x = Vector::chi(GroupElement::line(0));
        let profile = pair_profile(&op, &x, &x, 50, &[0.5], 0.1).unwrap();
        // F^n = (n-1)/n for every tau > 0; the tail max sits at n = N
        assert!((profile.f_star_at(0.5).unwrap() - 49.0 / 50.0).abs() < 1e-12);
        assert_eq!(profile.distances, vec![0.0; 50]);
    }

    #[test]
    fn isometric_pair_has_constant_distance() {
        let w = WeightSpec::constant(
            GroupSpec::IntegerLine,
            BigRational::from_integer(1.into()),
        )
        .unwrap();
        let op = WeightedTranslation::bilateral_shift(w, 2.0).unwrap();
        let x = Vector::chi(GroupElement::line(0));
        let y = x.scale_rational(&BigRational::from_integer(2.into()));
        let profile = pair_profile(&op, &x, &y, 40, &[1.0, 1.5], 0.1).unwrap();
        // distance is constantly 1: below tau=1 never (strict), below 1.5 always
        assert_eq!(profile.f_star_at(1.0).unwrap(), 0.0);
        assert!((profile.f_star_at(1.5).unwrap() - 39.0 / 40.0).abs() < 1e-12);
    }

    #[test]
    fn f_table_monotone_in_tau_and_bounded() {
        let op = doubling_shift();
        let x = Vector::chi(GroupElement::line(0));
        let y = Vector::chi(GroupElement::line(3));
        let grid = [0.1, 1.0, 10.0, 1e6];
        let profile = pair_profile(&op, &x, &y, 60, &grid, 0.1).unwrap();
        for (i, row) in profile.f_table.iter().enumerate() {
            let n = i as f64 + 2.0;
            for pair in row.windows(2) {
                assert!(pair[0] <= pair[1]);
            }
            for value in row {
                assert!(*value >= 0.0 && *value <= (n - 1.0) / n);
            }
        }
    }

    #[test]
    fn diverging_orbit_alone_is_inconclusive() {
        // dist_j = 2^j: far from zero eventually, never close again
        let op = doubling_shift();
        let x = Vector::chi(GroupElement::line(0));
        let zero = Vector::new();
        let profile = pair_profile(&op, &x, &zero, 1000, &[0.1, 1e3], 0.1).unwrap();
        let report = scrambled_pair_verdict(&profile, 0.1, 1e3, 0.2, 0.2).unwrap();
        assert_eq!(report.verdict, PairVerdict::Inconclusive);
        assert_eq!(report.f_lower_at_epsilon, 0.0);
        assert!(report.f_star_at_tau < 0.8);
    }

    #[test]
    fn identical_pair_is_inconclusive() {
        let op = doubling_shift();
        let x = Vector::chi(GroupElement::line(0));
        let profile = pair_profile(&op, &x, &x, 100, &[0.1, 10.0], 0.1).unwrap();
        let report = scrambled_pair_verdict(&profile, 0.1, 10.0, 0.2, 0.2).unwrap();
        // both estimates sit near 1: proximity holds but separation fails
        assert_eq!(report.verdict, PairVerdict::Inconclusive);
    }

    #[test]
    fn off_grid_threshold_is_an_error() {
        let op = doubling_shift();
        let x = Vector::chi(GroupElement::line(0));
        let profile = pair_profile(&op, &x, &x, 10, &[0.5], 0.1).unwrap();
        assert!(scrambled_pair_verdict(&profile, 0.25, 0.5, 0.2, 0.2).is_err());
    }
}
