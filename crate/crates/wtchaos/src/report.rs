//! Report assembly: JSON documents, plot-ready CSV series, and the run
//! manifest.
//!
//! Numeric reproducibility rules: floats are written with Rust's shortest
//! round-trip formatting, log-domain quantities appear as both `log_value`
//! and (saturating) `value`, exact rationals are carried as `n/d` strings
//! next to their float projections. Two runs on the same config produce
//! byte-identical artifacts except for the manifest timestamp.

use std::io::Write;
use std::path::{Path, PathBuf};

use num::rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::dccw::{
    ChainCheck, ConditionIIReport, ConditionIReport, DccVerification, SummabilityVerdict,
    SynthesisPlan, SynthesizedVector,
};
use crate::density::PairTestReport;
use crate::div::{IrregularityEvidence, MirrorReport};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::logval::LogValue;
use crate::weight::{rational_ln, rational_to_f64};

/// Log-domain quantity in report form.
#[derive(Debug, Clone, Serialize)]
pub struct LogValueRepr {
    pub log_value: f64,
    /// Saturates to `0` / `inf` outside `f64` range.
    pub value: f64,
}

impl From<LogValue> for LogValueRepr {
    fn from(v: LogValue) -> Self {
        LogValueRepr {
            log_value: v.ln(),
            value: v.value(),
        }
    }
}

/// Exact rational in report form.
#[derive(Debug, Clone, Serialize)]
pub struct RationalRepr {
    pub exact: String,
    pub value: f64,
    pub log_value: f64,
}

impl From<&BigRational> for RationalRepr {
    fn from(v: &BigRational) -> Self {
        RationalRepr {
            exact: v.to_string(),
            value: rational_to_f64(v),
            log_value: if num::Zero::is_zero(v) {
                f64::NEG_INFINITY
            } else {
                rational_ln(&num::Signed::abs(v))
            },
        }
    }
}

fn element_repr(g: &GroupElement) -> String {
    g.to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub group: String,
    pub step: String,
    pub weight: String,
    pub p: f64,
    pub horizon: u64,
    pub window: Option<[i64; 2]>,
    pub theta: f64,
}

impl ConfigEcho {
    pub fn from_config(config: &ExperimentConfig) -> Self {
        ConfigEcho {
            group: match config.group.modulus() {
                None => "Z".into(),
                Some(m) => format!("ZxZ{m}"),
            },
            step: element_repr(&config.step),
            weight: config.weight.to_string(),
            p: config.p,
            horizon: config.horizon,
            window: config.window.map(|w| [w.lo, w.hi]),
            theta: config.theta,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayLevelJson {
    pub delta: f64,
    pub exponent_count: usize,
    pub upper_density_est: f64,
    pub lower_density_est: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionIJson {
    pub compact_set: Vec<String>,
    pub levels: Vec<DecayLevelJson>,
    pub full_density_evidence: bool,
}

impl ConditionIJson {
    pub fn from_report(report: &ConditionIReport) -> Self {
        ConditionIJson {
            compact_set: report.compact_set.iter().map(element_repr).collect(),
            levels: report
                .levels
                .iter()
                .map(|level| DecayLevelJson {
                    delta: level.delta,
                    exponent_count: level.exponents.len(),
                    upper_density_est: level.density.upper_est,
                    lower_density_est: level.density.lower_est,
                })
                .collect(),
            full_density_evidence: report.full_density_evidence,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalEntryJson {
    pub n: u64,
    pub start: Option<i64>,
    pub point: String,
    pub u_n: RationalRepr,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryWitnessJson {
    pub constant: RationalRepr,
    pub covers_up_to: u64,
    pub run_lengths: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionIIJson {
    pub b_count: usize,
    pub entries: Vec<IntervalEntryJson>,
    pub partial_sums: Vec<f64>,
    pub rho_hat: f64,
    pub verdict: SummabilityVerdict,
    pub corollary_witness: Option<CorollaryWitnessJson>,
}

impl ConditionIIJson {
    pub fn from_report(report: &ConditionIIReport) -> Self {
        ConditionIIJson {
            b_count: report.set_b.len(),
            entries: report
                .entries
                .iter()
                .map(|e| IntervalEntryJson {
                    n: e.length,
                    start: e.start,
                    point: element_repr(&e.point),
                    u_n: RationalRepr::from(&e.reciprocal_exact),
                })
                .collect(),
            partial_sums: report.partial_sums.clone(),
            rho_hat: report.rho_hat,
            verdict: report.verdict,
            corollary_witness: report.corollary_witness.as_ref().map(|w| {
                CorollaryWitnessJson {
                    constant: RationalRepr::from(&w.constant),
                    covers_up_to: w.covers_up_to,
                    run_lengths: w.run_lengths.clone(),
                }
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanEntryJson {
    pub n: u64,
    pub point: String,
    pub a_n: RationalRepr,
    pub r_n: RationalRepr,
    pub c_n: LogValueRepr,
    pub lower_bound: LogValueRepr,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanJson {
    pub truncation: u64,
    pub entries: Vec<PlanEntryJson>,
    pub chain: ChainCheck,
    pub coefficient_sum: f64,
}

impl PlanJson {
    pub fn from_plan(plan: &SynthesisPlan) -> Self {
        PlanJson {
            truncation: plan.truncation,
            entries: plan
                .entries
                .iter()
                .map(|e| PlanEntryJson {
                    n: e.n,
                    point: element_repr(&e.point),
                    a_n: RationalRepr::from(&e.a_n),
                    r_n: RationalRepr::from(&e.r_n),
                    c_n: e.c_n.into(),
                    lower_bound: e.lower_bound().into(),
                })
                .collect(),
            chain: plan.verify_chain(),
            coefficient_sum: plan.coefficient_sum(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesizedJson {
    pub support: Vec<String>,
    pub collisions: Vec<String>,
    pub norm: f64,
    pub norm_budget: f64,
}

impl SynthesizedJson {
    pub fn from_vector(y: &SynthesizedVector) -> Self {
        SynthesizedJson {
            support: y.vector.support().map(element_repr).collect(),
            collisions: y.collisions.iter().map(element_repr).collect(),
            norm: y.norm,
            norm_budget: y.norm_budget,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundJson {
    pub n: u64,
    pub orbit_norm: LogValueRepr,
    pub bound: LogValueRepr,
    pub holds: bool,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisDecayJson {
    pub compact_set: Vec<String>,
    pub max_tail_norm: Option<LogValueRepr>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationJson {
    pub basis_decay: Vec<BasisDecayJson>,
    pub lower_bounds: Vec<LowerBoundJson>,
    pub all_bounds_hold: bool,
}

impl VerificationJson {
    pub fn from_verification(v: &DccVerification) -> Self {
        VerificationJson {
            basis_decay: v
                .basis_decay
                .iter()
                .map(|b| BasisDecayJson {
                    compact_set: b.compact_set.iter().map(element_repr).collect(),
                    max_tail_norm: b.max_tail_norm.map(Into::into),
                })
                .collect(),
            lower_bounds: v
                .lower_bounds
                .iter()
                .map(|row| LowerBoundJson {
                    n: row.n,
                    orbit_norm: row.orbit_norm.into(),
                    bound: row.bound.into(),
                    holds: row.holds,
                    exact: row.exact,
                })
                .collect(),
            all_bounds_hold: v.all_bounds_hold,
        }
    }
}

/// The split DCCW verdict: each condition reported separately, combined
/// only as "both halves hold at this horizon".
#[derive(Debug, Clone, Serialize)]
pub struct DccwVerdict {
    pub condition_i_full_density: bool,
    pub condition_ii: SummabilityVerdict,
    pub dccw_evidence: bool,
    pub label: String,
}

impl DccwVerdict {
    pub fn combine(condition_i: bool, condition_ii: SummabilityVerdict) -> Self {
        let ii_ok = condition_ii == SummabilityVerdict::SummableEvidence;
        let label = match (condition_i, ii_ok) {
            (true, true) => "dccw_evidence",
            (true, false) => "condition_i_only",
            (false, true) => "condition_ii_only",
            (false, false) => "neither",
        };
        DccwVerdict {
            condition_i_full_density: condition_i,
            condition_ii,
            dccw_evidence: condition_i && ii_ok,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IrregularityJson {
    pub near_zero_threshold: f64,
    pub unbounded_threshold: f64,
    pub near_zero_count: usize,
    pub near_zero_upper_density: f64,
    pub unbounded_count: usize,
    pub unbounded_upper_density: f64,
    pub max_norm: LogValueRepr,
}

impl IrregularityJson {
    pub fn from_evidence(e: &IrregularityEvidence) -> Self {
        IrregularityJson {
            near_zero_threshold: e.near_zero_threshold,
            unbounded_threshold: e.unbounded_threshold,
            near_zero_count: e.near_zero.len(),
            near_zero_upper_density: e.near_zero_density.upper_est,
            unbounded_count: e.unbounded.len(),
            unbounded_upper_density: e.unbounded_density.upper_est,
            max_norm: e.max_norm.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MirrorJson {
    pub max_reciprocity_error: f64,
    pub reciprocity_ok: bool,
    pub component_zero: IrregularityJson,
    pub component_one: IrregularityJson,
    pub mixed_support_dominates: bool,
}

impl MirrorJson {
    pub fn from_report(r: &MirrorReport) -> Self {
        MirrorJson {
            max_reciprocity_error: r.max_reciprocity_error,
            reciprocity_ok: r.reciprocity_ok,
            component_zero: IrregularityJson::from_evidence(&r.component_zero),
            component_one: IrregularityJson::from_evidence(&r.component_one),
            mixed_support_dominates: r.mixed_support_dominates,
        }
    }
}

/// The all-in-one report document. `verification` is the array of
/// per-exponent lower-bound rows; the basis decay evidence and the
/// aggregate flag ride alongside.
#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub config: ConfigEcho,
    pub condition_i: Vec<ConditionIJson>,
    pub condition_ii: ConditionIIJson,
    pub plan: PlanJson,
    pub synthesized: SynthesizedJson,
    pub verification: Vec<LowerBoundJson>,
    pub basis_decay: Vec<BasisDecayJson>,
    pub all_bounds_hold: bool,
    pub pair_test: PairTestReport,
    pub verdict: DccwVerdict,
}

/// Reproducibility record written next to `report` artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub config_sha256: String,
    pub emitted_files: Vec<String>,
    pub generated_at_unix: u64,
}

impl RunManifest {
    pub fn new(config_text: &str, emitted_files: Vec<String>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(config_text.as_bytes());
        RunManifest {
            tool: "wtchaos".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: format!("{:x}", hasher.finalize()),
            emitted_files,
            generated_at_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// Shortest round-trip float formatting (`inf`, `-inf`, `NaN` spelled out).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

/// Write a CSV file with the given header and preformatted rows.
pub fn write_csv<P: AsRef<Path>>(
    path: P,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<()> {
    let path = path.as_ref();
    let mut file = std::fs::File::create(path)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))?;
    writeln!(file, "{header}").map_err(|e| Error::Config(e.to_string()))?;
    for row in rows {
        writeln!(file, "{row}").map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

/// Serialize any report value as pretty JSON into `path`.
pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

/// A log-domain series as CSV rows `n,log_value,value`.
pub fn series_rows(series: &[LogValue]) -> impl Iterator<Item = String> + '_ {
    series.iter().enumerate().map(|(idx, v)| {
        format!("{},{},{}", idx + 1, fmt_f64(v.ln()), fmt_f64(v.value()))
    })
}

/// Ensure the output directory exists and return the joined path.
pub fn artifact_path(out_dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    Ok(out_dir.join(name))
}
