//! Experiment configuration: a TOML document with strictly validated keys.
//!
//! Unknown keys are rejected, ranges are checked eagerly, and every
//! diagnostic names the offending key, so a config either loads completely
//! or fails with an actionable message.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num::rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::weight::{parse_rational, WeightSpec, Window};

/// A group element in config form: a bare integer on the line, a
/// `[z, c]` pair on product groups.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ElementValue {
    Line(i64),
    Product([i64; 2]),
}

impl ElementValue {
    pub fn resolve(&self, group: GroupSpec) -> Result<GroupElement> {
        let element = match (self, group) {
            (ElementValue::Line(z), GroupSpec::IntegerLine) => GroupElement::line(*z),
            (ElementValue::Product([z, c]), GroupSpec::ProductWithCyclic { .. }) => {
                let c = u32::try_from(*c)
                    .map_err(|_| Error::Config(format!("cyclic coordinate {c} out of range")))?;
                GroupElement::product(*z, c)
            }
            _ => {
                return Err(Error::Config(
                    "element shape does not match the group (use an integer on Z, [z, c] on ZxZm)"
                        .into(),
                ))
            }
        };
        group.contains(&element).map_err(|e| Error::Config(e.to_string()))?;
        Ok(element)
    }
}

/// A rational in config form: integer, float, or `"n/d"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Integer(i64),
    Float(f64),
    Text(String),
}

impl RationalValue {
    pub fn resolve(&self, key: &str) -> Result<BigRational> {
        let value = match self {
            RationalValue::Integer(n) => Ok(BigRational::from_integer((*n).into())),
            RationalValue::Float(x) => BigRational::from_float(*x)
                .ok_or_else(|| Error::Config(format!("{key}: {x} is not a finite number"))),
            RationalValue::Text(s) => parse_rational(s),
        }?;
        Ok(value)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightTable {
    rule: String,
    value: Option<RationalValue>,
    left: Option<RationalValue>,
    right: Option<RationalValue>,
    values: Option<Vec<RationalValue>>,
    table_file: Option<PathBuf>,
    entries: Option<BTreeMap<String, RationalValue>>,
    default: Option<RationalValue>,
    base: Option<Box<WeightTable>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchTable {
    window: Option<[i64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisTable {
    #[serde(default = "default_theta")]
    theta: f64,
    #[serde(default = "default_delta_grid")]
    delta_grid: Vec<f64>,
    #[serde(default = "default_tau_grid")]
    tau_grid: Vec<f64>,
    #[serde(default = "default_epsilon")]
    epsilon: f64,
    #[serde(default = "default_tau")]
    tau: f64,
    #[serde(default = "default_delta_low")]
    delta_low: f64,
    #[serde(default = "default_delta_high")]
    delta_high: f64,
    #[serde(default = "default_near_zero")]
    near_zero: f64,
    #[serde(default = "default_unbounded")]
    unbounded: f64,
    compact_sets: Option<Vec<Vec<ElementValue>>>,
    mirror_samples: Option<Vec<i64>>,
    pair_horizon: Option<u64>,
    decay_horizon: Option<u64>,
    rational_bit_cap: Option<u64>,
}

impl Default for AnalysisTable {
    fn default() -> Self {
        AnalysisTable {
            theta: default_theta(),
            delta_grid: default_delta_grid(),
            tau_grid: default_tau_grid(),
            epsilon: default_epsilon(),
            tau: default_tau(),
            delta_low: default_delta_low(),
            delta_high: default_delta_high(),
            near_zero: default_near_zero(),
            unbounded: default_unbounded(),
            compact_sets: None,
            mirror_samples: None,
            pair_horizon: None,
            decay_horizon: None,
            rational_bit_cap: None,
        }
    }
}

fn default_theta() -> f64 {
    0.1
}
fn default_delta_grid() -> Vec<f64> {
    vec![0.1]
}
fn default_tau_grid() -> Vec<f64> {
    vec![0.1, 1.0, 1000.0]
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_tau() -> f64 {
    1000.0
}
fn default_delta_low() -> f64 {
    0.2
}
fn default_delta_high() -> f64 {
    0.2
}
fn default_near_zero() -> f64 {
    0.1
}
fn default_unbounded() -> f64 {
    1000.0
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorTable {
    preset: Option<String>,
    entries: Option<Vec<(ElementValue, f64, f64)>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanTable {
    b: Option<Vec<u64>>,
    points: Option<BTreeMap<String, ElementValue>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityTable {
    members: Option<Vec<u64>>,
    preset: Option<String>,
}

/// The index set the `density` subcommand analyzes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityChoice {
    /// Explicit members.
    Members(Vec<u64>),
    /// The even integers.
    Evens,
    /// The block set `union of [4^k, 2*4^k)`.
    Blocks4,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    group: String,
    m: Option<u32>,
    a: ElementValue,
    p: f64,
    horizon: u64,
    weight: WeightTable,
    #[serde(default)]
    search: SearchTable,
    #[serde(default)]
    analysis: AnalysisTable,
    #[serde(default)]
    vector: VectorTable,
    #[serde(default)]
    vector2: VectorTable,
    #[serde(default)]
    plan: PlanTable,
    #[serde(default)]
    density: DensityTable,
}

/// How the initial vector is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorChoice {
    /// `chi_g` for an explicit point.
    Characteristic(GroupElement),
    /// Run the synthesis pipeline and use its output.
    Synthesized,
    /// The zero vector (only meaningful as the second member of a pair).
    Zero,
    /// Explicit `(position, re, im)` entries.
    Entries(Vec<(GroupElement, f64, f64)>),
}

/// A fully validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    pub step: GroupElement,
    pub weight: WeightSpec,
    pub p: f64,
    pub horizon: u64,
    pub window: Option<Window>,
    pub theta: f64,
    pub delta_grid: Vec<f64>,
    pub tau_grid: Vec<f64>,
    pub epsilon: f64,
    pub tau: f64,
    pub delta_low: f64,
    pub delta_high: f64,
    pub near_zero: f64,
    pub unbounded: f64,
    pub compact_sets: Vec<Vec<GroupElement>>,
    pub mirror_samples: Vec<i64>,
    /// Horizon for pair profiles; defaults to the main horizon.
    pub pair_horizon: u64,
    /// Horizon for the condition (i) decay scan; the decay sets need a
    /// longer tail than the synthesis truncation, so this defaults to ten
    /// times the main horizon.
    pub decay_horizon: u64,
    /// Bit cap for exact cocycle products in rational mode.
    pub rational_bit_cap: u64,
    pub vector: VectorChoice,
    pub vector2: VectorChoice,
    pub plan_b: Option<Vec<u64>>,
    pub plan_points: Option<BTreeMap<u64, GroupElement>>,
    pub density_set: DensityChoice,
    /// The raw config text, for hashing and echoing.
    pub raw_text: String,
}

fn build_weight(table: &WeightTable, group: GroupSpec, base_dir: &Path) -> Result<WeightSpec> {
    let need = |field: &Option<RationalValue>, key: &str| -> Result<BigRational> {
        field
            .as_ref()
            .ok_or_else(|| Error::Config(format!("weight.{key} is required for rule {}", table.rule)))?
            .resolve(key)
    };
    match table.rule.as_str() {
        "constant" => WeightSpec::constant(group, need(&table.value, "value")?),
        "two_sided" => WeightSpec::two_sided(
            group,
            need(&table.left, "left")?,
            need(&table.right, "right")?,
        ),
        "periodic" => {
            let raw = table
                .values
                .as_ref()
                .ok_or_else(|| Error::Config("weight.values is required for rule periodic".into()))?;
            let values = raw
                .iter()
                .map(|v| v.resolve("values"))
                .collect::<Result<Vec<_>>>()?;
            WeightSpec::periodic(group, values)
        }
        "table" => {
            let (entries, default) = if let Some(path) = &table.table_file {
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                load_weight_table(&resolved)?
            } else {
                let raw = table.entries.as_ref().ok_or_else(|| {
                    Error::Config("weight.table needs either table_file or entries".into())
                })?;
                let mut entries = BTreeMap::new();
                for (position, value) in raw {
                    let z: i64 = position.parse().map_err(|_| {
                        Error::Config(format!("weight.entries key {position:?} is not an integer"))
                    })?;
                    entries.insert(z, value.resolve("entries")?);
                }
                let default = need(&table.default, "default")?;
                (entries, default)
            };
            WeightSpec::table(group, entries, default)
        }
        "cubic_runs" => WeightSpec::cubic_runs(group),
        "mirror_product" => {
            let base_table = table
                .base
                .as_ref()
                .ok_or_else(|| Error::Config("weight.base is required for rule mirror_product".into()))?;
            let base = build_weight(base_table, GroupSpec::IntegerLine, base_dir)?;
            let modulus = group.modulus().ok_or_else(|| {
                Error::Config("mirror_product needs group = \"ZxZm\"".into())
            })?;
            WeightSpec::mirror_product(base, modulus)
        }
        other => Err(Error::Config(format!(
            "unknown weight.rule {other:?} (expected constant, two_sided, periodic, table, cubic_runs, mirror_product)"
        ))),
    }
}

/// Read a `position,value` CSV with a `default` row.
fn load_weight_table(path: &Path) -> Result<(BTreeMap<i64, BigRational>, BigRational)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read weight table {}: {e}", path.display())))?;
    let mut entries = BTreeMap::new();
    let mut default = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            if line != "position,value" {
                return Err(Error::Config(format!(
                    "weight table must start with the header `position,value`, got {line:?}"
                )));
            }
            continue;
        }
        let (position, value) = line.split_once(',').ok_or_else(|| {
            Error::Config(format!("weight table line {} is not `position,value`", idx + 1))
        })?;
        let value = parse_rational(value)?;
        if position.trim() == "default" {
            default = Some(value);
        } else {
            let z: i64 = position.trim().parse().map_err(|_| {
                Error::Config(format!("weight table position {position:?} is not an integer"))
            })?;
            entries.insert(z, value);
        }
    }
    let default =
        default.ok_or_else(|| Error::Config("weight table needs a `default` row".into()))?;
    Ok((entries, default))
}

fn build_vector_choice(
    table: &VectorTable,
    group: GroupSpec,
    key: &str,
    default: VectorChoice,
) -> Result<VectorChoice> {
    if table.preset.is_some() && table.entries.is_some() {
        return Err(Error::Config(format!(
            "{key}: give either preset or entries, not both"
        )));
    }
    if let Some(entries) = &table.entries {
        let resolved = entries
            .iter()
            .map(|(position, re, im)| Ok((position.resolve(group)?, *re, *im)))
            .collect::<Result<Vec<_>>>()?;
        if resolved.is_empty() {
            return Err(Error::Config(format!("{key}.entries must not be empty")));
        }
        return Ok(VectorChoice::Entries(resolved));
    }
    match table.preset.as_deref() {
        None => Ok(default),
        Some("synthesized") => Ok(VectorChoice::Synthesized),
        Some("zero") => Ok(VectorChoice::Zero),
        Some(preset) if preset.starts_with("char:") => {
            let spec = &preset["char:".len()..];
            let element = if let Some((z, c)) = spec.split_once(',') {
                let z: i64 = z.trim().parse().map_err(|_| {
                    Error::Config(format!("{key}.preset: bad position in {preset:?}"))
                })?;
                let c: i64 = c.trim().parse().map_err(|_| {
                    Error::Config(format!("{key}.preset: bad coordinate in {preset:?}"))
                })?;
                ElementValue::Product([z, c]).resolve(group)?
            } else {
                let z: i64 = spec.trim().parse().map_err(|_| {
                    Error::Config(format!("{key}.preset: bad position in {preset:?}"))
                })?;
                ElementValue::Line(z).resolve(group)?
            };
            Ok(VectorChoice::Characteristic(element))
        }
        Some(other) => Err(Error::Config(format!(
            "{key}.preset {other:?} is not one of char:<g>, synthesized, zero"
        ))),
    }
}

/// Parse and validate a config document. `base_dir` anchors relative paths
/// (weight tables).
pub fn parse_config(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;

    let group = match raw.group.as_str() {
        "Z" => {
            if raw.m.is_some() {
                return Err(Error::Config("m is only meaningful with group = \"ZxZm\"".into()));
            }
            GroupSpec::IntegerLine
        }
        "ZxZm" => {
            let m = raw
                .m
                .ok_or_else(|| Error::Config("group = \"ZxZm\" requires m".into()))?;
            GroupSpec::product(m).map_err(|e| Error::Config(e.to_string()))?
        }
        other => {
            return Err(Error::Config(format!(
                "group must be \"Z\" or \"ZxZm\", got {other:?}"
            )))
        }
    };

    if raw.p.is_nan() || raw.p < 1.0 {
        return Err(Error::Config("p must be >= 1".into()));
    }
    if raw.horizon < 2 {
        return Err(Error::Config("horizon must be at least 2".into()));
    }

    let step = raw.a.resolve(group)?;
    let weight = build_weight(&raw.weight, group, base_dir)?;

    let window = match raw.search.window {
        Some([lo, hi]) => {
            Some(Window::new(lo, hi).map_err(|e| Error::Config(format!("search.window: {e}")))?)
        }
        None => None,
    };

    let analysis = raw.analysis;
    if !(analysis.theta > 0.0 && analysis.theta < 1.0) {
        return Err(Error::Config("analysis.theta must be in (0, 1)".into()));
    }
    for (key, grid) in [
        ("analysis.delta_grid", &analysis.delta_grid),
        ("analysis.tau_grid", &analysis.tau_grid),
    ] {
        if grid.is_empty() {
            return Err(Error::Config(format!("{key} must not be empty")));
        }
        if grid.iter().any(|v| v.is_nan() || *v <= 0.0) {
            return Err(Error::Config(format!("{key} values must be positive")));
        }
    }
    for (key, value) in [
        ("analysis.epsilon", analysis.epsilon),
        ("analysis.tau", analysis.tau),
        ("analysis.near_zero", analysis.near_zero),
        ("analysis.unbounded", analysis.unbounded),
    ] {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::Config(format!("{key} must be positive")));
        }
    }
    for (key, value) in [
        ("analysis.delta_low", analysis.delta_low),
        ("analysis.delta_high", analysis.delta_high),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::Config(format!("{key} must be in [0, 1]")));
        }
    }

    let compact_sets = match &analysis.compact_sets {
        Some(sets) => {
            let mut resolved = Vec::with_capacity(sets.len());
            for set in sets {
                if set.is_empty() {
                    return Err(Error::Config(
                        "analysis.compact_sets entries must not be empty".into(),
                    ));
                }
                resolved.push(
                    set.iter()
                        .map(|e| e.resolve(group))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            resolved
        }
        None => {
            let identity = group.identity();
            vec![vec![identity]]
        }
    };

    let plan_points = match &raw.plan.points {
        Some(points) => {
            let mut resolved = BTreeMap::new();
            for (n, element) in points {
                let n: u64 = n.parse().map_err(|_| {
                    Error::Config(format!("plan.points key {n:?} is not an exponent"))
                })?;
                resolved.insert(n, element.resolve(group)?);
            }
            Some(resolved)
        }
        None => None,
    };
    if let Some(b) = &raw.plan.b {
        if b.iter().any(|n| *n < 1) {
            return Err(Error::Config("plan.b members must be >= 1".into()));
        }
    }

    let vector = build_vector_choice(
        &raw.vector,
        group,
        "vector",
        VectorChoice::Characteristic(group.identity()),
    )?;
    let vector2 = build_vector_choice(&raw.vector2, group, "vector2", VectorChoice::Zero)?;

    let density_set = match (&raw.density.members, raw.density.preset.as_deref()) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "density: give either members or preset, not both".into(),
            ))
        }
        (Some(members), None) => DensityChoice::Members(members.clone()),
        (None, Some("evens")) | (None, None) => DensityChoice::Evens,
        (None, Some("blocks4")) => DensityChoice::Blocks4,
        (None, Some(other)) => {
            return Err(Error::Config(format!(
                "density.preset {other:?} is not one of evens, blocks4"
            )))
        }
    };

    Ok(ExperimentConfig {
        group,
        step,
        weight,
        p: raw.p,
        horizon: raw.horizon,
        window,
        theta: analysis.theta,
        delta_grid: analysis.delta_grid,
        tau_grid: analysis.tau_grid,
        epsilon: analysis.epsilon,
        tau: analysis.tau,
        delta_low: analysis.delta_low,
        delta_high: analysis.delta_high,
        near_zero: analysis.near_zero,
        unbounded: analysis.unbounded,
        compact_sets,
        mirror_samples: analysis.mirror_samples.unwrap_or_else(|| vec![0]),
        pair_horizon: analysis.pair_horizon.unwrap_or(raw.horizon),
        decay_horizon: analysis.decay_horizon.unwrap_or(raw.horizon * 10),
        rational_bit_cap: analysis
            .rational_bit_cap
            .unwrap_or(crate::operator::DEFAULT_RATIONAL_BIT_CAP),
        vector,
        vector2,
        plan_b: raw.plan.b,
        plan_points,
        density_set,
        raw_text: text.to_string(),
    })
}
