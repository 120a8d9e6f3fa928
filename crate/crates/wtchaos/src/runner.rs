//! Subcommand dispatch: thin adapters from a validated config to the
//! library operations, persisting deterministic artifacts.
//!
//! No numeric logic lives here; every value in the artifacts comes from a
//! library call. Identical configs produce identical artifacts, except for
//! the timestamp in the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num::complex::Complex64;

use crate::config::{DensityChoice, ExperimentConfig, VectorChoice};
use crate::dccw::{self, ConditionIIReport, SynthesisPlan, SynthesizedVector};
use crate::density::{self, IndexSet};
use crate::div;
use crate::error::{Error, Result};
use crate::report::{
    artifact_path, fmt_f64, series_rows, write_csv, write_json, ConditionIIJson, ConditionIJson,
    ConfigEcho, DccwVerdict, FullReport, MirrorJson, PlanJson, RunManifest, SynthesizedJson,
    VerificationJson,
};
use crate::vector::Vector;
use crate::weight::{WeightRule, Window};
use crate::WeightedTranslation;

/// The CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Phi,
    Orbit,
    Density,
    DccwCheck,
    Synthesize,
    Verify,
    PairTest,
    MirrorCheck,
    Report,
}

/// Arithmetic mode: `Rational` adds exact columns and exact comparisons
/// where available (and can fail with a numeric-range error on runaway
/// products); `Log` sticks to overflow-safe log-domain floats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Rational,
    Log,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub mode: ArithmeticMode,
}

fn operator(config: &ExperimentConfig) -> Result<WeightedTranslation> {
    WeightedTranslation::new(config.weight.clone(), config.step, config.p)
}

fn require_window(config: &ExperimentConfig) -> Result<Window> {
    config.window.ok_or_else(|| {
        Error::Config("search.window is required for this subcommand".into())
    })
}

fn condition_ii(config: &ExperimentConfig) -> Result<ConditionIIReport> {
    let window = require_window(config)?;
    let set_b = match &config.plan_b {
        Some(members) => Some(IndexSet::new(config.horizon, members.clone())?),
        None => None,
    };
    dccw::condition_ii_diagnostic(&config.weight, &config.step, config.horizon, window, set_b)
}

fn synthesis_pipeline(
    config: &ExperimentConfig,
) -> Result<(ConditionIIReport, SynthesisPlan, SynthesizedVector)> {
    let op = operator(config)?;
    let report = condition_ii(config)?;
    let points: BTreeMap<u64, crate::group::GroupElement> = match &config.plan_points {
        Some(points) => points.clone(),
        None => report.witness_points(),
    };
    let set_b = match &config.plan_b {
        Some(members) => IndexSet::new(config.horizon, members.clone())?,
        None => IndexSet::full(config.horizon)?,
    };
    let plan = dccw::build_synthesis_plan(&op, &set_b, &points, config.horizon)?;
    let vector = dccw::synthesize_vector(&op, plan.clone())?;
    Ok((report, plan, vector))
}

fn resolve_vector(config: &ExperimentConfig, choice: &VectorChoice) -> Result<Vector> {
    match choice {
        VectorChoice::Characteristic(g) => Ok(Vector::chi(*g)),
        VectorChoice::Entries(entries) => Ok(Vector::from_entries(
            entries
                .iter()
                .map(|(g, re, im)| (*g, Complex64::new(*re, *im))),
        )),
        VectorChoice::Zero => Ok(Vector::new()),
        VectorChoice::Synthesized => {
            let (_, _, synthesized) = synthesis_pipeline(config)?;
            Ok(synthesized.vector)
        }
    }
}

fn nonzero_vector(config: &ExperimentConfig, choice: &VectorChoice) -> Result<Vector> {
    let vector = resolve_vector(config, choice)?;
    if vector.is_empty() {
        return Err(Error::Domain(
            "this subcommand needs a nonzero initial vector".into(),
        ));
    }
    Ok(vector)
}

fn run_phi(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let op = operator(config)?;
    let vector = nonzero_vector(config, &config.vector)?;
    let path = artifact_path(&options.out_dir, "phi.csv")?;
    let mut rows = Vec::new();
    for point in vector.support() {
        let series = op.phi_series_ln(point, config.horizon)?;
        for (idx, ln_phi) in series.iter().enumerate() {
            let n = idx as u64 + 1;
            let mut row = format!(
                "{point},{n},{},{}",
                fmt_f64(*ln_phi),
                fmt_f64(ln_phi.exp())
            );
            if options.mode == ArithmeticMode::Rational {
                row.push(',');
                row.push_str(
                    &op.phi_exact_capped(n, point, config.rational_bit_cap)?
                        .to_string(),
                );
            }
            rows.push(row);
        }
    }
    let header = match options.mode {
        ArithmeticMode::Rational => "x,n,log_phi,phi,phi_exact",
        ArithmeticMode::Log => "x,n,log_phi,phi",
    };
    write_csv(&path, header, rows)?;
    Ok(vec![path])
}

fn run_orbit(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let op = operator(config)?;
    let vector = nonzero_vector(config, &config.vector)?;
    let series = op.orbit_norm_series(&vector, config.horizon)?;
    let path = artifact_path(&options.out_dir, "orbit.csv")?;
    write_csv(&path, "n,log_value,value", series_rows(&series))?;
    Ok(vec![path])
}

fn density_index_set(config: &ExperimentConfig) -> Result<IndexSet> {
    match &config.density_set {
        DensityChoice::Members(members) => IndexSet::new(config.horizon, members.clone()),
        DensityChoice::Evens => IndexSet::from_predicate(config.horizon, |n| n % 2 == 0),
        DensityChoice::Blocks4 => IndexSet::from_predicate(config.horizon, |n| {
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
        }),
    }
}

fn run_density(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let set = density_index_set(config)?;
    let estimate = density::density_estimate(&set, config.theta)?;
    let csv = artifact_path(&options.out_dir, "density.csv")?;
    write_csv(
        &csv,
        "n,running_density",
        estimate
            .running
            .iter()
            .enumerate()
            .map(|(idx, d)| format!("{},{}", idx + 1, fmt_f64(*d))),
    )?;
    let json = artifact_path(&options.out_dir, "density.json")?;
    #[derive(serde::Serialize)]
    struct DensityJson {
        member_count: usize,
        upper_est: f64,
        lower_est: f64,
        tail_fraction: f64,
    }
    write_json(
        &json,
        &DensityJson {
            member_count: set.len(),
            upper_est: estimate.upper_est,
            lower_est: estimate.lower_est,
            tail_fraction: estimate.tail_fraction,
        },
    )?;
    Ok(vec![csv, json])
}

struct DccwOutcome {
    condition_i: Vec<crate::dccw::ConditionIReport>,
    condition_ii: ConditionIIReport,
    verdict: DccwVerdict,
}

fn dccw_outcome(config: &ExperimentConfig) -> Result<DccwOutcome> {
    let op = operator(config)?;
    let mut condition_i = Vec::new();
    for compact_set in &config.compact_sets {
        condition_i.push(dccw::condition_i_diagnostic(
            &op,
            compact_set,
            config.decay_horizon,
            &config.delta_grid,
            config.theta,
        )?);
    }
    let condition_ii = condition_ii(config)?;
    let any_full_density = condition_i.iter().any(|r| r.full_density_evidence);
    let verdict = DccwVerdict::combine(any_full_density, condition_ii.verdict);
    Ok(DccwOutcome {
        condition_i,
        condition_ii,
        verdict,
    })
}

fn write_dccw_series(
    outcome: &DccwOutcome,
    options: &RunOptions,
    emitted: &mut Vec<PathBuf>,
) -> Result<()> {
    for (idx, report) in outcome.condition_i.iter().enumerate() {
        let path = artifact_path(&options.out_dir, &format!("s_n_k{idx}.csv"))?;
        write_csv(
            &path,
            "n,s_n,log_s_n",
            report.restricted_norms.iter().enumerate().map(|(i, s)| {
                format!("{},{},{}", i + 1, fmt_f64(s.value()), fmt_f64(s.ln()))
            }),
        )?;
        emitted.push(path);
    }
    let path = artifact_path(&options.out_dir, "u_n.csv")?;
    write_csv(
        &path,
        "n,u_n,log_u_n,u_n_exact",
        outcome.condition_ii.entries.iter().map(|e| {
            format!(
                "{},{},{},{}",
                e.length,
                fmt_f64(e.reciprocal.value()),
                fmt_f64(e.reciprocal.ln()),
                e.reciprocal_exact
            )
        }),
    )?;
    emitted.push(path);
    Ok(())
}

fn run_dccw_check(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let outcome = dccw_outcome(config)?;
    let mut emitted = Vec::new();
    #[derive(serde::Serialize)]
    struct DccwJson {
        config: ConfigEcho,
        condition_i: Vec<ConditionIJson>,
        condition_ii: ConditionIIJson,
        verdict: DccwVerdict,
    }
    let json = artifact_path(&options.out_dir, "dccw.json")?;
    write_json(
        &json,
        &DccwJson {
            config: ConfigEcho::from_config(config),
            condition_i: outcome.condition_i.iter().map(ConditionIJson::from_report).collect(),
            condition_ii: ConditionIIJson::from_report(&outcome.condition_ii),
            verdict: outcome.verdict.clone(),
        },
    )?;
    emitted.push(json);
    write_dccw_series(&outcome, options, &mut emitted)?;
    Ok(emitted)
}

fn write_plan_series(
    plan: &SynthesisPlan,
    options: &RunOptions,
    emitted: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = artifact_path(&options.out_dir, "c_n_phi_n.csv")?;
    write_csv(
        &path,
        "n,c_n_phi_n,log_c_n_phi_n",
        plan.entries.iter().map(|e| {
            let bound = e.lower_bound();
            format!("{},{},{}", e.n, fmt_f64(bound.value()), fmt_f64(bound.ln()))
        }),
    )?;
    emitted.push(path);
    Ok(())
}

fn write_vector_csv(
    vector: &Vector,
    options: &RunOptions,
    emitted: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = artifact_path(&options.out_dir, "vector.csv")?;
    write_csv(
        &path,
        "position,re,im",
        vector
            .iter()
            .map(|(g, v)| format!("{g},{},{}", fmt_f64(v.re), fmt_f64(v.im))),
    )?;
    emitted.push(path);
    Ok(())
}

fn run_synthesize(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let (_, plan, synthesized) = synthesis_pipeline(config)?;
    let mut emitted = Vec::new();
    #[derive(serde::Serialize)]
    struct SynthesisJson {
        config: ConfigEcho,
        plan: PlanJson,
        synthesized: SynthesizedJson,
    }
    let json = artifact_path(&options.out_dir, "plan.json")?;
    write_json(
        &json,
        &SynthesisJson {
            config: ConfigEcho::from_config(config),
            plan: PlanJson::from_plan(&plan),
            synthesized: SynthesizedJson::from_vector(&synthesized),
        },
    )?;
    emitted.push(json);
    write_plan_series(&plan, options, &mut emitted)?;
    write_vector_csv(&synthesized.vector, options, &mut emitted)?;
    Ok(emitted)
}

fn verification_for(
    config: &ExperimentConfig,
    options: &RunOptions,
    outcome: &DccwOutcome,
    synthesized: &SynthesizedVector,
) -> Result<crate::dccw::DccVerification> {
    let op = operator(config)?;
    // A is the first decay level's exponent set of the first compact set
    let set_a = outcome
        .condition_i
        .first()
        .and_then(|r| r.levels.first())
        .map(|level| level.exponents.clone())
        .ok_or_else(|| Error::Domain("no condition (i) level to take A from".into()))?;
    dccw::verify_dcc(
        &op,
        synthesized,
        &config.compact_sets,
        &set_a,
        config.horizon,
        options.mode == ArithmeticMode::Rational,
    )
}

fn run_verify(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let outcome = dccw_outcome(config)?;
    let (_, plan, synthesized) = synthesis_pipeline(config)?;
    let verification = verification_for(config, options, &outcome, &synthesized)?;
    let mut emitted = Vec::new();
    #[derive(serde::Serialize)]
    struct VerifyJson {
        config: ConfigEcho,
        plan: PlanJson,
        synthesized: SynthesizedJson,
        verification: VerificationJson,
    }
    let json = artifact_path(&options.out_dir, "verification.json")?;
    write_json(
        &json,
        &VerifyJson {
            config: ConfigEcho::from_config(config),
            plan: PlanJson::from_plan(&plan),
            synthesized: SynthesizedJson::from_vector(&synthesized),
            verification: VerificationJson::from_verification(&verification),
        },
    )?;
    emitted.push(json);
    write_plan_series(&plan, options, &mut emitted)?;
    Ok(emitted)
}

fn pair_grid(config: &ExperimentConfig) -> Vec<f64> {
    let mut grid = config.tau_grid.clone();
    for extra in [config.epsilon, config.tau] {
        if !grid.contains(&extra) {
            grid.push(extra);
        }
    }
    grid.sort_by(|a, b| a.total_cmp(b));
    grid
}

fn run_pair_test(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let op = operator(config)?;
    let x = resolve_vector(config, &config.vector)?;
    let y = resolve_vector(config, &config.vector2)?;
    let grid = pair_grid(config);
    let profile = density::pair_profile(&op, &x, &y, config.pair_horizon, &grid, config.theta)?;
    let report = density::scrambled_pair_verdict(
        &profile,
        config.epsilon,
        config.tau,
        config.delta_low,
        config.delta_high,
    )?;
    let mut emitted = Vec::new();
    let json = artifact_path(&options.out_dir, "pair.json")?;
    write_json(&json, &report)?;
    emitted.push(json);
    let csv = artifact_path(&options.out_dir, "f_values.csv")?;
    let mut rows = Vec::new();
    for (row_idx, row) in profile.f_table.iter().enumerate() {
        let n = row_idx as u64 + 2;
        for (tau, value) in profile.tau_grid.iter().zip(row) {
            rows.push(format!("{n},{},{}", fmt_f64(*tau), fmt_f64(*value)));
        }
    }
    write_csv(&csv, "n,tau,F_value", rows)?;
    emitted.push(csv);
    Ok(emitted)
}

fn mirror_base(config: &ExperimentConfig) -> Result<crate::weight::WeightSpec> {
    match config.weight.rule() {
        WeightRule::MirrorProduct(base) => Ok((**base).clone()),
        _ if config.weight.group() == crate::group::GroupSpec::IntegerLine => {
            Ok(config.weight.clone())
        }
        _ => Err(Error::Precondition(
            "mirror-check needs a line weight or a mirror_product weight".into(),
        )),
    }
}

fn run_mirror_check(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let base = mirror_base(config)?;
    let report = div::mirror_two_component_check(
        base,
        config.p,
        config.horizon,
        &config.mirror_samples,
        config.near_zero,
        config.unbounded,
        config.theta,
    )?;
    let json = artifact_path(&options.out_dir, "mirror.json")?;
    write_json(&json, &MirrorJson::from_report(&report))?;
    Ok(vec![json])
}

fn run_report(config: &ExperimentConfig, options: &RunOptions) -> Result<Vec<PathBuf>> {
    let outcome = dccw_outcome(config)?;
    let (_, plan, synthesized) = synthesis_pipeline(config)?;
    let verification = verification_for(config, options, &outcome, &synthesized)?;
    let op = operator(config)?;
    let grid = pair_grid(config);
    let profile = density::pair_profile(
        &op,
        &synthesized.vector,
        &Vector::new(),
        config.pair_horizon,
        &grid,
        config.theta,
    )?;
    let pair_test = density::scrambled_pair_verdict(
        &profile,
        config.epsilon,
        config.tau,
        config.delta_low,
        config.delta_high,
    )?;

    let mut emitted = Vec::new();
    let verification_json = VerificationJson::from_verification(&verification);
    let full = FullReport {
        config: ConfigEcho::from_config(config),
        condition_i: outcome
            .condition_i
            .iter()
            .map(ConditionIJson::from_report)
            .collect(),
        condition_ii: ConditionIIJson::from_report(&outcome.condition_ii),
        plan: PlanJson::from_plan(&plan),
        synthesized: SynthesizedJson::from_vector(&synthesized),
        verification: verification_json.lower_bounds,
        basis_decay: verification_json.basis_decay,
        all_bounds_hold: verification_json.all_bounds_hold,
        pair_test,
        verdict: outcome.verdict.clone(),
    };
    let json = artifact_path(&options.out_dir, "report.json")?;
    write_json(&json, &full)?;
    emitted.push(json);
    write_dccw_series(&outcome, options, &mut emitted)?;
    write_plan_series(&plan, options, &mut emitted)?;
    write_vector_csv(&synthesized.vector, options, &mut emitted)?;

    let manifest_path = artifact_path(&options.out_dir, "manifest.json")?;
    let names: Vec<String> = emitted
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    write_json(&manifest_path, &RunManifest::new(&config.raw_text, names))?;
    emitted.push(manifest_path);
    Ok(emitted)
}

/// Run one subcommand against a validated config, returning the artifacts
/// written.
pub fn run_subcommand(
    command: Subcommand,
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<Vec<PathBuf>> {
    match command {
        Subcommand::Phi => run_phi(config, options),
        Subcommand::Orbit => run_orbit(config, options),
        Subcommand::Density => run_density(config, options),
        Subcommand::DccwCheck => run_dccw_check(config, options),
        Subcommand::Synthesize => run_synthesize(config, options),
        Subcommand::Verify => run_verify(config, options),
        Subcommand::PairTest => run_pair_test(config, options),
        Subcommand::MirrorCheck => run_mirror_check(config, options),
        Subcommand::Report => run_report(config, options),
    }
}

/// Load, parse, and validate a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    crate::config::parse_config(&text, base_dir)
}
