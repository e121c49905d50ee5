//! Named experiments with fixed desk-scale sizes and built-in checks.
//!
//! | preset       | model                    | N      | exchanges | replicas |
//! |--------------|--------------------------|--------|-----------|----------|
//! | `gibbs`      | λ = 0                    | 10⁴    | 10⁷       | 1        |
//! | `gamma`      | uniform λ = 0.5          | 10³    | 10⁷       | 10       |
//! | `pareto-tail`| quenched λᵢ ~ U[0,1)     | 10³    | 2·10⁷     | 20       |
//! | `gas-oracle` | Beta(3/2,3/2) collisions | 10⁴    | 10⁷       | 1        |

use std::path::Path;

use serde_json::{json, Value};

use crate::config::{apply_override, config_from_value};
use crate::error::CliError;
use crate::experiment::{run_experiment, Check, Experiment, ExperimentReport};
use crate::output;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Gibbs,
    Gamma,
    ParetoTail,
    GasOracle,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Gibbs,
        Preset::Gamma,
        Preset::ParetoTail,
        Preset::GasOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Gibbs => "gibbs",
            Preset::Gamma => "gamma",
            Preset::ParetoTail => "pareto-tail",
            Preset::GasOracle => "gas-oracle",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CliError> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| CliError::UnknownPreset(name.into()))
    }

    /// Default config in file form.
    pub fn config(self) -> Value {
        match self {
            Preset::Gibbs => json!({
                "model": "gibbs", "n_agents": 10_000, "total_money": 10_000.0,
                "n_exchanges": 10_000_000u64, "burn_in": 1_000_000u64, "seed": 1,
            }),
            Preset::Gamma => json!({
                "model": "cc", "saving": 0.5, "n_agents": 1000, "total_money": 1000.0,
                "n_exchanges": 10_000_000u64, "burn_in": 1_000_000u64,
                "measure_every": 10_000, "ensemble": 10, "seed": 1,
            }),
            Preset::ParetoTail => json!({
                "model": "ccm", "saving_law": {"uniform": [0.0, 1.0]},
                "n_agents": 1000, "total_money": 1000.0,
                "n_exchanges": 20_000_000u64, "burn_in": 10_000_000u64,
                "measure_every": 10_000, "ensemble": 20, "seed": 1,
            }),
            Preset::GasOracle => json!({
                "model": "gas", "n_agents": 10_000, "total_money": 15_000.0,
                "n_exchanges": 10_000_000u64, "burn_in": 1_000_000u64, "seed": 1,
            }),
        }
    }

    /// Pass/fail checks against a finished report.
    pub fn checks(self, report: &ExperimentReport) -> Vec<Check> {
        let sigma = report.mean;
        match self {
            Preset::Gibbs => vec![
                Check::new(
                    "ks_vs_gibbs",
                    report.ks_vs_gibbs,
                    "< 0.02",
                    report.ks_vs_gibbs < 0.02,
                ),
                Check::new(
                    "gini",
                    report.gini,
                    "0.50 ± 0.01",
                    (report.gini - 0.5).abs() < 0.01,
                ),
            ],
            Preset::Gamma => {
                let shape = report.gamma_shape.unwrap_or(f64::NAN);
                let low = report.lowest_bin_density * sigma;
                vec![
                    Check::new("gamma_shape", shape, "> 1.5", shape > 1.5),
                    Check::new("lowest_bin_density·σ", low, "< 0.2", low < 0.2),
                ]
            }
            Preset::ParetoTail => {
                let alpha = report.tail.as_ref().map_or(f64::NAN, |t| t.exponent_pdf);
                vec![Check::new(
                    "tail.exponent_pdf",
                    alpha,
                    "in [1.6, 2.4]",
                    (1.6..=2.4).contains(&alpha),
                )]
            }
            Preset::GasOracle => {
                let ks = report.ks_vs_mb.unwrap_or(f64::NAN);
                let ratio = report.low_end_ratio.unwrap_or(f64::NAN);
                vec![
                    Check::new("ks_vs_mb", ks, "< 0.02", ks < 0.02),
                    Check::new("low_end_ratio", ratio, "< 0.1", ratio < 0.1),
                ]
            }
        }
    }
}

/// Builds the config for `preset` with `key=value` overrides and an
/// optional seed applied last.
pub fn preset_config(
    preset: Preset,
    overrides: &[String],
    seed: Option<u64>,
) -> Result<kinex_core::SimConfig, CliError> {
    let mut value = preset.config();
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    if let Some(seed) = seed {
        value["seed"] = json!(seed);
    }
    Ok(config_from_value(&value)?)
}

/// Runs a preset, writes its artifacts into `out_dir` and attaches the
/// preset's checks to the report. Failed checks are recorded in the report,
/// not raised; callers decide whether a failure is fatal.
pub fn run_preset(
    name: &str,
    overrides: &[String],
    out_dir: &Path,
    jobs: usize,
    seed: Option<u64>,
) -> Result<Experiment, CliError> {
    let preset = Preset::from_name(name)?;
    let config = preset_config(preset, overrides, seed)?;
    let mut experiment = run_experiment(preset.name(), &config, out_dir, jobs)?;
    let checks = preset.checks(&experiment.report);
    experiment.report.passed = checks.iter().all(|c| c.pass);
    experiment.report.checks = checks;
    output::write_report(&experiment.report, &out_dir.join(output::REPORT_FILE))?;
    Ok(experiment)
}

/// Turns failed checks into an error.
pub fn require_pass(report: &ExperimentReport) -> Result<(), CliError> {
    if report.passed {
        return Ok(());
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {} (want {})", c.name, c.value, c.requirement))
        .collect();
    Err(CliError::Acceptance {
        preset: report.label.clone(),
        failed: failed.join("; "),
    })
}
