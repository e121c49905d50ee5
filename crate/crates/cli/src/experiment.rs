//! Ensemble execution and reporting.
//!
//! Each replica is an independent single-threaded run seeded with
//! `seed + r`. Replicas run on a rayon pool; their outputs are collected in
//! replica order before any aggregation, so completion order never affects
//! results.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use kinex_core::exchange::init_population_with;
use kinex_core::stats::tail_plateau;
use kinex_core::{
    fit_gamma_moments, gini, hill_tail, ks_distance, ks_two_sample, run_observed, shannon_entropy,
    stream_rng, BinMode, GasEnsemble, GibbsModel, Histogram, MBModel, Model, PairwiseSystem,
    SimConfig, TailFit, RNG_ALGORITHM, TRADING_STREAM,
};

use crate::config::config_to_value;
use crate::error::CliError;
use crate::output;

/// Snapshots per half-window for the trailing stationarity check.
pub const STEADY_WINDOW: usize = 5;
/// Fine snapshot histogram: bins of width `mean / FINE_BINS_PER_MEAN`.
pub const FINE_BINS_PER_MEAN: usize = 1000;
/// Fine snapshot histogram spans `[0, FINE_RANGE · mean]`.
pub const FINE_RANGE: f64 = 4.0;
/// Top fraction used for the reported Hill fit.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.05;
/// Bins in the logarithmic histogram written for distributed-saving runs.
pub const LOG_HISTOGRAM_BINS: usize = 60;

/// Everything one replica hands back for aggregation.
#[derive(Debug, Clone)]
pub struct ReplicaOutput {
    pub seed: u64,
    pub final_values: Vec<f64>,
    /// Post-burn-in snapshots in the entropy binning.
    pub coarse: Histogram,
    /// Post-burn-in snapshots in the fine low-end binning.
    pub fine: Histogram,
    /// The last `2·STEADY_WINDOW` snapshots, oldest first.
    pub trailing: Vec<Vec<f64>>,
    /// `|Σ values − total| / total` at the end of the run.
    pub conservation_error: f64,
}

fn coarse_histogram(mean: f64) -> Histogram {
    Histogram::entropy_binning(mean).expect("positive mean")
}

fn fine_histogram(mean: f64) -> Histogram {
    let bins = (FINE_RANGE as usize) * FINE_BINS_PER_MEAN;
    Histogram::linear_range(0.0, FINE_RANGE * mean, bins).expect("positive mean")
}

/// Runs replica `replica` of `config`.
pub fn run_replica(config: &SimConfig, replica: usize) -> Result<ReplicaOutput, CliError> {
    let seed = config.replica_seed(replica);
    let mut rng = stream_rng(seed, TRADING_STREAM);
    match config.model {
        Model::Gas => {
            let mut gas = GasEnsemble::new(config.n_agents, config.total_money)?;
            Ok(observe(&mut gas, config, seed, &mut rng))
        }
        _ => {
            let mut pop = init_population_with(
                config.n_agents,
                config.total_money,
                config.saving,
                seed,
                config.initial,
            )?;
            Ok(observe(&mut pop, config, seed, &mut rng))
        }
    }
}

fn observe<S: PairwiseSystem>(
    system: &mut S,
    config: &SimConfig,
    seed: u64,
    rng: &mut kinex_core::SimRng,
) -> ReplicaOutput {
    let mean = config.sigma();
    let mut coarse = coarse_histogram(mean);
    let mut fine = fine_histogram(mean);
    let mut trailing: VecDeque<Vec<f64>> = VecDeque::with_capacity(2 * STEADY_WINDOW);
    run_observed(system, config, rng, |_, values| {
        coarse.add_all(values);
        fine.add_all(values);
        if trailing.len() == 2 * STEADY_WINDOW {
            trailing.pop_front();
        }
        trailing.push_back(values.to_vec());
    });
    let final_values = system.values().to_vec();
    let sum: f64 = final_values.iter().sum();
    ReplicaOutput {
        seed,
        final_values,
        coarse,
        fine,
        trailing: trailing.into(),
        conservation_error: (sum - config.total_money).abs() / config.total_money,
    }
}

/// Runs every replica with at most `jobs` worker threads. Output is in
/// replica order regardless of scheduling.
pub fn run_ensemble(config: &SimConfig, jobs: usize) -> Result<Vec<ReplicaOutput>, CliError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let mut outputs: Vec<ReplicaOutput> = pool.install(|| {
        (0..config.ensemble)
            .into_par_iter()
            .map(|r| run_replica(config, r))
            .collect::<Result<Vec<_>, _>>()
    })?;
    outputs.sort_by_key(|o| o.seed);
    Ok(outputs)
}

/// Replica outputs reduced to pooled samples and histograms.
#[derive(Debug, Clone)]
pub struct Aggregate {
    /// Final values of every replica, concatenated in seed order.
    pub pooled: Vec<f64>,
    /// Final values per replica, in seed order.
    pub per_replica: Vec<Vec<f64>>,
    pub coarse: Histogram,
    pub fine: Histogram,
    pub trailing_ks: Option<f64>,
    pub conservation_error: f64,
}

/// Pure reduction over replica outputs, ordered by seed first.
pub fn aggregate(outputs: &[ReplicaOutput]) -> Aggregate {
    let mut sorted: Vec<&ReplicaOutput> = outputs.iter().collect();
    sorted.sort_by_key(|o| o.seed);
    let first = sorted.first().expect("at least one replica");
    let mut coarse = first.coarse.clone();
    let mut fine = first.fine.clone();
    for o in &sorted[1..] {
        coarse.merge(&o.coarse).expect("shared binning");
        fine.merge(&o.fine).expect("shared binning");
    }
    let per_replica: Vec<Vec<f64>> = sorted.iter().map(|o| o.final_values.clone()).collect();
    let pooled = per_replica.iter().flatten().copied().collect();
    let trailing_ks = (first.trailing.len() == 2 * STEADY_WINDOW)
        .then(|| {
            let (older, newer) = first.trailing.split_at(STEADY_WINDOW);
            let older: Vec<f64> = older.concat();
            let newer: Vec<f64> = newer.concat();
            ks_two_sample(&older, &newer).ok()
        })
        .flatten();
    let conservation_error = sorted
        .iter()
        .map(|o| o.conservation_error)
        .fold(0.0, f64::max);
    Aggregate {
        pooled,
        per_replica,
        coarse,
        fine,
        trailing_ks,
        conservation_error,
    }
}

/// One named pass/fail check attached to a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, requirement: &str, pass: bool) -> Self {
        Check {
            name: name.into(),
            value,
            requirement: requirement.into(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub label: String,
    pub model: String,
    /// The config in file form; feeding it to `simulate` reproduces the run.
    pub config_echo: Value,
    pub generator: String,
    pub seed: u64,
    pub replicas: usize,
    pub n_samples: usize,
    pub sweeps: f64,
    pub mean: f64,
    pub conservation_error: f64,
    pub gini: f64,
    /// Plug-in entropy (nats) in the 200-bin `[0, 10·mean]` binning.
    pub entropy: f64,
    pub gamma_shape: Option<f64>,
    pub gamma_scale: Option<f64>,
    pub tail: Option<TailFit>,
    pub no_plateau: Option<bool>,
    pub ks_vs_gibbs: f64,
    /// Gas runs only: KS distance to Maxwell-Boltzmann with `Δ = (2/3)·mean`.
    pub ks_vs_mb: Option<f64>,
    /// Density of the lowest entropy-binning bin, final samples.
    pub lowest_bin_density: f64,
    /// Midpoint of the densest entropy-binning bin, final samples.
    pub mode_value: f64,
    /// Midpoint of the densest bin over all post-burn-in snapshots.
    pub snapshot_mode_value: Option<f64>,
    /// Lowest-bin over peak density in the fine snapshot histogram.
    pub low_end_ratio: Option<f64>,
    pub steady_state_ks: Option<f64>,
    pub histogram_file: PathBuf,
    pub ccdf_file: PathBuf,
    pub wall_time_s: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// A finished experiment: the report plus the data behind it.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: ExperimentReport,
    pub aggregate: Aggregate,
    pub histogram: Histogram,
    pub ccdf: Vec<(f64, f64)>,
}

fn low_end_ratio(h: &Histogram) -> Option<f64> {
    let peak = h.densities().into_iter().fold(0.0, f64::max);
    (peak > 0.0).then(|| h.density(0) / peak)
}

/// Builds the report for an aggregate. File paths are filled in by
/// [`write_outputs`].
pub fn build_report(
    label: &str,
    config: &SimConfig,
    agg: &Aggregate,
    tail_fraction: f64,
) -> Result<(ExperimentReport, Histogram), CliError> {
    let mean = config.sigma();
    let samples = &agg.pooled;

    let mut binned = Histogram::entropy_binning(mean)?;
    binned.add_all(samples);
    let histogram = if config.model == Model::Ccm {
        kinex_core::histogram(samples, LOG_HISTOGRAM_BINS, BinMode::Logarithmic)?
    } else {
        binned.clone()
    };

    let gamma = fit_gamma_moments(samples).ok();
    let tail = hill_tail(samples, tail_fraction).ok();
    let no_plateau = tail_plateau(samples).ok().map(|p| p.no_plateau);
    let gibbs = GibbsModel::new(mean)?;
    let ks_vs_gibbs = ks_distance(samples, |x| gibbs.cdf(x))?;
    let ks_vs_mb = match config.model {
        Model::Gas => {
            let mb = MBModel::from_mean(mean)?;
            Some(ks_distance(samples, |x| mb.cdf(x))?)
        }
        _ => None,
    };

    let report = ExperimentReport {
        label: label.into(),
        model: config.model.name().into(),
        config_echo: config_to_value(config),
        generator: RNG_ALGORITHM.into(),
        seed: config.seed,
        replicas: config.ensemble,
        n_samples: samples.len(),
        sweeps: config.sweeps(),
        mean: samples.iter().sum::<f64>() / samples.len() as f64,
        conservation_error: agg.conservation_error,
        gini: gini(samples)?,
        entropy: shannon_entropy(&binned),
        gamma_shape: gamma.map(|g| g.shape),
        gamma_scale: gamma.map(|g| g.scale),
        tail,
        no_plateau,
        ks_vs_gibbs,
        ks_vs_mb,
        lowest_bin_density: binned.density(0),
        mode_value: binned.midpoint(binned.mode_bin()),
        snapshot_mode_value: (agg.coarse.total > 0)
            .then(|| agg.coarse.midpoint(agg.coarse.mode_bin())),
        low_end_ratio: low_end_ratio(&agg.fine),
        steady_state_ks: agg.trailing_ks,
        histogram_file: PathBuf::new(),
        ccdf_file: PathBuf::new(),
        wall_time_s: 0.0,
        checks: Vec::new(),
        passed: true,
    };
    Ok((report, histogram))
}

/// Runs `config` end to end and writes histogram, CCDF and report files
/// into `out_dir`.
pub fn run_experiment(
    label: &str,
    config: &SimConfig,
    out_dir: &Path,
    jobs: usize,
) -> Result<Experiment, CliError> {
    let start = Instant::now();
    let outputs = run_ensemble(config, jobs)?;
    let agg = aggregate(&outputs);
    let (mut report, histogram) = build_report(label, config, &agg, DEFAULT_TAIL_FRACTION)?;
    let ccdf = kinex_core::ccdf_points(&agg.pooled);
    report.wall_time_s = start.elapsed().as_secs_f64();
    let mut experiment = Experiment {
        report,
        aggregate: agg,
        histogram,
        ccdf,
    };
    write_outputs(&mut experiment, out_dir)?;
    Ok(experiment)
}

/// Writes `histogram.csv`, `ccdf.csv` and `report.json`, recording the
/// CSV paths in the report.
pub fn write_outputs(experiment: &mut Experiment, out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let (hist_path, ccdf_path) =
        output::emit_csv(&experiment.histogram, &experiment.ccdf, out_dir)?;
    experiment.report.histogram_file = hist_path;
    experiment.report.ccdf_file = ccdf_path;
    output::write_report(&experiment.report, &out_dir.join(output::REPORT_FILE))?;
    Ok(())
}
