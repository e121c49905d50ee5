use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kinex_cli::analyze::analyze;
use kinex_cli::config::parse_config;
use kinex_cli::error::CliError;
use kinex_cli::experiment::{run_experiment, DEFAULT_TAIL_FRACTION};
use kinex_cli::output::read_samples;
use kinex_cli::presets::{require_pass, run_preset};

#[derive(Parser)]
#[command(name = "kinex", version, about = "Kinetic exchange market simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Maximum concurrent replicas.
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        /// Base seed; overrides KINEX_SEED and the config file.
        #[arg(long, env = "KINEX_SEED")]
        seed: Option<u64>,
    },
    /// Run a named preset: gibbs, gamma, pareto-tail or gas-oracle.
    Preset {
        name: String,
        /// Config override, e.g. `--set saving=0.8`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long, env = "KINEX_SEED")]
        seed: Option<u64>,
    },
    /// Summarize the first column of a CSV of samples as JSON on stdout.
    Analyze {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
        tail_fraction: f64,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            jobs,
            seed,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let mut cfg = parse_config(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let label = config
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("simulate");
            let exp = run_experiment(label, &cfg, &out, jobs)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&exp.report).expect("serializable")
            );
        }
        Command::Preset {
            name,
            set,
            out,
            jobs,
            seed,
        } => {
            let exp = run_preset(&name, &set, &out, jobs, seed)?;
            for c in &exp.report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                eprintln!("{status} {}: {} ({})", c.name, c.value, c.requirement);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&exp.report).expect("serializable")
            );
            require_pass(&exp.report)?;
        }
        Command::Analyze {
            samples,
            tail_fraction,
        } => {
            if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
                return Err(kinex_cli::ConfigError::OutOfRange {
                    key: "tail-fraction".into(),
                    range: "(0, 1)",
                }
                .into());
            }
            let xs = read_samples(&samples)?;
            let summary = analyze(&xs, tail_fraction)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("serializable")
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
