//! Thin command-line front end over `tflab::lab`.
//!
//! Exit status: 0 when every threshold check passes, 1 on a threshold failure, 2 on usage,
//! configuration or runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tflab::lab::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "tflab", version, about = "Run time-frequency norm experiments")]
struct Cli {
    /// Worker threads for corpus evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML config or from its built-in defaults.
    Run {
        /// Config file; mutually exclusive with --experiment.
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        experiment: Option<String>,
        /// Points per axis, overriding the config.
        #[arg(long)]
        grid_n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the CSV and summary JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List registered experiments.
    List {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        module: Option<String>,
    },
    /// Parse and validate a config without running it.
    ValidateConfig { config: PathBuf },
}

fn load(config: Option<PathBuf>, experiment: Option<String>) -> tflab::Result<ExperimentConfig> {
    match (config, experiment) {
        (Some(path), None) => ExperimentConfig::from_path(&path),
        (None, Some(name)) => ExperimentConfig::defaults(&name),
        _ => Err(tflab::Error::Config("give either a config file or --experiment".into())),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> tflab::Result<ExitCode> {
    match command {
        Command::Run { config, experiment, grid_n, seed, output } => {
            let mut cfg = load(config, experiment)?;
            if let Some(n) = grid_n {
                cfg.grid.n = n;
            }
            if let Some(s) = seed {
                cfg.corpus.seed = s;
            }
            if output.is_some() {
                cfg.output_dir = output;
            }
            let report = lab::run(&cfg)?;
            for row in report.checks() {
                let pq = match (row.p, row.q) {
                    (Some(p), Some(q)) => format!("({p},{q}) "),
                    _ => String::new(),
                };
                let verdict = if row.pass == Some(true) { "pass" } else { "FAIL" };
                println!("{verdict} {pq}{} [{}] {:.3e} vs {:.3e}", row.parameter, row.member_id, row.value, row.threshold.unwrap_or(f64::NAN));
            }
            println!("{}: {} in {:.2}s", report.experiment, if report.passed { "passed" } else { "failed" }, report.elapsed_seconds);
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::List { json, module } => {
            let entries = lab::list_experiments(module.as_deref());
            if json {
                println!("{}", serde_json::to_string_pretty(&entries)?);
            } else {
                for e in entries {
                    println!("{:<20} {:<10} {}  ({})", e.name, e.module, e.description, e.citation);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateConfig { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            println!("{}: ok", cfg.experiment);
            Ok(ExitCode::SUCCESS)
        }
    }
}
