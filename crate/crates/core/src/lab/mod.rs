//! Named, configurable experiments with threshold checks and tabular output.

pub mod config;
mod experiments;
pub mod registry;
pub mod report;

use std::time::Instant;

pub use config::{CorpusConfig, ExperimentConfig, GridConfig};
pub use registry::{list_experiments, lookup, ExperimentInfo, REGISTRY};
pub use report::{ExitReport, Recorder, Row};

use crate::error::Result;

/// Runs one configured experiment. Rows appear in a fixed order for a fixed configuration.
pub fn run(cfg: &ExperimentConfig) -> Result<ExitReport> {
    cfg.validate()?;
    let info = cfg.info()?;
    let start = Instant::now();
    let mut rec = Recorder::new(info.name, info.module);
    experiments::run_experiment(cfg, &mut rec)?;
    let report = rec.finish(start.elapsed().as_secs_f64());
    if let Some(dir) = &cfg.output_dir {
        report.write_artifacts(dir)?;
    }
    Ok(report)
}
