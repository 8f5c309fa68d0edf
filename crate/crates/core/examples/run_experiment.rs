//! Run a registered experiment from its defaults, optionally overriding the grid size.
//!
//! `cargo run --example run_experiment -- step-multiplier 512`

use tflab::lab::{self, ExperimentConfig};

fn main() -> tflab::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "duality".to_string());
    let mut cfg = ExperimentConfig::defaults(&name)?;
    if let Some(n) = args.next() {
        cfg.grid.n = n.parse().map_err(|_| tflab::Error::Config(format!("bad grid size `{n}`")))?;
    }
    println!("{}", cfg.to_toml()?);
    let report = lab::run(&cfg)?;
    for row in report.checks() {
        println!("{:<5} {:<50} {:>12.4e} <= {:.1e}", if row.pass == Some(true) { "ok" } else { "FAIL" }, row.parameter, row.value, row.threshold.unwrap_or(f64::NAN));
    }
    println!("{} {} in {:.2}s", report.experiment, if report.passed { "passed" } else { "failed" }, report.elapsed_seconds);
    Ok(())
}
