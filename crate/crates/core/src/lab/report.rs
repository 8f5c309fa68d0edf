//! Result rows, threshold checks and the CSV / JSON artifacts.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// One CSV row. Rows carrying a threshold are acceptance checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub experiment: String,
    pub module: String,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub parameter: String,
    pub member_id: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn is_check(&self) -> bool {
        self.pass.is_some()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub parameter: String,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub member_id: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Outcome of one experiment run.
#[derive(Clone, Debug, Serialize)]
pub struct ExitReport {
    pub experiment: String,
    pub module: String,
    pub passed: bool,
    pub elapsed_seconds: f64,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl ExitReport {
    pub fn checks(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.is_check())
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.checks().filter(|r| r.pass == Some(false)).collect()
    }

    /// First check whose parameter matches, for programmatic access.
    pub fn check(&self, parameter: &str) -> Option<&Row> {
        self.checks().find(|r| r.parameter == parameter)
    }

    fn summaries(&self) -> Vec<CheckSummary> {
        self.checks()
            .map(|r| CheckSummary {
                parameter: r.parameter.clone(),
                p: r.p,
                q: r.q,
                member_id: r.member_id.clone(),
                value: r.value,
                threshold: r.threshold.unwrap_or(f64::NAN),
                pass: r.pass.unwrap_or(false),
            })
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary<'a> {
            #[serde(flatten)]
            report: &'a ExitReport,
            rows: usize,
            checks: Vec<CheckSummary>,
        }
        Ok(serde_json::to_string_pretty(&Summary { report: self, rows: self.rows.len(), checks: self.summaries() })?)
    }

    /// Writes `<experiment>.csv` and `<experiment>.summary.json` into `dir`.
    pub fn write_artifacts(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.experiment));
        let json = dir.join(format!("{}.summary.json", self.experiment));
        self.write_csv(&csv)?;
        std::fs::write(&json, self.summary_json()?)?;
        Ok((csv, json))
    }
}

/// Accumulates rows for one experiment.
#[derive(Debug)]
pub struct Recorder {
    experiment: String,
    module: String,
    rows: Vec<Row>,
}

impl Recorder {
    pub fn new(experiment: &str, module: &str) -> Self {
        Recorder { experiment: experiment.to_string(), module: module.to_string(), rows: Vec::new() }
    }

    fn push(&mut self, pq: Option<(Exponent, Exponent)>, parameter: &str, member: &str, value: f64, threshold: Option<f64>, pass: Option<bool>) {
        self.rows.push(Row {
            experiment: self.experiment.clone(),
            module: self.module.clone(),
            p: pq.map(|x| x.0),
            q: pq.map(|x| x.1),
            parameter: parameter.to_string(),
            member_id: member.to_string(),
            value,
            threshold,
            pass,
        });
    }

    /// A measurement without an acceptance threshold.
    pub fn value(&mut self, pq: Option<(Exponent, Exponent)>, parameter: &str, member: &str, value: f64) {
        self.push(pq, parameter, member, value, None, None);
    }

    /// Passes when `value <= threshold`; NaN fails.
    pub fn at_most(&mut self, pq: Option<(Exponent, Exponent)>, parameter: &str, member: &str, value: f64, threshold: f64) {
        self.push(pq, parameter, member, value, Some(threshold), Some(value <= threshold));
    }

    /// Passes when `value >= threshold`; NaN fails.
    pub fn at_least(&mut self, pq: Option<(Exponent, Exponent)>, parameter: &str, member: &str, value: f64, threshold: f64) {
        self.push(pq, parameter, member, value, Some(threshold), Some(value >= threshold));
    }

    pub fn finish(self, elapsed_seconds: f64) -> ExitReport {
        let passed = self.rows.iter().all(|r| r.pass != Some(false)) && self.rows.iter().any(Row::is_check);
        ExitReport { experiment: self.experiment, module: self.module, passed, elapsed_seconds, rows: self.rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_decide_the_outcome() {
        let mut r = Recorder::new("demo", "spaces");
        r.value(None, "norm", "m0", 1.5);
        r.at_most(Some((Exponent::TWO, Exponent::INFINITY)), "drift", "all", 0.01, 0.1);
        let ok = r.finish(0.0);
        assert!(ok.passed && ok.failures().is_empty());
        let mut r = Recorder::new("demo", "spaces");
        r.at_least(None, "growth", "all", f64::NAN, 2.0);
        assert!(!r.finish(0.0).passed);
    }

    #[test]
    fn artifacts_round_trip() {
        let mut r = Recorder::new("demo", "torus");
        r.at_most(Some((Exponent::ONE, Exponent::INFINITY)), "deviation", "set-0", 0.0, 1e-15);
        let report = r.finish(0.5);
        let dir = std::env::temp_dir().join(format!("tflab-report-{}", std::process::id()));
        let (csv, json) = report.write_artifacts(&dir).unwrap();
        let text = std::fs::read_to_string(csv).unwrap();
        assert!(text.starts_with("experiment,module,p,q,parameter,member_id,value,threshold,pass\n"));
        assert!(text.contains("demo,torus,1.0,inf,deviation,set-0,0.0,1e-15,true"));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["checks"][0]["parameter"], "deviation");
        std::fs::remove_dir_all(dir).unwrap();
    }
}
