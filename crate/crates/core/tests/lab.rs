//! Runner determinism, artifacts and the command-line contract.

use std::path::PathBuf;
use std::process::Command;

use tflab::lab::{self, ExperimentConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tflab"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tflab-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn cells(path: &PathBuf) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn identical_configs_give_identical_tables() {
    let dirs = [scratch("det-a"), scratch("det-b")];
    for dir in &dirs {
        let mut cfg = ExperimentConfig::defaults("local-canonical").unwrap();
        cfg.output_dir = Some(dir.clone());
        assert!(lab::run(&cfg).unwrap().passed);
    }
    let (a, b) = (cells(&dirs[0].join("local-canonical.csv")), cells(&dirs[1].join("local-canonical.csv")));
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(u), Ok(v)) if u.is_finite() => assert!((u - v).abs() <= 1e-10 * u.abs().max(1.0), "{u} vs {v}"),
                _ => assert_eq!(x, y),
            }
        }
    }
    for d in dirs {
        std::fs::remove_dir_all(d).unwrap();
    }
}

#[test]
fn run_writes_csv_and_summary_and_exits_zero() {
    let dir = scratch("cli-run");
    let out = bin().args(["run", "--experiment", "torus-isometry", "--output"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let header = std::fs::read_to_string(dir.join("torus-isometry.csv")).unwrap();
    assert!(header.starts_with("experiment,module,p,q,parameter,member_id,value,threshold,pass\n"));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("torus-isometry.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert!(summary["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn threshold_failure_exits_one() {
    let dir = scratch("cli-fail");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("strict.toml");
    std::fs::write(&cfg, "experiment = \"bh-growth\"\n[thresholds]\nquadratic_growth_min = 1000.0\n").unwrap();
    let out = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL (1,1) quadratic:growth"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(bin().args(["run", "--experiment", "nope"]).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["frobnicate"]).output().unwrap().status.code(), Some(2));
    let dir = scratch("cli-bad");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "experiment = \"duality\"\n[grid]\nn = 7\n").unwrap();
    assert_eq!(bin().arg("validate-config").arg(&cfg).output().unwrap().status.code(), Some(2));
    std::fs::write(&cfg, "experiment = \"duality\"\n[grid]\nn = 128\n").unwrap();
    assert_eq!(bin().arg("validate-config").arg(&cfg).output().unwrap().status.code(), Some(0));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn listing_in_text_json_and_by_module() {
    let text = bin().arg("list").output().unwrap();
    assert_eq!(String::from_utf8_lossy(&text.stdout).lines().count(), 16);
    let json: serde_json::Value = serde_json::from_slice(&bin().args(["list", "--json"]).output().unwrap().stdout).unwrap();
    let entries = json.as_array().unwrap();
    assert_eq!(entries.len(), 16);
    assert!(entries.iter().all(|e| e["citation"].as_str().is_some_and(|c| !c.is_empty())));
    let ops: serde_json::Value = serde_json::from_slice(&bin().args(["list", "--json", "--module", "operators"]).output().unwrap().stdout).unwrap();
    assert!(ops.as_array().unwrap().iter().all(|e| e["module"] == "operators"));
}

#[test]
fn flags_override_the_config() {
    let out = bin().args(["--threads", "2", "run", "--experiment", "fourier-covariance", "--grid-n", "128", "--seed", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
