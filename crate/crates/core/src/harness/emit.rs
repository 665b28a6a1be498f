use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde_json::{json, Map, Value};

use super::config::RunConfig;
use super::scenarios::{run_scenario, ScenarioOutcome};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub pass: bool,
    pub failures: Vec<String>,
    pub report_path: PathBuf,
    pub csv_paths: Vec<PathBuf>,
    pub artifacts: Vec<PathBuf>,
    pub duration: Duration,
}

impl ScenarioResult {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// `{scenario, config, metrics, artifacts, provenance}`.
pub fn report_json(outcome: &ScenarioOutcome, artifacts: &[String]) -> Value {
    let config: Map<String, Value> = outcome
        .config
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    json!({
        "scenario": outcome.scenario.name(),
        "config": config,
        "metrics": outcome.report.metrics,
        "artifacts": artifacts,
        "provenance": outcome.report.provenance,
    })
}

/// Writes `report.json`, one CSV per table, the extra documents and the
/// snapshot directories into `out`.
pub fn emit_report(outcome: &ScenarioOutcome, out: &Path) -> Result<ScenarioResult> {
    fs::create_dir_all(out)?;
    let mut names = Vec::new();
    let mut csv_paths = Vec::new();
    let mut artifacts = Vec::new();
    for table in &outcome.report.tables {
        let name = format!("{}.csv", table.name);
        let path = out.join(&name);
        fs::write(&path, table.to_csv())?;
        names.push(name);
        csv_paths.push(path);
    }
    for (doc, value) in &outcome.documents {
        let name = format!("{doc}.json");
        let path = out.join(&name);
        fs::write(&path, serde_json::to_string_pretty(value)?)?;
        names.push(name);
        artifacts.push(path);
    }
    for (dir, grid, series) in &outcome.series {
        let path = out.join(dir);
        series.write_dir(grid, &path)?;
        names.push(format!("{dir}/"));
        artifacts.push(path);
    }
    let report_path = out.join("report.json");
    let mut text = serde_json::to_string_pretty(&report_json(outcome, &names))?;
    text.push('\n');
    fs::write(&report_path, text)?;
    Ok(ScenarioResult {
        pass: outcome.report.all_pass(),
        failures: outcome.report.failures().into_iter().map(String::from).collect(),
        report_path,
        csv_paths,
        artifacts,
        duration: Duration::ZERO,
    })
}

/// Runs the configured scenario and writes its report into `out`.
pub fn run_and_emit(config: &RunConfig, out: &Path) -> Result<ScenarioResult> {
    let start = Instant::now();
    let outcome = run_scenario(config)?;
    let mut result = emit_report(&outcome, out)?;
    result.duration = start.elapsed();
    Ok(result)
}
