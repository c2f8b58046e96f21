//! Scenario runner: configuration, protocols, the built-in registry and
//! the files each run leaves behind.

pub mod config;
pub mod output;
mod protocols;
pub mod registry;

pub use config::{parse_config, ConfigErrors, ConfigIssue, Protocol, ScenarioConfig};
pub use protocols::vn_table;

use crate::error::MocError;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration:\n{0}")]
    Config(ConfigErrors),
    #[error("unknown scenario `{0}`; known: {known}", known = registry::ids().join(", "))]
    UnknownScenario(String),
    #[error(transparent)]
    Numeric(#[from] MocError),
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ExperimentError {
    /// Process exit code: 3 for bad input, 4 for numerical or i/o failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::UnknownScenario(_) => 3,
            Self::Numeric(_) | Self::Io { .. } => 4,
        }
    }
}

impl From<ConfigErrors> for ExperimentError {
    fn from(e: ConfigErrors) -> Self {
        Self::Config(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    /// Whether `lo` is excluded.
    pub strict_lo: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    /// `None` for informational values, which always pass.
    pub tolerance: Option<Band>,
    pub pass: bool,
}

impl Metric {
    pub fn info(name: &str, value: f64) -> Self {
        Self { name: name.into(), value, tolerance: None, pass: true }
    }

    /// Passes when `lo ≤ value ≤ hi`; a missing bound is open.
    pub fn check(name: &str, value: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        if lo.is_none() && hi.is_none() {
            return Self::info(name, value);
        }
        let pass = value.is_finite() && lo.is_none_or(|l| value >= l) && hi.is_none_or(|h| value <= h);
        Self { name: name.into(), value, tolerance: Some(Band { lo, hi, strict_lo: false }), pass }
    }

    pub fn check_strict_above(name: &str, value: f64, lo: f64) -> Self {
        let pass = value.is_finite() && value > lo;
        Self { name: name.into(), value, tolerance: Some(Band { lo: Some(lo), hi: None, strict_lo: true }), pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub figure: String,
    pub description: String,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    pub wall_time_s: f64,
    pub master_seed: u64,
    pub code_fingerprint: String,
    pub config_fingerprint: String,
}

/// Runs every section of one scenario and writes `<out>/<id>/summary.json`.
/// Section directories are `<out>/<id>/<part>` for multi-part scenarios.
pub fn run_scenario(
    id: &str,
    figure: &str,
    description: &str,
    sections: &[ScenarioConfig],
    config_text: &str,
    out: &Path,
) -> Result<RunSummary, ExperimentError> {
    let start = Instant::now();
    let root = out.join(id);
    let mut metrics = Vec::new();
    for cfg in sections {
        let part = cfg.id.split_once('/').map(|(_, p)| p);
        let dir = part.map_or(root.clone(), |p| root.join(p));
        let prefix = part.map(|p| format!("{p}."));
        for mut m in protocols::execute(cfg, &dir)? {
            if let Some(p) = &prefix {
                m.name = format!("{p}{}", m.name);
            }
            metrics.push(m);
        }
    }
    let summary = RunSummary {
        scenario: id.to_string(),
        figure: figure.to_string(),
        description: description.to_string(),
        pass: metrics.iter().all(|m| m.pass),
        metrics,
        wall_time_s: start.elapsed().as_secs_f64(),
        master_seed: sections.first().map_or(0, |c| c.seed),
        code_fingerprint: output::code_fingerprint(),
        config_fingerprint: output::sha256_hex(config_text.as_bytes()),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    output::write_atomic(&root.join("summary.json"), json.as_bytes())?;
    Ok(summary)
}

/// Replaces the seed of every section.
fn apply_seed(sections: &mut [ScenarioConfig], seed: Option<u64>) {
    if let Some(s) = seed {
        for c in sections {
            c.seed = s;
        }
    }
}

/// Runs a registered scenario.
pub fn reproduce(id: &str, out: &Path, seed: Option<u64>) -> Result<RunSummary, ExperimentError> {
    let entry = registry::find(id).ok_or_else(|| ExperimentError::UnknownScenario(id.to_string()))?;
    let mut sections = parse_config(entry.config)?;
    apply_seed(&mut sections, seed);
    run_scenario(entry.id, entry.figure, entry.metric, &sections, entry.config, out)
}

/// Runs every scenario in a configuration file. Sections sharing an id
/// prefix (`name/part`) form one scenario; scenarios run concurrently.
pub fn run_config(text: &str, out: &Path, seed: Option<u64>) -> Result<Vec<RunSummary>, ExperimentError> {
    let mut sections = parse_config(text)?;
    apply_seed(&mut sections, seed);
    let mut groups: Vec<(String, Vec<ScenarioConfig>)> = Vec::new();
    for c in sections {
        let id = c.scenario().to_string();
        match groups.iter_mut().find(|g| g.0 == id) {
            Some(g) => g.1.push(c),
            None => groups.push((id, vec![c])),
        }
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(groups.len()).max(1);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<RunSummary, ExperimentError>>>> =
        Mutex::new((0..groups.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((id, secs)) = groups.get(i) else { break };
                let r = run_scenario(id, "custom", "user configuration", secs, text, out);
                results.lock().expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    results.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every group ran")).collect()
}

/// Where a scenario's summary lands.
pub fn summary_path(out: &Path, id: &str) -> PathBuf {
    out.join(id).join("summary.json")
}
