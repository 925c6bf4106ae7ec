//! File-driven scenario runner: TOML config in, CSV + SVG + manifest out.

mod config;
mod models;
mod output;
mod reproduce;
pub mod svg;

use std::path::Path;
use std::time::Instant;

pub use config::{ArgumentsTable, Model, ParamValue, ScenarioConfig, SEED_ENV};
pub use output::{Artifact, Check, FileRecord, RunManifest, MANIFEST_FILE};
pub use reproduce::{
    threshold_economy, Target, DELAY_GRID_A, DELAY_GRID_ETA, DELAY_GRID_S, TRANSITORY_RHOS,
};

use crate::error::{Error, Result};

/// Validates `config`, runs the model and writes its outputs plus
/// `manifest.json` into `out_dir`. Nothing is written unless the whole run
/// succeeds.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let job = models::prepare(config)?;
    let outputs = job.execute()?;
    let echo = serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?;
    output::write_outputs(out_dir, outputs, "run", echo, config.seed, started)
}

/// Regenerates a published exhibit along with `comparison.csv`.
pub fn reproduce(target: Target, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let outputs = reproduce::execute(target)?;
    let echo = serde_json::json!({ "target": target.name() });
    output::write_outputs(out_dir, outputs, "reproduce", echo, None, started)
}

/// Rows of `comparison.csv` for a reproduce target, without writing files.
pub fn reproduce_checks(target: Target) -> Result<Vec<Check>> {
    let outputs = reproduce::execute(target)?;
    let comparison = outputs
        .artifacts
        .iter()
        .find(|a| a.name == "comparison.csv")
        .ok_or_else(|| Error::InvalidTrajectory("target wrote no comparison".into()))?;
    parse_checks(&comparison.bytes)
}

/// Parses the contents of a `comparison.csv`.
pub fn parse_checks(bytes: &[u8]) -> Result<Vec<Check>> {
    let mut reader = csv::Reader::from_reader(bytes);
    reader
        .records()
        .map(|record| {
            let r = record?;
            Ok(Check {
                quantity: r[0].to_string(),
                published: r[1].parse().ok(),
                computed: r[2].parse().unwrap_or(f64::NAN),
                tolerance: r[4].to_string(),
                pass: &r[5] == "true",
                note: r[6].to_string(),
            })
        })
        .collect()
}
