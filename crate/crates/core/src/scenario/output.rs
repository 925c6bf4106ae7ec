use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fixtures::{Reference, Tolerance};
use crate::trajectory::Trajectory;

pub const MANIFEST_FILE: &str = "manifest.json";

/// A file produced in memory, written only after the whole run succeeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Default)]
pub(crate) struct Outputs {
    pub artifacts: Vec<Artifact>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, bytes: impl Into<Vec<u8>>) {
        self.artifacts.push(Artifact {
            name: name.to_string(),
            bytes: bytes.into(),
        });
    }

    pub fn add_trajectory(&mut self, name: &str, traj: &Trajectory) -> Result<()> {
        let mut buf = Vec::new();
        traj.write_csv(&mut buf)?;
        self.add(name, buf);
        Ok(())
    }

    pub fn add_json(&mut self, name: &str, value: &impl Serialize) {
        let mut text = serde_json::to_string_pretty(value).expect("serializable summary");
        text.push('\n');
        self.add(name, text);
    }

    pub fn add_table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        self.add(name, bytes);
        Ok(())
    }

    pub fn add_checks(&mut self, checks: &[Check]) -> Result<()> {
        let rows: Vec<Vec<String>> = checks.iter().map(Check::row).collect();
        self.add_table("comparison.csv", &Check::HEADER, &rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub duration_seconds: f64,
    pub files: Vec<FileRecord>,
}

impl RunManifest {
    pub fn file(&self, name: &str) -> Option<&FileRecord> {
        self.files.iter().find(|f| f.path == name)
    }
}

pub(crate) fn write_outputs(
    out_dir: &Path,
    outputs: Outputs,
    command: &str,
    config: serde_json::Value,
    seed: Option<u64>,
    started: Instant,
) -> Result<RunManifest> {
    let unwritable = |source| Error::OutputDir {
        path: out_dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(out_dir).map_err(unwritable)?;
    let mut files = Vec::with_capacity(outputs.artifacts.len());
    for artifact in &outputs.artifacts {
        fs::write(out_dir.join(&artifact.name), &artifact.bytes).map_err(unwritable)?;
        files.push(FileRecord {
            path: artifact.name.clone(),
            bytes: artifact.bytes.len() as u64,
            sha256: hex::encode(Sha256::digest(&artifact.bytes)),
        });
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        config,
        seed,
        duration_seconds: started.elapsed().as_secs_f64(),
        files,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
    text.push('\n');
    fs::write(out_dir.join(MANIFEST_FILE), text).map_err(unwritable)?;
    Ok(manifest)
}

/// One row of a comparison against a published value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub published: Option<f64>,
    pub computed: f64,
    pub tolerance: String,
    pub pass: bool,
    pub note: String,
}

impl Check {
    const HEADER: [&'static str; 7] = [
        "quantity",
        "published",
        "computed",
        "rel_error",
        "tolerance",
        "pass",
        "note",
    ];

    pub fn against(reference: &Reference, computed: f64) -> Self {
        Self::with_tolerance(reference.name, reference.value, computed, reference.tolerance)
    }

    pub fn with_tolerance(name: &str, published: f64, computed: f64, tolerance: Tolerance) -> Self {
        Self {
            quantity: name.to_string(),
            published: Some(published),
            computed,
            tolerance: tolerance.describe(),
            pass: tolerance.accepts(computed, published),
            note: String::new(),
        }
    }

    /// A qualitative condition with no published number.
    pub fn condition(name: &str, computed: f64, rule: &str, pass: bool) -> Self {
        Self {
            quantity: name.to_string(),
            published: None,
            computed,
            tolerance: rule.to_string(),
            pass,
            note: String::new(),
        }
    }

    pub fn noted(mut self, note: &str) -> Self {
        self.note = note.to_string();
        self
    }

    pub fn rel_error(&self) -> Option<f64> {
        self.published
            .filter(|p| *p != 0.0)
            .map(|p| (self.computed - p).abs() / p.abs())
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.published.map(|p| p.to_string()).unwrap_or_default(),
            self.computed.to_string(),
            self.rel_error().map(|e| format!("{e:.3e}")).unwrap_or_default(),
            self.tolerance.clone(),
            self.pass.to_string(),
            self.note.clone(),
        ]
    }
}
