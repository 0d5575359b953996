//! Run directory `<outdir>/<suite>/<timestamp>/` with manifest, report,
//! table and column schema.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::suites::SuiteOutput;

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub command: &'a str,
    pub suite: &'a str,
    pub started: String,
    pub finished: String,
    pub seed: u64,
    pub config_sha256: String,
    pub versions: serde_json::Value,
    pub status: &'a str,
    pub failures: &'a [String],
    pub config: &'a ExperimentConfig,
}

/// SHA-256 of the JSON form of the config with the output directory removed.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let mut c = cfg.clone();
    c.outdir = None;
    let bytes = serde_json::to_vec(&c).expect("config serializes");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn versions() -> serde_json::Value {
    json!({ "splab-cli": env!("CARGO_PKG_VERSION"), "splab-core": splab::VERSION })
}

pub fn timestamp() -> String {
    chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string()
}

/// Fresh directory under `root/suite`; a numeric suffix avoids collisions.
pub fn run_dir(root: &Path, suite: &str, stamp: &str) -> std::io::Result<PathBuf> {
    let base = root.join(suite);
    fs::create_dir_all(&base)?;
    let mut dir = base.join(stamp);
    let mut k = 1;
    while dir.exists() {
        dir = base.join(format!("{stamp}-{k}"));
        k += 1;
    }
    fs::create_dir(&dir)?;
    Ok(dir)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_outputs(dir: &Path, out: &SuiteOutput) -> anyhow::Result<()> {
    write_json(&dir.join("report.json"), &out.report)?;
    let mut w = csv::Writer::from_path(dir.join("table.csv"))?;
    w.write_record(out.columns.iter().map(|c| c.0))?;
    for row in &out.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    let columns: Vec<_> = out
        .columns
        .iter()
        .map(|(name, description)| json!({ "name": name, "description": description }))
        .collect();
    write_json(
        &dir.join("schema.json"),
        &json!({ "table": "table.csv", "columns": columns }),
    )
}
