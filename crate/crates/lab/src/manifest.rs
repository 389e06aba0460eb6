//! Experiment configuration and output manifests.
//!
//! Every primary output file (JSON summary, CSV rows) embeds the full
//! configuration and master seed, so no result file is an orphan. The
//! side manifest `<out>.manifest.json` additionally carries a wall-clock
//! timestamp; primary outputs stay timestamp-free so identical argv and
//! seed reproduce them byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Default)]
pub struct ExperimentConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    /// Envelope exponent `C` in `e(i) = p(i)^-C eps^c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_big_c: Option<f64>,
    /// Envelope exponent `c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_small_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: String,
    pub seed: u64,
    pub rng_id: String,
    pub jobs: usize,
}

impl ExperimentConfig {
    pub fn new(command: &str, seed: u64) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            seed,
            rng_id: trp_core::rng::RNG_ID.to_string(),
            format: "json".to_string(),
            jobs: 0,
            ..Default::default()
        }
    }
}

/// Writes a JSON value with the config embedded under `"config"`.
pub fn write_json(path: &Path, config: &ExperimentConfig, body: serde_json::Value) -> Result<()> {
    let doc = serde_json::json!({
        "config": config,
        "artifact_version": ARTIFACT_VERSION,
        "result": body,
    });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes CSV rows with the config on a leading `#` comment line.
pub fn write_csv(
    path: &Path,
    config: &ExperimentConfig,
    header: &str,
    rows: &[String],
) -> Result<()> {
    let mut text = String::new();
    text.push_str("# ");
    text.push_str(&serde_json::to_string(config)?);
    text.push('\n');
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Side manifest with the timestamp; written next to the primary output.
pub fn write_manifest(primary: &Path, config: &ExperimentConfig, outputs: &[&Path]) -> Result<()> {
    let timestamp_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0);
    let doc = serde_json::json!({
        "config": config,
        "artifact_version": ARTIFACT_VERSION,
        "timestamp_unix_ms": timestamp_ms,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    let path = manifest_path(primary);
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut s = primary.as_os_str().to_os_string();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Compact deterministic float formatting for CSV cells: shortest
/// round-trip representation.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{:.1}", x)
    } else {
        format!("{}", x)
    }
}
