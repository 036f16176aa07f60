//! Serialized evaluation reports and the run manifest that makes every
//! emitted file reproducible.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// One strategy evaluation: the achieved rate, feasibility, and whatever
/// parameters the strategy settled on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateReport {
    pub strategy: String,
    /// bits per channel use
    pub rate: f64,
    pub feasible: bool,
    /// constraint LHS − RHS; zero when the strategy has no constraint
    pub slack: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl RateReport {
    pub fn new(strategy: impl Into<String>, rate: f64) -> Self {
        RateReport {
            strategy: strategy.into(),
            rate,
            feasible: true,
            slack: 0.0,
            params: BTreeMap::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_feasibility(mut self, feasible: bool, slack: f64) -> Self {
        self.feasible = feasible;
        self.slack = slack;
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_meta(mut self, key: &str, value: serde_json::Value) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a command: the argv, inputs, seed, tool
/// version, and digests of whatever was written. The wall-clock field is
/// the only part that varies between identical runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub wall_clock_secs: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command: Vec<String>) -> Self {
        RunManifest {
            command,
            inputs: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_secs: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn record_output(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let mut h = Sha256::new();
        h.update(&bytes);
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", h.finalize()),
        });
        Ok(())
    }

    /// Writes `<path>.manifest.json` next to an output file.
    pub fn write_beside(&self, output: &Path) -> Result<()> {
        let mut p = output.as_os_str().to_owned();
        p.push(".manifest.json");
        std::fs::write(p, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Formats a float with 9 significant digits, the precision used for all
/// human-facing and CSV output.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.8e}")
}
