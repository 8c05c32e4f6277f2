//! Versioned JSON artifacts written by the CLI.

use std::path::Path;

use purifier_core::{DetectionResult, PurityBreakdown, Stage1Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateArtifact {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub train_samples: usize,
    pub train_anomalies: usize,
    pub test_normal: usize,
    pub test_anomalous: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage1Artifact {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub result: Stage1Result,
    /// Cross-model divergence per training sample; absent when k = 1.
    pub divergence: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionArtifact {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub tau: f64,
    pub result: DetectionResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsArtifact {
    pub schema_version: u32,
    pub command: String,
    pub retained: usize,
    pub contamination_rate: f64,
    pub consensus_breakdown: PurityBreakdown,
    pub submodel_breakdowns: Vec<PurityBreakdown>,
    pub submodel_mean_retained_anomalous: f64,
    pub mean_divergence_normal: Option<f64>,
    pub mean_divergence_anomalous: Option<f64>,
    pub test_auroc: Option<f64>,
    pub raw_baseline_auroc: f64,
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialise");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::config(path, e.to_string()))
}
