//! JSON run configuration. Every field has a default, and the fully
//! materialised configuration is echoed into every result artifact.

use std::path::{Path, PathBuf};

use purifier_core::{ConsensusOptions, NoiseRatio, ScorerConfig, Stage1Params, SyntheticConfig};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, Result, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Synthetic(SyntheticConfig),
    /// CSV dataset files, relative to the configuration file.
    Files { train: PathBuf, test: PathBuf },
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::Synthetic(SyntheticConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub k_list: Vec<usize>,
    pub alpha_list: Vec<NoiseRatio>,
    pub seed_list: Vec<u64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            k_list: vec![1, 3, 5, 7],
            alpha_list: [0.0, 0.1, 0.2, 0.4]
                .into_iter()
                .map(|a| NoiseRatio::new(a).expect("valid"))
                .collect(),
            seed_list: (0..5).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub data: DataSource,
    pub k: usize,
    pub t: f64,
    pub stage1_scorer: ScorerConfig,
    /// Copied from `stage1_scorer` when absent.
    pub stage2_scorer: Option<ScorerConfig>,
    pub consensus: ConsensusOptions,
    pub master_seed: u64,
    pub sweep: SweepConfig,
    /// Not echoed into artifacts; `--out` takes precedence.
    #[serde(skip_serializing)]
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            data: DataSource::default(),
            k: 5,
            t: 0.40,
            stage1_scorer: ScorerConfig::default(),
            stage2_scorer: None,
            consensus: ConsensusOptions::default(),
            master_seed: 0,
            sweep: SweepConfig::default(),
            output_dir: None,
        }
    }
}

impl RunConfig {
    /// Reads and validates a configuration file, filling in defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut config = Self::parse(&text).map_err(|m| HarnessError::config(path, m))?;
        config.validate().map_err(|m| HarnessError::config(path, m))?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let DataSource::Files { train, test } = &mut config.data {
            *train = base.join(&*train);
            *test = base.join(&*test);
        }
        config.output_dir = config.output_dir.map(|d| base.join(d));
        Ok(config)
    }

    /// Parses JSON text, reporting the failing field path and position.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut de = serde_json::Deserializer::from_str(text);
        let mut config: RunConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path.is_empty() || path == "." {
                format!("invalid configuration: {inner}")
            } else {
                format!("field `{path}`: {inner}")
            }
        })?;
        de.end().map_err(|e| format!("trailing content: {e}"))?;
        config.materialize();
        Ok(config)
    }

    fn materialize(&mut self) {
        if self.stage2_scorer.is_none() {
            self.stage2_scorer = Some(self.stage1_scorer.clone());
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "field `schema_version`: unsupported version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.k == 0 {
            return Err("field `k`: must be at least 1".into());
        }
        if !(self.t > 0.0 && self.t <= 1.0) {
            return Err(format!("field `t`: {} is outside (0, 1]", self.t));
        }
        self.stage1_scorer
            .validate()
            .map_err(|e| format!("field `stage1_scorer`: {e}"))?;
        self.stage2_scorer()
            .validate()
            .map_err(|e| format!("field `stage2_scorer`: {e}"))?;
        if let DataSource::Synthetic(s) = &self.data {
            s.validate().map_err(|e| format!("field `data.synthetic`: {e}"))?;
        }
        let sweep = &self.sweep;
        if sweep.k_list.is_empty() || sweep.alpha_list.is_empty() || sweep.seed_list.is_empty() {
            return Err("field `sweep`: k_list, alpha_list and seed_list must be non-empty".into());
        }
        if sweep.k_list.contains(&0) {
            return Err("field `sweep.k_list`: entries must be at least 1".into());
        }
        Ok(())
    }

    pub fn stage2_scorer(&self) -> ScorerConfig {
        self.stage2_scorer.clone().unwrap_or_else(|| self.stage1_scorer.clone())
    }

    pub fn stage1_params(&self) -> Stage1Params {
        Stage1Params {
            k: self.k,
            t: self.t,
            scorer: self.stage1_scorer.clone(),
            master_seed: self.master_seed,
            consensus: self.consensus,
        }
    }

    /// Applies `--seed`: the master seed, the synthetic seed and the sweep
    /// seed list all take the override.
    pub fn override_seed(&mut self, seed: u64) {
        self.master_seed = seed;
        if let DataSource::Synthetic(s) = &mut self.data {
            s.seed = seed;
        }
        self.sweep.seed_list = vec![seed];
    }
}
