//! Anomaly scorers used both as per-subset sub-models and as the final
//! detector.
//!
//! Every scorer kind is fitted on feature rows only, exposes a non-negative
//! anomaly score (higher is more anomalous) and a `d`-dimensional feature
//! representation used by the cross-model divergence diagnostic.

mod knn;
mod mahalanobis;
mod pca;

use alloc::format;
use alloc::vec::Vec;

pub use knn::KnnModel;
pub use mahalanobis::MahalanobisModel;
pub use pca::PcaModel;

use crate::exec::{Executor, Serial};
use crate::{Dataset, Error, Result, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ScorerKind {
    #[default]
    Knn,
    Pca,
    Mahalanobis,
}

impl core::fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ScorerKind::Knn => "knn",
            ScorerKind::Pca => "pca",
            ScorerKind::Mahalanobis => "mahalanobis",
        })
    }
}

/// How many principal components a PCA scorer keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PcaComponents {
    Count(usize),
    /// Smallest rank whose eigenvalues explain at least this share of the
    /// total variance.
    VarianceFraction(f64),
}

impl Default for PcaComponents {
    fn default() -> Self {
        PcaComponents::VarianceFraction(0.90)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ScorerConfig {
    pub kind: ScorerKind,
    pub knn_neighbors: usize,
    pub pca_components: PcaComponents,
    pub mahalanobis_ridge: f64,
    pub seed: u64,
}

impl Default for ScorerConfig {
    fn default() -> Self {
        Self {
            kind: ScorerKind::Knn,
            knn_neighbors: 3,
            pca_components: PcaComponents::default(),
            mahalanobis_ridge: 1e-6,
            seed: 0,
        }
    }
}

impl ScorerConfig {
    pub fn with_kind(kind: ScorerKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ScorerKind::Knn if self.knn_neighbors == 0 => {
                Err(Error::Config("knn_neighbors must be at least 1".into()))
            }
            ScorerKind::Pca => match self.pca_components {
                PcaComponents::Count(0) => Err(Error::Config("pca_components count must be at least 1".into())),
                PcaComponents::VarianceFraction(f) if !(f > 0.0 && f <= 1.0) => Err(Error::Config(format!(
                    "pca variance fraction {f} must lie in (0, 1]"
                ))),
                _ => Ok(()),
            },
            ScorerKind::Mahalanobis if !(self.mahalanobis_ridge >= 0.0 && self.mahalanobis_ridge.is_finite()) => {
                Err(Error::Config("mahalanobis_ridge must be a finite non-negative number".into()))
            }
            _ => Ok(()),
        }
    }

    /// Smallest fitting-set size this configuration accepts.
    pub fn min_samples(&self) -> usize {
        match self.kind {
            ScorerKind::Knn => self.knn_neighbors.max(1),
            ScorerKind::Pca => 2,
            ScorerKind::Mahalanobis => 1,
        }
    }
}

/// Common interface of fitted scorers.
pub trait Scorer {
    /// Feature dimension the scorer was fitted on.
    fn dim(&self) -> usize;

    /// Anomaly score of `x`; finite and non-negative.
    fn score(&self, x: &[f64]) -> Result<f64>;

    /// Feature representation of `x` under this model, of length `dim()`.
    fn representation(&self, x: &[f64]) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Knn(KnnModel),
    Pca(PcaModel),
    Mahalanobis(MahalanobisModel),
}

/// An immutable trained scorer.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedScorer {
    config: ScorerConfig,
    model: Model,
    train_subset_index: Option<usize>,
    fitted_size: usize,
}

impl FittedScorer {
    pub fn config(&self) -> &ScorerConfig {
        &self.config
    }

    pub fn kind(&self) -> ScorerKind {
        self.config.kind
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn train_subset_index(&self) -> Option<usize> {
        self.train_subset_index
    }

    pub fn fitted_size(&self) -> usize {
        self.fitted_size
    }

    pub(crate) fn with_subset_index(mut self, j: usize) -> Self {
        self.train_subset_index = Some(j);
        self
    }

    pub fn score_sample(&self, x: &Sample) -> Result<f64> {
        self.score(&x.features)
    }

    /// Scores every sample of `dataset`, in dataset order.
    pub fn score_batch(&self, dataset: &Dataset) -> Result<Vec<f64>> {
        self.score_batch_with(&Serial, dataset.samples())
    }

    /// Scores `queries` through `exec`. Each query is scored independently, so
    /// the result does not depend on the executor.
    pub fn score_batch_with<E: Executor>(&self, exec: &E, queries: &[Sample]) -> Result<Vec<f64>> {
        if let Some(bad) = queries.iter().find(|q| q.features.len() != self.dim()) {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: bad.features.len(),
            });
        }
        exec.map(queries.len(), |i| self.score(&queries[i].features))
            .into_iter()
            .collect()
    }
}

impl Scorer for FittedScorer {
    fn dim(&self) -> usize {
        match &self.model {
            Model::Knn(m) => m.dim(),
            Model::Pca(m) => m.dim(),
            Model::Mahalanobis(m) => m.dim(),
        }
    }

    fn score(&self, x: &[f64]) -> Result<f64> {
        match &self.model {
            Model::Knn(m) => m.score(x),
            Model::Pca(m) => m.score(x),
            Model::Mahalanobis(m) => m.score(x),
        }
    }

    fn representation(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.model {
            Model::Knn(m) => m.representation(x),
            Model::Pca(m) => m.representation(x),
            Model::Mahalanobis(m) => m.representation(x),
        }
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            actual: x.len(),
        })
    }
}

/// Fits a scorer on feature rows. Only feature values are ever seen here.
pub fn fit(config: &ScorerConfig, rows: &[&[f64]]) -> Result<FittedScorer> {
    config.validate()?;
    let first = rows.first().ok_or_else(|| Error::Fit("cannot fit on an empty sample set".into()))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Fit("feature dimension must be at least 1".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            actual: bad.len(),
        });
    }
    if rows.iter().any(|r| r.iter().any(|v| !v.is_finite())) {
        return Err(Error::Fit("features must be finite".into()));
    }
    if rows.len() < config.min_samples() {
        return Err(Error::Fit(format!(
            "{} scorer needs at least {} samples, got {}",
            config.kind,
            config.min_samples(),
            rows.len()
        )));
    }
    let model = match config.kind {
        ScorerKind::Knn => Model::Knn(KnnModel::fit(rows, dim, config.knn_neighbors)),
        ScorerKind::Pca => Model::Pca(PcaModel::fit(rows, dim, config.pca_components)),
        ScorerKind::Mahalanobis => Model::Mahalanobis(MahalanobisModel::fit(rows, dim, config.mahalanobis_ridge)?),
    };
    Ok(FittedScorer {
        config: config.clone(),
        model,
        train_subset_index: None,
        fitted_size: rows.len(),
    })
}

pub fn fit_samples(config: &ScorerConfig, samples: &[Sample]) -> Result<FittedScorer> {
    let rows: Vec<&[f64]> = samples.iter().map(|s| s.features.as_slice()).collect();
    fit(config, &rows)
}
