//! Stage 1: fit one scorer per partition subset, score the whole training set
//! with every scorer, average the scores and keep the lowest `t`-fraction.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::exec::{Executor, Serial};
use crate::linalg::squared_distance;
use crate::partition::mix_seed;
use crate::quantile::select_lowest;
use crate::scorers::{fit, FittedScorer, Scorer, ScorerConfig};
use crate::{
    partition_dataset, select_pure, ConsensusScores, Dataset, Error, PartitionPlan, PurifiedSet, Result,
};

/// Raw scores `values[i][j]` of training sample `i` under sub-model `j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).ok_or(Error::EmptyInput)?;
        if cols == 0 {
            return Err(Error::EmptyInput);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Alignment {
                expected: cols,
                actual: bad.len(),
            });
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("score matrix entries must be finite".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks_exact(self.cols).map(<[f64]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScoreNormalization {
    /// Plain mean of raw scores.
    #[default]
    None,
    /// Each column is shifted to zero mean and unit (population) standard
    /// deviation before averaging. Constant columns become all zeros.
    ZScore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ConsensusOptions {
    /// Average only over sub-models that did not see the sample.
    pub exclude_native: bool,
    pub normalization: ScoreNormalization,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stage1Params {
    pub k: usize,
    pub t: f64,
    pub scorer: ScorerConfig,
    pub master_seed: u64,
    pub consensus: ConsensusOptions,
}

impl Default for Stage1Params {
    fn default() -> Self {
        Self {
            k: 5,
            t: 0.40,
            scorer: ScorerConfig::default(),
            master_seed: 0,
            consensus: ConsensusOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stage1Result {
    pub plan: PartitionPlan,
    pub matrix: ScoreMatrix,
    pub consensus: ConsensusScores,
    pub pure: PurifiedSet,
    /// `per_model_pure[j]` applies the same selection to column `j` alone.
    pub per_model_pure: Vec<PurifiedSet>,
}

fn check_plan(dataset: &Dataset, plan: &PartitionPlan) -> Result<()> {
    if plan.len() == dataset.len() {
        Ok(())
    } else {
        Err(Error::Alignment {
            expected: dataset.len(),
            actual: plan.len(),
        })
    }
}

/// Fits sub-model `j` on subset `j` only, seeded with `mix_seed(plan.seed(), j)`.
pub fn train_submodels(dataset: &Dataset, plan: &PartitionPlan, config: &ScorerConfig) -> Result<Vec<FittedScorer>> {
    train_submodels_with(&Serial, dataset, plan, config)
}

pub fn train_submodels_with<E: Executor>(
    exec: &E,
    dataset: &Dataset,
    plan: &PartitionPlan,
    config: &ScorerConfig,
) -> Result<Vec<FittedScorer>> {
    check_plan(dataset, plan)?;
    config.validate()?;
    let samples = dataset.samples();
    exec.map(plan.k(), |j| {
        let rows: Vec<&[f64]> = plan.members(j).into_iter().map(|i| samples[i].features.as_slice()).collect();
        let sub_config = ScorerConfig {
            seed: mix_seed(plan.seed(), j as u64),
            ..config.clone()
        };
        fit(&sub_config, &rows)
            .map(|f| f.with_subset_index(j))
            .map_err(|e| Error::SubsetFit {
                subset: j,
                reason: e.to_string(),
            })
    })
    .into_iter()
    .collect()
}

/// Scores every training sample under every sub-model, native subsets
/// included.
pub fn build_score_matrix(submodels: &[FittedScorer], dataset: &Dataset) -> Result<ScoreMatrix> {
    build_score_matrix_with(&Serial, submodels, dataset)
}

pub fn build_score_matrix_with<E: Executor>(
    exec: &E,
    submodels: &[FittedScorer],
    dataset: &Dataset,
) -> Result<ScoreMatrix> {
    if submodels.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(m) = submodels.iter().find(|m| m.dim() != dataset.dim()) {
        return Err(Error::Dimension {
            expected: m.dim(),
            actual: dataset.dim(),
        });
    }
    let samples = dataset.samples();
    let rows = exec.map(samples.len(), |i| {
        submodels
            .iter()
            .map(|m| m.score(&samples[i].features))
            .collect::<Result<Vec<f64>>>()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    ScoreMatrix::from_rows(rows)
}

/// Row means of the raw score matrix, summed in column order.
pub fn consensus(matrix: &ScoreMatrix) -> ConsensusScores {
    let k = matrix.cols() as f64;
    let scores = (0..matrix.rows())
        .map(|i| matrix.row(i).iter().fold(0.0, |acc, v| acc + v) / k)
        .collect();
    ConsensusScores::new(scores).expect("matrix entries are finite")
}

/// Consensus with optional per-column standardisation and native-model
/// exclusion. `plan` is required when `exclude_native` is set.
pub fn consensus_with(
    matrix: &ScoreMatrix,
    plan: Option<&PartitionPlan>,
    options: &ConsensusOptions,
) -> Result<ConsensusScores> {
    let (n, k) = (matrix.rows(), matrix.cols());
    let mut values = matrix.to_rows();
    if options.normalization == ScoreNormalization::ZScore {
        for j in 0..k {
            let col = matrix.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let sd = libm::sqrt(var);
            for row in values.iter_mut() {
                row[j] = if sd > 0.0 { (row[j] - mean) / sd } else { 0.0 };
            }
        }
    }
    let scores = if options.exclude_native {
        let plan = plan.ok_or_else(|| Error::Config("exclude_native requires a partition plan".into()))?;
        if plan.len() != n || plan.k() != k {
            return Err(Error::Alignment {
                expected: n,
                actual: plan.len(),
            });
        }
        if k < 2 {
            return Err(Error::Config("exclude_native needs at least two sub-models".into()));
        }
        values
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let native = plan.subset_of(i);
                let sum = row
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != native)
                    .fold(0.0, |acc, (_, v)| acc + v);
                sum / (k - 1) as f64
            })
            .collect()
    } else {
        values
            .iter()
            .map(|row| row.iter().fold(0.0, |acc, v| acc + v) / k as f64)
            .collect()
    };
    ConsensusScores::new(scores)
}

/// Mean Euclidean distance between the representation of training sample `i`
/// under its native sub-model and under each non-native sub-model.
pub fn cross_model_divergence(
    submodels: &[FittedScorer],
    plan: &PartitionPlan,
    dataset: &Dataset,
    i: usize,
) -> Result<f64> {
    check_plan(dataset, plan)?;
    if submodels.len() != plan.k() {
        return Err(Error::Alignment {
            expected: plan.k(),
            actual: submodels.len(),
        });
    }
    if plan.k() < 2 {
        return Err(Error::DivergenceUndefined);
    }
    let x = &dataset
        .samples()
        .get(i)
        .ok_or_else(|| Error::Config(format!("sample index {i} out of range")))?
        .features;
    let native = plan.subset_of(i);
    let own = submodels[native].representation(x)?;
    let mut total = 0.0;
    for (l, m) in submodels.iter().enumerate() {
        if l != native {
            total += libm::sqrt(squared_distance(&own, &m.representation(x)?));
        }
    }
    Ok(total / (plan.k() - 1) as f64)
}

/// Divergence of every training sample, in dataset order.
pub fn divergences(submodels: &[FittedScorer], plan: &PartitionPlan, dataset: &Dataset) -> Result<Vec<f64>> {
    (0..dataset.len())
        .map(|i| cross_model_divergence(submodels, plan, dataset, i))
        .collect()
}

pub fn run_stage1(dataset: &Dataset, params: &Stage1Params) -> Result<Stage1Result> {
    run_stage1_with(&Serial, dataset, params)
}

/// Partition, fit, score, aggregate and select. Executor choice never
/// changes the result.
pub fn run_stage1_with<E: Executor>(exec: &E, dataset: &Dataset, params: &Stage1Params) -> Result<Stage1Result> {
    if !(params.t > 0.0 && params.t <= 1.0) {
        return Err(Error::InvalidQuantile(params.t));
    }
    let plan = partition_dataset(dataset, params.k, params.master_seed)?;
    let submodels = train_submodels_with(exec, dataset, &plan, &params.scorer)?;
    let matrix = build_score_matrix_with(exec, &submodels, dataset)?;
    let consensus = consensus_with(&matrix, Some(&plan), &params.consensus)?;
    let pure = select_pure(dataset, &consensus, params.t)?;
    let ids: Vec<u64> = dataset.ids().collect();
    let per_model_pure = (0..matrix.cols())
        .map(|j| select_lowest(&ids, &matrix.column(j), params.t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stage1Result {
        plan,
        matrix,
        consensus,
        pure,
        per_model_pure,
    })
}
