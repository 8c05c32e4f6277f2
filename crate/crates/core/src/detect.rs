//! Stage 2: fit the final detector on the purified set and score a test set.

use alloc::format;
use alloc::vec::Vec;

use crate::exec::{Executor, Serial};
use crate::scorers::{fit, Scorer, ScorerConfig, ScorerKind};
use crate::{Dataset, Error, PurifiedSet, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSummary {
    pub kind: ScorerKind,
    pub fitted_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectionResult {
    /// Aligned with test-set order.
    pub test_scores: Vec<f64>,
    pub final_model: ModelSummary,
    pub trainset_ids: Vec<u64>,
}

pub fn run_stage2(
    train: &Dataset,
    pure: &PurifiedSet,
    test: &Dataset,
    config: &ScorerConfig,
    seed: u64,
) -> Result<DetectionResult> {
    run_stage2_with(&Serial, train, pure, test, config, seed)
}

pub fn run_stage2_with<E: Executor>(
    exec: &E,
    train: &Dataset,
    pure: &PurifiedSet,
    test: &Dataset,
    config: &ScorerConfig,
    seed: u64,
) -> Result<DetectionResult> {
    if pure.retained_ids.is_empty() {
        return Err(Error::Fit("purified set is empty".into()));
    }
    if test.dim() != train.dim() {
        return Err(Error::Dimension {
            expected: train.dim(),
            actual: test.dim(),
        });
    }
    let samples = train.samples();
    let rows = pure
        .retained_ids
        .iter()
        .map(|&id| {
            train
                .position(id)
                .map(|p| samples[p].features.as_slice())
                .ok_or_else(|| Error::InvalidDataset(format!("retained id {id} is not in the training set")))
        })
        .collect::<Result<Vec<&[f64]>>>()?;
    let final_config = ScorerConfig {
        seed,
        ..config.clone()
    };
    let model = fit(&final_config, &rows)?;
    let tests = test.samples();
    let test_scores = exec
        .map(tests.len(), |i| model.score(&tests[i].features))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(DetectionResult {
        test_scores,
        final_model: ModelSummary {
            kind: model.kind(),
            fitted_size: rows.len(),
        },
        trainset_ids: pure.retained_ids.clone(),
    })
}
