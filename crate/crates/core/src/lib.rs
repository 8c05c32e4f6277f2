//! Contamination-robust anomaly detection on feature vectors.
//!
//! A contaminated training set is split into `k` disjoint subsets, one scorer
//! is fitted per subset, and every training sample is scored by every scorer.
//! The mean of those scores (the consensus score) ranks samples, and the
//! lowest `t`-fraction is kept as a purified training set. A final detector is
//! then fitted on the purified set only.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and the
//! thread-pool executor live in the `purifier` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod datagen;
pub mod detect;
mod error;
pub mod exec;
mod linalg;
pub mod metrics;
pub mod partition;
pub mod quantile;
pub mod scorers;
pub mod screening;
mod types;

pub use datagen::{generate, SyntheticConfig};
pub use detect::{run_stage2, run_stage2_with, DetectionResult, ModelSummary};
pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use metrics::{auroc, contamination_rate, purity_breakdown, PurityBreakdown};
pub use partition::{mix_seed, partition_dataset, PartitionPlan};
pub use quantile::{compute_threshold, retained_count, select_pure, ConsensusScores, PurifiedSet};
pub use scorers::{fit, fit_samples, FittedScorer, PcaComponents, Scorer, ScorerConfig, ScorerKind};
pub use screening::{
    build_score_matrix, build_score_matrix_with, consensus, consensus_with, cross_model_divergence, divergences, run_stage1,
    run_stage1_with, train_submodels, train_submodels_with, ConsensusOptions, ScoreMatrix, ScoreNormalization,
    Stage1Params, Stage1Result,
};
pub use types::{Dataset, Label, NoiseRatio, Role, Sample};
