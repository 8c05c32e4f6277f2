//! Ablation over noise ratio, subset count and seed.

use std::fmt::Write as _;

use purifier_core::{
    auroc, contamination_rate, fit_samples, generate, purity_breakdown, run_stage1, run_stage2, Executor,
    NoiseRatio, PurityBreakdown, Stage1Params, SyntheticConfig,
};
use serde::{Deserialize, Serialize};

use crate::config::{DataSource, RunConfig};
use crate::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
    pub contamination_rate: f64,
    pub consensus: PurityBreakdown,
    pub submodels: Vec<PurityBreakdown>,
    pub stage2_auroc: f64,
    pub raw_auroc: f64,
}

impl SweepRow {
    pub fn submodel_mean_retained_anomalous(&self) -> f64 {
        mean(self.submodels.iter().map(|b| b.retained_anomalous as f64))
    }

    pub fn submodel_mean_retained_normal(&self) -> f64 {
        mean(self.submodels.iter().map(|b| b.retained_normal as f64))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Means over seeds for one `(alpha, k)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub alpha: f64,
    pub k: usize,
    pub runs: usize,
    pub mean_contamination_rate: f64,
    pub mean_retained_anomalous: f64,
    pub mean_retained_normal: f64,
    pub mean_submodel_retained_anomalous: f64,
    pub mean_submodel_retained_normal: f64,
    /// Share of runs where consensus kept no more anomalies than the
    /// sub-model mean.
    pub consensus_not_worse_fraction: f64,
    pub mean_stage2_auroc: f64,
    pub mean_raw_auroc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Sorted by `(alpha, k, seed)`.
    pub rows: Vec<SweepRow>,
}

fn sorted_unique<T: Clone>(items: &[T], cmp: impl Fn(&T, &T) -> std::cmp::Ordering) -> Vec<T> {
    let mut v = items.to_vec();
    v.sort_by(&cmp);
    v.dedup_by(|a, b| cmp(a, b).is_eq());
    v
}

/// Runs every `(alpha, k, seed)` triple of the sweep on synthetic data.
pub fn run_sweep<E: Executor>(exec: &E, config: &RunConfig) -> Result<SweepReport> {
    let DataSource::Synthetic(base) = &config.data else {
        return Err(HarnessError::InvalidArgument(
            "ablate needs a synthetic data source (`data.synthetic`)".into(),
        ));
    };
    let alphas = sorted_unique(&config.sweep.alpha_list, |a, b| a.get().total_cmp(&b.get()));
    let ks = sorted_unique(&config.sweep.k_list, Ord::cmp);
    let seeds = sorted_unique(&config.sweep.seed_list, Ord::cmp);
    let mut triples: Vec<(NoiseRatio, usize, u64)> = Vec::new();
    for &a in &alphas {
        for &k in &ks {
            triples.extend(seeds.iter().map(|&s| (a, k, s)));
        }
    }

    let results = exec.map(triples.len(), |i| {
        let (alpha, k, seed) = triples[i];
        run_triple(config, base, alpha, k, seed).map_err(|e| HarnessError::Sweep {
            alpha: alpha.get(),
            k,
            seed,
            source: Box::new(e),
        })
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { rows })
}

fn run_triple(config: &RunConfig, base: &SyntheticConfig, alpha: NoiseRatio, k: usize, seed: u64) -> Result<SweepRow> {
    let synthetic = SyntheticConfig {
        alpha,
        seed,
        ..base.clone()
    };
    let (train, test) = generate(&synthetic)?;
    let params = Stage1Params {
        k,
        master_seed: seed,
        ..config.stage1_params()
    };
    let s1 = run_stage1(&train, &params)?;
    let final_scorer = config.stage2_scorer();
    let labels = test.labels();
    let detection = run_stage2(&train, &s1.pure, &test, &final_scorer, seed)?;
    let raw = fit_samples(&final_scorer, train.samples())?.score_batch(&test)?;
    Ok(SweepRow {
        alpha: alpha.get(),
        k,
        seed,
        contamination_rate: contamination_rate(&s1.pure.retained_ids, &train)?,
        consensus: purity_breakdown(&s1.pure, &train)?,
        submodels: s1
            .per_model_pure
            .iter()
            .map(|p| purity_breakdown(p, &train))
            .collect::<purifier_core::Result<_>>()?,
        stage2_auroc: auroc(&labels, &detection.test_scores)?,
        raw_auroc: auroc(&labels, &raw)?,
    })
}

impl SweepReport {
    pub const CSV_HEADER: &'static str = "alpha,k,seed,contamination_rate,retained_normal,retained_anomalous,\
discarded_normal,discarded_anomalous,submodel_mean_retained_normal,submodel_mean_retained_anomalous,\
submodel_retained_anomalous,stage2_auroc,raw_auroc";

    /// One line per row; `submodel_retained_anomalous` lists per-model counts
    /// separated by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let per_model: Vec<String> = r.submodels.iter().map(|b| b.retained_anomalous.to_string()).collect();
            let c = &r.consensus;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.alpha,
                r.k,
                r.seed,
                r.contamination_rate,
                c.retained_normal,
                c.retained_anomalous,
                c.discarded_normal,
                c.discarded_anomalous,
                r.submodel_mean_retained_normal(),
                r.submodel_mean_retained_anomalous(),
                per_model.join(";"),
                r.stage2_auroc,
                r.raw_auroc
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn cells(&self) -> Vec<CellSummary> {
        let mut cells: Vec<CellSummary> = Vec::new();
        let mut start = 0;
        while start < self.rows.len() {
            let (alpha, k) = (self.rows[start].alpha, self.rows[start].k);
            let end = start
                + self.rows[start..]
                    .iter()
                    .take_while(|r| r.alpha == alpha && r.k == k)
                    .count();
            let group = &self.rows[start..end];
            let avg = |f: &dyn Fn(&SweepRow) -> f64| mean(group.iter().map(f));
            cells.push(CellSummary {
                alpha,
                k,
                runs: group.len(),
                mean_contamination_rate: avg(&|r| r.contamination_rate),
                mean_retained_anomalous: avg(&|r| r.consensus.retained_anomalous as f64),
                mean_retained_normal: avg(&|r| r.consensus.retained_normal as f64),
                mean_submodel_retained_anomalous: avg(&|r| r.submodel_mean_retained_anomalous()),
                mean_submodel_retained_normal: avg(&|r| r.submodel_mean_retained_normal()),
                consensus_not_worse_fraction: avg(&|r| {
                    f64::from(u8::from(r.consensus.retained_anomalous as f64 <= r.submodel_mean_retained_anomalous()))
                }),
                mean_stage2_auroc: avg(&|r| r.stage2_auroc),
                mean_raw_auroc: avg(&|r| r.raw_auroc),
            });
            start = end;
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub rows: usize,
    pub cells: Vec<CellSummary>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use purifier_core::Serial;

    fn small_config() -> RunConfig {
        let mut c = RunConfig::default();
        c.data = DataSource::Synthetic(SyntheticConfig {
            n_train: 60,
            n_test_normal: 20,
            n_test_anomalous: 20,
            ..SyntheticConfig::default()
        });
        c
    }

    #[test]
    fn rows_follow_sorted_cross_product() {
        let mut c = small_config();
        c.sweep.k_list = vec![3, 1];
        c.sweep.alpha_list = vec![NoiseRatio::new(0.2).unwrap(), NoiseRatio::new(0.1).unwrap()];
        c.sweep.seed_list = vec![7, 2, 7];
        let report = run_sweep(&Serial, &c).unwrap();
        let keys: Vec<(f64, usize, u64)> = report.rows.iter().map(|r| (r.alpha, r.k, r.seed)).collect();
        assert_eq!(
            keys,
            [(0.1, 1, 2), (0.1, 1, 7), (0.1, 3, 2), (0.1, 3, 7), (0.2, 1, 2), (0.2, 1, 7), (0.2, 3, 2), (0.2, 3, 7)]
        );
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 9);
        assert_eq!(report.cells().len(), 4);
        assert!(report.cells().iter().all(|c| c.runs == 2));
    }

    #[test]
    fn failing_triple_is_named() {
        let mut c = small_config();
        c.sweep.k_list = vec![40];
        c.sweep.alpha_list = vec![NoiseRatio::new(0.1).unwrap()];
        c.sweep.seed_list = vec![3];
        let err = run_sweep(&Serial, &c).unwrap_err();
        assert!(matches!(err, HarnessError::Sweep { k: 40, seed: 3, .. }), "{err}");
        assert!(err.to_string().contains("alpha=0.1, k=40, seed=3"));
    }

    #[test]
    fn file_sources_cannot_be_swept() {
        let mut c = small_config();
        c.data = DataSource::Files {
            train: "a.csv".into(),
            test: "b.csv".into(),
        };
        assert!(run_sweep(&Serial, &c).is_err());
    }
}
