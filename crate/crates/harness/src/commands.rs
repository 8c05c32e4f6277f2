//! The five CLI commands. Each writes its artifacts into the output directory
//! and returns the paths it wrote.

use std::path::{Path, PathBuf};

use purifier_core::{
    auroc, contamination_rate, fit_samples, generate, purity_breakdown, run_stage1_with, run_stage2_with,
    screening, Dataset, Label, PurifiedSet, Role,
};

use crate::artifacts::{
    read_json, write_json, DetectionArtifact, GenerateArtifact, MetricsArtifact, Stage1Artifact,
};
use crate::config::{DataSource, RunConfig};
use crate::dataset_io::{read_dataset, write_dataset};
use crate::exec::PoolExecutor;
use crate::sweep::{run_sweep, SweepSummary};
use crate::{svg, HarnessError, Result, SCHEMA_VERSION};

/// Options shared by every command.
#[derive(Debug, Clone, Default)]
pub struct CommonOptions {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: usize,
}

/// Loaded configuration, output directory and executor for one invocation.
pub struct Context {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub exec: PoolExecutor,
}

impl Context {
    pub fn new(opts: &CommonOptions) -> Result<Self> {
        let mut config = RunConfig::load(&opts.config)?;
        if let Some(seed) = opts.seed {
            config.override_seed(seed);
        }
        let out_dir = opts
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&out_dir).map_err(|e| HarnessError::io(&out_dir, e))?;
        let exec = PoolExecutor::new(opts.threads)?;
        Ok(Self { config, out_dir, exec })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Training and test sets from the configured source.
    pub fn datasets(&self) -> Result<(Dataset, Dataset)> {
        match &self.config.data {
            DataSource::Synthetic(s) => Ok(generate(s)?),
            DataSource::Files { train, test } => {
                Ok((read_dataset(train, Role::Train)?, read_dataset(test, Role::Test)?))
            }
        }
    }
}

pub fn cmd_generate(ctx: &Context) -> Result<Vec<PathBuf>> {
    let DataSource::Synthetic(synthetic) = &ctx.config.data else {
        return Err(HarnessError::InvalidArgument(
            "generate needs a synthetic data source (`data.synthetic`)".into(),
        ));
    };
    let (train, test) = generate(synthetic)?;
    let count = |d: &Dataset, l: Label| d.samples().iter().filter(|s| s.label == l).count();
    let paths = [ctx.path("train.csv"), ctx.path("test.csv"), ctx.path("generate.json")];
    write_dataset(&train, &paths[0])?;
    write_dataset(&test, &paths[1])?;
    write_json(
        &GenerateArtifact {
            schema_version: SCHEMA_VERSION,
            command: "generate".into(),
            config: ctx.config.clone(),
            train_samples: train.len(),
            train_anomalies: count(&train, Label::Anomalous),
            test_normal: count(&test, Label::Normal),
            test_anomalous: count(&test, Label::Anomalous),
        },
        &paths[2],
    )?;
    Ok(paths.to_vec())
}

fn screen(ctx: &Context, train: &Dataset) -> Result<Stage1Artifact> {
    let params = ctx.config.stage1_params();
    let result = run_stage1_with(&ctx.exec, train, &params)?;
    let divergence = if result.plan.k() >= 2 {
        let models = screening::train_submodels_with(&ctx.exec, train, &result.plan, &params.scorer)?;
        Some(screening::divergences(&models, &result.plan, train)?)
    } else {
        None
    };
    Ok(Stage1Artifact {
        schema_version: SCHEMA_VERSION,
        command: "screen".into(),
        config: ctx.config.clone(),
        result,
        divergence,
    })
}

pub fn cmd_screen(ctx: &Context) -> Result<Vec<PathBuf>> {
    let (train, _) = ctx.datasets()?;
    let artifact = screen(ctx, &train)?;
    let purified = train.subset_by_ids(&artifact.result.pure.retained_ids)?;
    let paths = [ctx.path("stage1.json"), ctx.path("pure_train.csv")];
    write_json(&artifact, &paths[0])?;
    write_dataset(&purified, &paths[1])?;
    Ok(paths.to_vec())
}

/// Fits the final detector on the purified set. The purified set comes from
/// `stage1` when given, otherwise stage 1 is run first.
pub fn cmd_detect(ctx: &Context, stage1: Option<&Path>) -> Result<Vec<PathBuf>> {
    let (train, test) = ctx.datasets()?;
    let pure: PurifiedSet = match stage1 {
        Some(p) => read_json::<Stage1Artifact>(p)?.result.pure,
        None => run_stage1_with(&ctx.exec, &train, &ctx.config.stage1_params())?.pure,
    };
    let result = run_stage2_with(
        &ctx.exec,
        &train,
        &pure,
        &test,
        &ctx.config.stage2_scorer(),
        ctx.config.master_seed,
    )?;
    let path = ctx.path("detection.json");
    write_json(
        &DetectionArtifact {
            schema_version: SCHEMA_VERSION,
            command: "detect".into(),
            config: ctx.config.clone(),
            tau: pure.tau,
            result,
        },
        &path,
    )?;
    Ok(vec![path])
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Scores stage-1 and stage-2 artifacts against the ground-truth labels.
/// Missing default artifacts are skipped for detection only.
pub fn cmd_evaluate(ctx: &Context, stage1: Option<&Path>, detection: Option<&Path>) -> Result<Vec<PathBuf>> {
    let (train, test) = ctx.datasets()?;
    let stage1_path = stage1.map(Path::to_path_buf).unwrap_or_else(|| ctx.path("stage1.json"));
    let s1: Stage1Artifact = read_json(&stage1_path)?;
    let detection: Option<DetectionArtifact> = match detection {
        Some(p) => Some(read_json(p)?),
        None => {
            let p = ctx.path("detection.json");
            p.exists().then(|| read_json(&p)).transpose()?
        }
    };
    if s1.result.consensus.len() != train.len() {
        return Err(HarnessError::config(&stage1_path, "stage-1 result does not match the training set"));
    }

    let pure = &s1.result.pure;
    let submodel_breakdowns = s1
        .result
        .per_model_pure
        .iter()
        .map(|p| purity_breakdown(p, &train))
        .collect::<purifier_core::Result<Vec<_>>>()?;
    let sub_mean = submodel_breakdowns.iter().map(|b| b.retained_anomalous as f64).sum::<f64>()
        / submodel_breakdowns.len() as f64;
    let by_label = |label: Label| -> Option<f64> {
        let d = s1.divergence.as_ref()?;
        let v: Vec<f64> = train
            .samples()
            .iter()
            .zip(d)
            .filter(|(s, _)| s.label == label)
            .map(|(_, &x)| x)
            .collect();
        mean(&v)
    };
    let labels = test.labels();
    let test_auroc = detection
        .as_ref()
        .map(|d| auroc(&labels, &d.result.test_scores))
        .transpose()?;
    let scorer = ctx.config.stage2_scorer();
    let raw = fit_samples(&scorer, train.samples())?.score_batch_with(&ctx.exec, test.samples())?;
    let metrics = MetricsArtifact {
        schema_version: SCHEMA_VERSION,
        command: "evaluate".into(),
        retained: pure.len(),
        contamination_rate: contamination_rate(&pure.retained_ids, &train)?,
        consensus_breakdown: purity_breakdown(pure, &train)?,
        submodel_breakdowns,
        submodel_mean_retained_anomalous: sub_mean,
        mean_divergence_normal: by_label(Label::Normal),
        mean_divergence_anomalous: by_label(Label::Anomalous),
        test_auroc,
        raw_baseline_auroc: auroc(&labels, &raw)?,
    };
    let path = ctx.path("metrics.json");
    write_json(&metrics, &path)?;
    Ok(vec![path])
}

pub fn cmd_ablate(ctx: &Context, emit_svg: bool) -> Result<Vec<PathBuf>> {
    let report = run_sweep(&ctx.exec, &ctx.config)?;
    let cells = report.cells();
    let csv_path = ctx.path("sweep.csv");
    std::fs::write(&csv_path, report.to_csv()).map_err(|e| HarnessError::io(&csv_path, e))?;
    let summary_path = ctx.path("summary.json");
    write_json(
        &SweepSummary {
            schema_version: SCHEMA_VERSION,
            command: "ablate".into(),
            config: ctx.config.clone(),
            rows: report.rows.len(),
            cells: cells.clone(),
        },
        &summary_path,
    )?;
    let mut paths = vec![csv_path, summary_path];
    if emit_svg {
        let mut alphas: Vec<f64> = cells.iter().map(|c| c.alpha).collect();
        alphas.dedup();
        for alpha in alphas {
            let group: Vec<_> = cells.iter().filter(|c| c.alpha == alpha).collect();
            let path = ctx.path(&format!("retained_alpha_{alpha}.svg"));
            std::fs::write(&path, svg::retained_counts_chart(alpha, &group)).map_err(|e| HarnessError::io(&path, e))?;
            paths.push(path);
        }
    }
    Ok(paths)
}
