use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use purifier::commands::{cmd_ablate, cmd_detect, cmd_evaluate, cmd_generate, cmd_screen, CommonOptions, Context};
use purifier::exec::resolve_threads;
use purifier::HarnessError;

#[derive(Parser)]
#[command(name = "purifier", version, about = "Training-set purification and anomaly detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override for data generation, partitioning and sweeps
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 = automatic (falls back to PURIFIER_THREADS)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic train/test datasets as CSV
    Generate(Common),
    /// Run stage 1 and write the score matrix and purified set
    Screen(Common),
    /// Fit the final detector on the purified set and score the test set
    Detect {
        #[command(flatten)]
        common: Common,
        /// Reuse the purified set from a `screen` result instead of recomputing it
        #[arg(long)]
        stage1: Option<PathBuf>,
    },
    /// Compute purity and detection metrics from result files
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Stage-1 result (default: <out>/stage1.json)
        #[arg(long)]
        stage1: Option<PathBuf>,
        /// Detection result (default: <out>/detection.json, skipped if absent)
        #[arg(long)]
        detection: Option<PathBuf>,
    },
    /// Sweep noise ratio x subset count x seed
    Ablate {
        #[command(flatten)]
        common: Common,
        /// Also write SVG charts of retained counts per noise ratio
        #[arg(long)]
        emit_svg: bool,
    },
}

fn context(common: &Common) -> Result<Context, HarnessError> {
    Context::new(&CommonOptions {
        config: common.config.clone(),
        out: common.out.clone(),
        seed: common.seed,
        threads: resolve_threads(common.threads)?,
    })
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, HarnessError> {
    match cli.command {
        Command::Generate(c) => cmd_generate(&context(&c)?),
        Command::Screen(c) => cmd_screen(&context(&c)?),
        Command::Detect { common, stage1 } => cmd_detect(&context(&common)?, stage1.as_deref()),
        Command::Evaluate {
            common,
            stage1,
            detection,
        } => cmd_evaluate(&context(&common)?, stage1.as_deref(), detection.as_deref()),
        Command::Ablate { common, emit_svg } => cmd_ablate(&context(&common)?, emit_svg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let category = e.category();
            let report = serde_json::json!({
                "error": { "category": category.as_str(), "message": e.to_string() }
            });
            eprintln!("{report}");
            ExitCode::from(category.exit_code() as u8)
        }
    }
}
