//! Command-line frontend: ingest → resolve → analyze → report, plus the
//! synthetic corpus generator. One JSON summary object per command on
//! standard output; diagnostics on standard error. Exit codes: 0 success,
//! 1 validation/configuration error, 2 I/O or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use citeflow::pipeline::{self, RunConfig};
use citeflow::AppError;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "citeflow", version, about = "Citation knowledge-flow analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonOpts {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory holding registry/venues/publications/citations inputs
    /// (.csv or .jsonl).
    #[arg(long, value_name = "DIR")]
    input: Option<PathBuf>,
    /// Output directory for all artifacts.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Analysis cohort year.
    #[arg(long)]
    cohort_year: Option<i32>,
    /// Last citing year considered.
    #[arg(long)]
    horizon_year: Option<i32>,
    /// Seed for deterministic tie-breaking.
    #[arg(long)]
    seed: Option<u64>,
    /// Citation window (a year count or "full"); repeatable.
    #[arg(long = "window", value_name = "W")]
    windows: Vec<String>,
    /// Report format, "csv" or "json"; repeatable.
    #[arg(long = "format", value_name = "FMT")]
    formats: Vec<String>,
    /// Worker threads; 0 means one per core.
    #[arg(long)]
    threads: Option<usize>,
    /// Treat the registry as the full reference schema.
    #[arg(long)]
    reference_schema: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Read and validate a corpus, write the graph cache.
    Ingest(CommonOpts),
    /// Assign every publication one subject category.
    Resolve(CommonOpts),
    /// Compute per-publication flow profiles and normalized impacts.
    Analyze(CommonOpts),
    /// Write summary tables, figure series and the combined JSON report.
    Report(CommonOpts),
    /// Generate a synthetic corpus with planted ground truth.
    Synth {
        /// TOML generator configuration; defaults apply when omitted.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Output directory for the corpus files and truth.csv.
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
        /// Overrides the seed from the configuration file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run ingest, resolve, analyze and report in sequence.
    Pipeline(CommonOpts),
}

fn resolve_config(opts: &CommonOpts) -> Result<RunConfig, AppError> {
    let mut cfg = match &opts.config {
        Some(path) => RunConfig::from_toml(path)?,
        None => RunConfig::default(),
    };
    if let Some(input) = &opts.input {
        cfg.input = Some(input.clone());
    }
    if let Some(out) = &opts.out {
        cfg.out = out.clone();
    }
    if let Some(y) = opts.cohort_year {
        cfg.cohort_year = y;
    }
    if let Some(y) = opts.horizon_year {
        cfg.horizon_year = y;
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if !opts.windows.is_empty() {
        cfg.windows = opts.windows.clone();
    }
    if !opts.formats.is_empty() {
        cfg.formats = opts.formats.clone();
    }
    if let Some(threads) = opts.threads {
        cfg.threads = threads;
    }
    if opts.reference_schema {
        cfg.reference_schema = true;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<serde_json::Value, AppError> {
    match &cli.command {
        Command::Ingest(opts) => pipeline::cmd_ingest(&resolve_config(opts)?),
        Command::Resolve(opts) => pipeline::cmd_resolve(&resolve_config(opts)?),
        Command::Analyze(opts) => pipeline::cmd_analyze(&resolve_config(opts)?),
        Command::Report(opts) => pipeline::cmd_report(&resolve_config(opts)?),
        Command::Synth { config, out, seed } => {
            pipeline::cmd_synth(config.as_deref(), *seed, out)
        }
        Command::Pipeline(opts) => pipeline::cmd_pipeline(&resolve_config(opts)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
