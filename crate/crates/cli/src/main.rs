//! `hyperdoc`: ingest corpora and documents, build context models, rank
//! candidate hypernyms, evaluate rankings and scan for personal data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "hyperdoc", version, about = "Document-structure-aware hypernym discovery")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize a tagged corpus or structured documents.
    Ingest(IngestArgs),
    /// Build the context space and structure statistics.
    Build(BuildArgs),
    /// Rank hypernym candidates for each query.
    Rank(RankArgs),
    /// Score predictions against gold hypernyms.
    Eval(EvalArgs),
    /// Flag blocks that look like personal data.
    PiiScan(PiiArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// tagged | markdown | docjson
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Tagged corpus.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Markdown or Doc JSON files.
    #[arg(long, num_args = 1..)]
    pub docs: Vec<PathBuf>,
    /// One term per line.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Model directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Window context such as win5 or win5d.
    #[arg(long)]
    pub context: Option<String>,
    /// freq | pmi | ppmi
    #[arg(long)]
    pub weighting: Option<String>,
    #[arg(long)]
    pub min_length: Option<usize>,
    #[arg(long)]
    pub min_frequency: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Model directory written by `build`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub queries: Option<PathBuf>,
    /// Predictions file.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write scored candidates as JSON lines.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// clarkede | invcl | invcl-rev
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub topk: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub queries: Option<PathBuf>,
    #[arg(long)]
    pub gold: Option<PathBuf>,
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Cutoff for precision at k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Divide precision by k instead of min(k, |gold|).
    #[arg(long)]
    pub raw_precision: bool,
}

#[derive(Debug, Args)]
pub struct PiiArgs {
    #[arg(long, num_args = 1..)]
    pub docs: Vec<PathBuf>,
    /// JSON-lines report.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let jobs = cli.jobs.or(cfg.jobs);
    if jobs == Some(0) {
        return Err(error::CliError::BadValue {
            name: "--jobs",
            message: "must be at least 1".into(),
        }
        .into());
    }
    hyperdoc_core::par::install(jobs, || match &cli.command {
        Command::Ingest(a) => commands::ingest(a, &cfg),
        Command::Build(a) => commands::build(a, &cfg),
        Command::Rank(a) => commands::rank(a, &cfg),
        Command::Eval(a) => commands::eval(a, &cfg),
        Command::PiiScan(a) => commands::pii_scan(a, &cfg),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(error::exit_code(&err) as u8)
        }
    }
}
