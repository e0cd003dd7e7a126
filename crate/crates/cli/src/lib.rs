//! Implementation of the `emlead` command-line tool. `main` is a thin
//! wrapper; everything lives here so integration tests can drive commands
//! directly.

mod commands;
mod config;
mod manifest;

pub use commands::analyze::AnalyzeCommand;
pub use config::ConfigFile;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

/// Classify OSS issue comments into emergent-leadership categories with a
/// ranked linguistic pattern list, consolidate pattern sets, and run the
/// downstream analyses.
#[derive(Debug, Parser)]
#[command(name = "emlead", version, max_term_width = 100)]
pub struct Cli {
    /// Flat key=value config file; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed recorded in output manifests and used wherever sampling needs
    /// randomness.
    #[arg(long, global = true, default_value_t = 17)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crawl a repository's closed issues, comments, commit counts and
    /// follower counts into a local cache.
    Ingest(commands::ingest::IngestArgs),
    /// Convert raw comment records into an annotated (tokenized, tagged,
    /// lemmatized) corpus file.
    Preprocess(commands::preprocess::PreprocessArgs),
    /// Labeled-corpus utilities: join gold labels, sample issues.
    #[command(subcommand)]
    Corpus(commands::corpus::CorpusCommand),
    /// Classify comments with a pattern list.
    Classify(commands::classify::ClassifyArgs),
    /// Merge new pattern sets into a ranking list (insert/reorder/prune)
    /// until the performance gain converges.
    Consolidate(commands::consolidate::ConsolidateArgs),
    /// Compare predicted labels against gold labels.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Inter-annotator agreement (pairwise Cohen's kappa).
    Kappa(commands::kappa::KappaArgs),
    /// Distribution, Pareto, correlation, influence and hypothesis
    /// analyses over classified corpora.
    #[command(subcommand)]
    Analyze(commands::analyze::AnalyzeCommand),
}

/// Error that should exit with code 2 (usage / configuration mistakes).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let config = config::ConfigFile::load(cli.config.as_deref())?;
    let seed = cli.seed;
    match cli.command {
        Command::Ingest(args) => commands::ingest::run(args, &config),
        Command::Preprocess(args) => commands::preprocess::run(args),
        Command::Corpus(command) => commands::corpus::run(command, seed),
        Command::Classify(args) => commands::classify::run(args, &config, seed),
        Command::Consolidate(args) => commands::consolidate::run(args, &config, seed),
        Command::Evaluate(args) => commands::evaluate::run(args, seed),
        Command::Kappa(args) => commands::kappa::run(args),
        Command::Analyze(command) => commands::analyze::run(command, &config, seed),
    }
}
