use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Subcommand};
use emlead::corpus::{import_labels, sample_comments};
use emlead::pattern::LeadershipLabel;
use emlead::preprocess::import_pretagged;

use super::io::{read_comments, to_jsonl};

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Join a gold-label CSV onto an annotated corpus, producing a labeled
    /// corpus file.
    Join(JoinArgs),
    /// Seeded issue-level sampling of comment records.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct JoinArgs {
    /// Annotated corpus (preprocess output).
    #[arg(long)]
    pub pretagged: PathBuf,

    /// CSV with comment_id,label rows.
    #[arg(long)]
    pub labels: PathBuf,

    /// Project identifier stored on every labeled comment.
    #[arg(long)]
    pub project: String,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Comment records to sample from.
    #[arg(long)]
    pub comments: PathBuf,

    /// Minimum number of comments to accumulate (whole issues at a time).
    #[arg(long)]
    pub target: usize,

    /// Seed override; defaults to the global --seed.
    #[arg(long)]
    pub sample_seed: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(command: CorpusCommand, seed: u64) -> anyhow::Result<()> {
    match command {
        CorpusCommand::Join(args) => {
            let corpus = import_pretagged(&args.pretagged)
                .with_context(|| format!("reading {}", args.pretagged.display()))?;
            let labels = std::fs::read_to_string(&args.labels)
                .with_context(|| format!("reading {}", args.labels.display()))?;
            let (labeled, table) = import_labels(&labels, &corpus, &args.project)?;
            std::fs::write(&args.out, to_jsonl(&labeled))?;
            let counts: Vec<String> = LeadershipLabel::LEADERSHIP
                .iter()
                .map(|l| format!("{l} {}", table.counts[l]))
                .collect();
            println!(
                "{}: {} labeled comments [{}] TotalLD {} -> {}",
                args.project,
                table.total,
                counts.join(", "),
                table.total_ld,
                args.out.display()
            );
            Ok(())
        }
        CorpusCommand::Sample(args) => {
            let comments = read_comments(&args.comments)?;
            let seed = args.sample_seed.unwrap_or(seed);
            let sampled = sample_comments(&comments, args.target, seed)?;
            std::fs::write(&args.out, to_jsonl(&sampled))?;
            println!(
                "sampled {} comments (target {target}, seed {seed}) -> {}",
                sampled.len(),
                args.out.display(),
                target = args.target,
            );
            Ok(())
        }
    }
}
