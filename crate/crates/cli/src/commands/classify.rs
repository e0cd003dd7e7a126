use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use emlead::analysis::label_distribution;
use emlead::matcher::Classifier;
use emlead::pattern::{load_dictionaries, load_pattern_file};
use emlead::preprocess::{import_pretagged, preprocess, AnnotatedComment, Tagger};
use emlead::report::distribution_csv;

use super::io::{read_comments, to_jsonl};
use crate::config::ConfigFile;
use crate::manifest::OutputDir;

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Pattern ranking list.
    #[arg(long)]
    pub patterns: Option<PathBuf>,

    /// Directory of dictionary .txt files.
    #[arg(long)]
    pub dicts: Option<PathBuf>,

    /// Input comments: raw records by default, annotated corpus with
    /// --pretagged.
    #[arg(long)]
    pub input: PathBuf,

    /// Input is an annotated corpus (skips the built-in tagger).
    #[arg(long)]
    pub pretagged: bool,

    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write per-comment match diagnostics (explain.jsonl).
    #[arg(long)]
    pub explain: bool,

    #[arg(long)]
    pub workers: Option<usize>,
}

pub fn run(args: ClassifyArgs, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    let patterns_path = config
        .path_or(args.patterns, "patterns_path")
        .context("--patterns (or patterns_path in the config) is required")?;
    let dicts_dir = config
        .path_or(args.dicts, "dicts_dir")
        .context("--dicts (or dicts_dir in the config) is required")?;
    let out_dir = config
        .path_or(args.out, "output_dir")
        .context("--out (or output_dir in the config) is required")?;
    let workers = config.parse_or(args.workers, "worker_count").unwrap_or(1);

    let dicts = load_dictionaries(&dicts_dir)?;
    let list = load_pattern_file(&patterns_path, &dicts)?;
    let clf = Classifier::new(&list, &dicts);

    let comments: Vec<AnnotatedComment> = if args.pretagged {
        import_pretagged(&args.input)?
            .into_iter()
            .map(|p| p.comment)
            .collect()
    } else {
        let tagger = Tagger::builtin();
        read_comments(&args.input)?
            .iter()
            .map(|c| preprocess(&c.to_raw(), &tagger))
            .collect()
    };

    let records = clf.classify_corpus(&comments, workers);
    let labels: Vec<_> = records.iter().map(|r| r.label).collect();
    let distribution = label_distribution(&labels)?;

    let mut out = OutputDir::create(&out_dir, "classify", seed)?;
    out.write("classified.jsonl", &to_jsonl(&records))?;
    out.write("distribution.csv", &distribution_csv(&distribution))?;
    if args.explain {
        let reports: Vec<_> = comments.iter().map(|c| clf.explain(c)).collect();
        out.write("explain.jsonl", &to_jsonl(&reports))?;
    }
    out.finish()?;

    let leadership: usize = records.iter().filter(|r| r.label.is_leadership()).count();
    println!(
        "classified {} comments with {} patterns: {} leadership ({:.1}%), {} N -> {}",
        records.len(),
        list.len(),
        leadership,
        100.0 * leadership as f64 / records.len().max(1) as f64,
        records.len() - leadership,
        out_dir.display()
    );
    Ok(())
}
