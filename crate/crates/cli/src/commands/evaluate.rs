use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use emlead::corpus::parse_label_csv;
use emlead::metrics::evaluate;
use emlead::pattern::LeadershipLabel;

use super::io::read_classified;
use crate::manifest::OutputDir;

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Predicted labels: classified.jsonl from `classify`.
    #[arg(long)]
    pub pred: PathBuf,

    /// Gold labels: CSV with comment_id,label rows.
    #[arg(long)]
    pub gold: PathBuf,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: EvaluateArgs, seed: u64) -> anyhow::Result<()> {
    let predictions = read_classified(&args.pred)?;
    let by_id: HashMap<&str, LeadershipLabel> = predictions
        .iter()
        .map(|r| (r.comment_id.as_str(), r.label))
        .collect();
    let gold_text = std::fs::read_to_string(&args.gold)
        .with_context(|| format!("reading {}", args.gold.display()))?;
    let gold_rows = parse_label_csv(&gold_text)?;

    let mut predicted = Vec::with_capacity(gold_rows.len());
    let mut gold = Vec::with_capacity(gold_rows.len());
    for (comment_id, label) in &gold_rows {
        let pred = by_id
            .get(comment_id.as_str())
            .with_context(|| format!("no prediction for comment {comment_id:?}"))?;
        predicted.push(*pred);
        gold.push(*label);
    }
    let report = evaluate(&predicted, &gold)?;

    print!("{}", report.render_table());
    if let Some(out_dir) = args.out {
        let mut out = OutputDir::create(&out_dir, "evaluate", seed)?;
        out.write("report.json", &serde_json::to_string_pretty(&report)?)?;
        out.write("report.txt", &report.render_table())?;
        out.finish()?;
        println!("wrote {}", out_dir.display());
    }
    Ok(())
}
