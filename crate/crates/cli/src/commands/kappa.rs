use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use emlead::corpus::parse_annotations;
use emlead::metrics::{average_pairwise_kappa, cohen_kappa};

#[derive(Debug, Args)]
pub struct KappaArgs {
    /// CSV with comment_id,annotator,label rows.
    #[arg(long)]
    pub annotations: PathBuf,
}

pub fn run(args: KappaArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.annotations)
        .with_context(|| format!("reading {}", args.annotations.display()))?;
    let (names, vectors) = parse_annotations(&text)?;
    anyhow::ensure!(names.len() >= 2, "need at least two annotators");

    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let kappa = cohen_kappa(&vectors[i], &vectors[j])?;
            println!("{} vs {}: kappa {:.4}", names[i], names[j], kappa);
        }
    }
    let average = average_pairwise_kappa(&vectors)?;
    println!(
        "average pairwise kappa over {} annotators, {} comments: {:.4}",
        names.len(),
        vectors[0].len(),
        average
    );
    Ok(())
}
