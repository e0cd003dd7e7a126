use std::path::PathBuf;

use clap::Args;
use emlead::preprocess::{
    export_pretagged, preprocess_with, PretaggedComment, StripOptions, Tagger,
};

use super::io::read_comments;

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    /// Comment records (comments.jsonl from the cache).
    #[arg(long)]
    pub comments: PathBuf,

    /// Annotated corpus output (line-delimited records; schema in
    /// docs/schemas.md).
    #[arg(long)]
    pub out: PathBuf,

    /// Keep fenced code blocks instead of stripping them.
    #[arg(long)]
    pub keep_fences: bool,
}

pub fn run(args: PreprocessArgs) -> anyhow::Result<()> {
    let comments = read_comments(&args.comments)?;
    let tagger = Tagger::builtin();
    let options = StripOptions {
        strip_fences: !args.keep_fences,
    };
    let annotated: Vec<PretaggedComment> = comments
        .iter()
        .map(|c| {
            let raw = c.to_raw();
            PretaggedComment {
                issue_id: raw.issue_id.clone(),
                author: raw.author.clone(),
                created_at: raw.created_at,
                comment: preprocess_with(&raw, &tagger, options),
            }
        })
        .collect();
    std::fs::write(&args.out, export_pretagged(&annotated))?;
    let sentences: usize = annotated.iter().map(|a| a.comment.sentences.len()).sum();
    println!(
        "annotated {} comments ({} sentences, lexicon {}) -> {}",
        annotated.len(),
        sentences,
        tagger.version(),
        args.out.display()
    );
    Ok(())
}
