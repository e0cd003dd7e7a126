//! Line-delimited file IO shared by the commands.

use std::path::Path;

use anyhow::Context;
use emlead::corpus::LabeledComment;
use emlead::matcher::ClassifiedRecord;
use emlead::records::CommentRecord;

pub fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(line)
                .with_context(|| format!("{}:{}: malformed record", path.display(), idx + 1))?,
        );
    }
    Ok(out)
}

pub fn to_jsonl<T: serde::Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn read_comments(path: &Path) -> anyhow::Result<Vec<CommentRecord>> {
    read_jsonl(path)
}

pub fn read_classified(path: &Path) -> anyhow::Result<Vec<ClassifiedRecord>> {
    read_jsonl(path)
}

pub fn read_labeled_corpus(path: &Path) -> anyhow::Result<Vec<LabeledComment>> {
    read_jsonl(path)
}
