//! Labeled-corpus management: joining ground-truth labels onto
//! preprocessed comments, per-project count tables, and seeded issue-level
//! sampling.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::LeadershipLabel;
use crate::preprocess::{AnnotatedComment, PretaggedComment};
use crate::records::CommentRecord;

/// A preprocessed comment with its consensus gold label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledComment {
    pub comment_id: String,
    pub project: String,
    pub gold: LeadershipLabel,
    pub annotated: AnnotatedComment,
}

/// Per-label counts in the shape of the subject-project overview:
/// LD1..LD6 and the leadership total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCountTable {
    pub project: String,
    pub counts: BTreeMap<LeadershipLabel, usize>,
    pub total_ld: usize,
    pub total: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("label row {row}: unknown comment id {comment_id:?}")]
    UnknownCommentId { row: usize, comment_id: String },
    #[error("label row {row}: invalid label {label:?}")]
    InvalidLabel { row: usize, label: String },
    #[error("label row {row}: duplicate entry for comment {comment_id:?}")]
    DuplicateRow { row: usize, comment_id: String },
    #[error("row {row}: expected {expected} comma-separated fields")]
    MalformedRow { row: usize, expected: usize },
    #[error("annotator id sets differ: {annotator:?} is missing comment {comment_id:?}")]
    MisalignedAnnotations {
        annotator: String,
        comment_id: String,
    },
    #[error("insufficient comments: need {target}, have {available}")]
    InsufficientComments { target: usize, available: usize },
}

fn csv_rows(text: &str, fields: usize, header: &str) -> Vec<(usize, Vec<String>)> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if idx == 0 && line.trim().eq_ignore_ascii_case(header) {
            continue;
        }
        let cols: Vec<String> = line
            .splitn(fields, ',')
            .map(|c| c.trim().to_string())
            .collect();
        rows.push((idx + 1, cols));
    }
    rows
}

/// Parses a label file: CSV rows `comment_id,label` (header optional).
pub fn parse_label_csv(text: &str) -> Result<Vec<(String, LeadershipLabel)>, CorpusError> {
    let mut out = Vec::new();
    for (row, cols) in csv_rows(text, 2, "comment_id,label") {
        if cols.len() != 2 {
            return Err(CorpusError::MalformedRow { row, expected: 2 });
        }
        let label = LeadershipLabel::parse(&cols[1]).ok_or_else(|| CorpusError::InvalidLabel {
            row,
            label: cols[1].clone(),
        })?;
        out.push((cols[0].clone(), label));
    }
    Ok(out)
}

/// Joins a label file onto a preprocessed corpus. Every row must name a
/// known comment exactly once; the join is order-insensitive and the
/// output follows corpus order.
pub fn import_labels(
    label_csv: &str,
    corpus: &[PretaggedComment],
    project: &str,
) -> Result<(Vec<LabeledComment>, LabelCountTable), CorpusError> {
    let rows = parse_label_csv(label_csv)?;
    let known: HashSet<&str> = corpus
        .iter()
        .map(|c| c.comment.comment_id.as_str())
        .collect();
    let mut by_id: HashMap<String, LeadershipLabel> = HashMap::new();
    for (idx, (comment_id, label)) in rows.iter().enumerate() {
        let row = idx + 1;
        if !known.contains(comment_id.as_str()) {
            return Err(CorpusError::UnknownCommentId {
                row,
                comment_id: comment_id.clone(),
            });
        }
        if by_id.insert(comment_id.clone(), *label).is_some() {
            return Err(CorpusError::DuplicateRow {
                row,
                comment_id: comment_id.clone(),
            });
        }
    }

    let mut labeled = Vec::new();
    let mut counts: BTreeMap<LeadershipLabel, usize> = LeadershipLabel::LEADERSHIP
        .into_iter()
        .map(|l| (l, 0))
        .collect();
    let mut total_ld = 0;
    for c in corpus {
        if let Some(&gold) = by_id.get(&c.comment.comment_id) {
            if gold.is_leadership() {
                *counts.get_mut(&gold).unwrap() += 1;
                total_ld += 1;
            }
            labeled.push(LabeledComment {
                comment_id: c.comment.comment_id.clone(),
                project: project.to_string(),
                gold,
                annotated: c.comment.clone(),
            });
        }
    }
    let table = LabelCountTable {
        project: project.to_string(),
        total_ld,
        total: labeled.len(),
        counts,
    };
    Ok((labeled, table))
}

/// Parses an annotator file (`comment_id,annotator,label`) and aligns all
/// annotators over the shared comment ids (sorted for determinism).
/// Returns `(annotator names, aligned label vectors)`.
pub fn parse_annotations(
    text: &str,
) -> Result<(Vec<String>, Vec<Vec<LeadershipLabel>>), CorpusError> {
    let mut per_annotator: BTreeMap<String, BTreeMap<String, LeadershipLabel>> = BTreeMap::new();
    for (row, cols) in csv_rows(text, 3, "comment_id,annotator,label") {
        if cols.len() != 3 {
            return Err(CorpusError::MalformedRow { row, expected: 3 });
        }
        let label = LeadershipLabel::parse(&cols[2]).ok_or_else(|| CorpusError::InvalidLabel {
            row,
            label: cols[2].clone(),
        })?;
        if per_annotator
            .entry(cols[1].clone())
            .or_default()
            .insert(cols[0].clone(), label)
            .is_some()
        {
            return Err(CorpusError::DuplicateRow {
                row,
                comment_id: cols[0].clone(),
            });
        }
    }
    let all_ids: std::collections::BTreeSet<String> = per_annotator
        .values()
        .flat_map(|m| m.keys().cloned())
        .collect();
    let mut names = Vec::new();
    let mut vectors = Vec::new();
    for (annotator, labels) in &per_annotator {
        let mut vector = Vec::with_capacity(all_ids.len());
        for id in &all_ids {
            match labels.get(id) {
                Some(&l) => vector.push(l),
                None => {
                    return Err(CorpusError::MisalignedAnnotations {
                        annotator: annotator.clone(),
                        comment_id: id.clone(),
                    })
                }
            }
        }
        names.push(annotator.clone());
        vectors.push(vector);
    }
    Ok((names, vectors))
}

/// Seeded issue-level sampling: whole issues are accumulated in shuffled
/// order until the comment count reaches `target`. An issue's comments are
/// never split.
pub fn sample_comments(
    comments: &[CommentRecord],
    target: usize,
    seed: u64,
) -> Result<Vec<CommentRecord>, CorpusError> {
    if comments.len() < target {
        return Err(CorpusError::InsufficientComments {
            target,
            available: comments.len(),
        });
    }
    let mut by_issue: BTreeMap<u64, Vec<&CommentRecord>> = BTreeMap::new();
    for c in comments {
        by_issue.entry(c.issue_number).or_default().push(c);
    }
    let mut issue_numbers: Vec<u64> = by_issue.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    issue_numbers.shuffle(&mut rng);

    let mut picked = Vec::new();
    for number in issue_numbers {
        if picked.len() >= target {
            break;
        }
        picked.extend(by_issue[&number].iter().map(|c| (*c).clone()));
    }
    picked.sort_by(|a, b| {
        (a.issue_number, a.created_at, a.comment_id.as_str()).cmp(&(
            b.issue_number,
            b.created_at,
            b.comment_id.as_str(),
        ))
    });
    Ok(picked)
}
