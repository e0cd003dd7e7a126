//! Empirical analyses over classified corpora: label distribution,
//! developer Pareto curves, correlation with traditional indicators, and
//! influence features with hypothesis tests.

mod influence;
mod stats;
pub mod svg;

pub use influence::{
    extract_influence_samples, hypothesis_table, influence_features, Direction, HypothesisCell,
    HypothesisRow, InfluenceFeatures, IssueThread, Significance, ThreadComment,
    DEFAULT_WINDOW_HOURS, FEATURES,
};
pub use stats::{average_ranks, mann_whitney_u, normal_cdf, pearson, spearman};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcher::ClassifiedRecord;
use crate::pattern::LeadershipLabel;
use crate::records::CommentRecord;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("empty input")]
    Empty,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {need} points, have {have}")]
    TooFewPoints { need: usize, have: usize },
    #[error("constant input: correlation undefined")]
    ConstantInput,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("comment {comment_id:?} lies outside its issue's life cycle")]
    CommentOutsideIssue { comment_id: String },
}

/// Fraction of comments per label, over all seven labels. Sums to 1.
pub fn label_distribution(
    labels: &[LeadershipLabel],
) -> Result<BTreeMap<LeadershipLabel, f64>, AnalysisError> {
    if labels.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let n = labels.len() as f64;
    let mut out: BTreeMap<LeadershipLabel, f64> =
        LeadershipLabel::ALL.into_iter().map(|l| (l, 0.0)).collect();
    for l in labels {
        *out.get_mut(l).unwrap() += 1.0;
    }
    for v in out.values_mut() {
        *v /= n;
    }
    Ok(out)
}

/// Cumulative developer/leadership fractions: developers sorted by count
/// descending (ties broken by login), one point per developer, ending at
/// (1, 1). With an all-zero total the leadership fraction is pinned to 0
/// everywhere except the final point, which stays (1, 1) by convention.
pub fn pareto_curve(counts: &[(String, u64)]) -> Result<Vec<(f64, f64)>, AnalysisError> {
    if counts.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let mut sorted: Vec<&(String, u64)> = counts.iter().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total: u64 = sorted.iter().map(|(_, c)| *c).sum();
    let n = sorted.len() as f64;
    let mut points = Vec::with_capacity(sorted.len());
    let mut cumulative = 0u64;
    for (i, (_, count)) in sorted.iter().enumerate() {
        cumulative += count;
        let dev_fraction = (i + 1) as f64 / n;
        let leadership_fraction = if total == 0 {
            if i + 1 == sorted.len() {
                1.0
            } else {
                0.0
            }
        } else {
            cumulative as f64 / total as f64
        };
        points.push((dev_fraction, leadership_fraction));
    }
    Ok(points)
}

/// Per-developer label counts aggregated from classified comments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeveloperLabelCounts {
    pub login: String,
    /// Counts indexed per [`LeadershipLabel::index`].
    pub per_label: [u64; 7],
    pub total_comments: u64,
    pub leadership_count: u64,
}

impl DeveloperLabelCounts {
    pub fn leadership_pct(&self) -> f64 {
        if self.total_comments == 0 {
            0.0
        } else {
            self.leadership_count as f64 / self.total_comments as f64
        }
    }
}

/// Joins classification output with comment authorship. Classified records
/// without a matching comment are ignored.
pub fn per_developer_counts(
    classified: &[ClassifiedRecord],
    comments: &[CommentRecord],
) -> BTreeMap<String, DeveloperLabelCounts> {
    let author_of: BTreeMap<&str, &str> = comments
        .iter()
        .map(|c| (c.comment_id.as_str(), c.author.as_str()))
        .collect();
    let mut out: BTreeMap<String, DeveloperLabelCounts> = BTreeMap::new();
    for record in classified {
        let Some(author) = author_of.get(record.comment_id.as_str()) else {
            continue;
        };
        let entry = out
            .entry(author.to_string())
            .or_insert_with(|| DeveloperLabelCounts {
                login: author.to_string(),
                ..DeveloperLabelCounts::default()
            });
        entry.per_label[record.label.index()] += 1;
        entry.total_comments += 1;
        if record.label.is_leadership() {
            entry.leadership_count += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use LeadershipLabel::*;

    #[test]
    fn distribution_all_n() {
        let d = label_distribution(&[N, N, N]).unwrap();
        assert_eq!(d[&N], 1.0);
        assert_eq!(d[&LD1], 0.0);
    }

    #[test]
    fn distribution_arithmetic() {
        let d = label_distribution(&[LD1, LD1, LD4, N]).unwrap();
        assert_eq!(d[&LD1], 0.5);
        assert_eq!(d[&LD4], 0.25);
        assert_eq!(d[&N], 0.25);
        let sum: f64 = d.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_empty_is_an_error() {
        assert_eq!(label_distribution(&[]), Err(AnalysisError::Empty));
    }

    #[test]
    fn pareto_three_developers() {
        let counts = vec![
            ("a".to_string(), 8u64),
            ("b".to_string(), 1),
            ("c".to_string(), 1),
        ];
        let curve = pareto_curve(&counts).unwrap();
        let expect = [(1.0 / 3.0, 0.8), (2.0 / 3.0, 0.9), (1.0, 1.0)];
        for ((x, y), (ex, ey)) in curve.iter().zip(expect) {
            assert!((x - ex).abs() < 1e-12);
            assert!((y - ey).abs() < 1e-12);
        }
    }

    #[test]
    fn pareto_single_developer() {
        let curve = pareto_curve(&[("solo".to_string(), 5)]).unwrap();
        assert_eq!(curve, vec![(1.0, 1.0)]);
    }

    #[test]
    fn pareto_is_monotone_and_ends_at_one() {
        let counts: Vec<(String, u64)> = (0..20)
            .map(|i| (format!("d{i}"), (i * 7 % 13) as u64))
            .collect();
        let curve = pareto_curve(&counts).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].0 >= w[0].0);
            assert!(w[1].1 >= w[0].1 - 1e-12);
        }
        let (x, y) = *curve.last().unwrap();
        assert!((x - 1.0).abs() < 1e-12);
        assert!((y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pareto_all_zero_convention() {
        let counts = vec![("a".to_string(), 0u64), ("b".to_string(), 0)];
        let curve = pareto_curve(&counts).unwrap();
        assert_eq!(curve, vec![(0.5, 0.0), (1.0, 1.0)]);
    }
}
