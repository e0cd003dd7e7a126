//! Influence features and hypothesis testing.
//!
//! For each classified comment, ten features describe what happened in the
//! effect window after it was posted (process stimulation) and where it
//! sat in the issue's life cycle (resolution efficiency). Each feature is
//! then compared between comments of one leadership category and
//! non-leadership comments with the Mann-Whitney U test.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::stats::mann_whitney_u;
use super::AnalysisError;
use crate::pattern::LeadershipLabel;
use crate::time::Timestamp;

/// Default effect window: discussion in the 24 hours after a comment.
pub const DEFAULT_WINDOW_HOURS: f64 = 24.0;

/// One comment inside an issue thread, carrying its classified label and
/// the lemmas needed for word divergence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadComment {
    pub comment_id: String,
    pub author: String,
    pub created_at: Timestamp,
    pub label: LeadershipLabel,
    pub lemmas: Vec<String>,
}

/// A closed issue with its comments sorted by creation time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueThread {
    pub issue_number: u64,
    pub reporter: String,
    pub created_at: Timestamp,
    pub closed_at: Timestamp,
    pub comments: Vec<ThreadComment>,
}

/// The ten features of one comment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfluenceFeatures {
    /// Distinct window commenters who are neither the issue reporter nor
    /// this comment's author.
    pub other_commenter: u64,
    /// Comments in the window.
    pub comment_num: u64,
    /// Window comments by the issue reporter. When the comment author is
    /// the reporter, those responses count under `self_response` instead.
    pub reporter_response: u64,
    /// Window comments by this comment's author.
    pub self_response: u64,
    /// Window comments by anyone else.
    pub other_response: u64,
    /// Window comments carrying a leadership label.
    pub ld_num: u64,
    /// Distinct leadership labels in the window.
    pub ld_types: u64,
    /// Unique lemmas / total lemmas over window comments (0 when empty).
    pub word_divergence: f64,
    /// Hours from issue creation to this comment.
    pub time_from_start: f64,
    /// Hours from this comment to issue close.
    pub time_to_close: f64,
}

/// Feature names in presentation order, with their category.
pub const FEATURES: [(&str, &str); 10] = [
    ("other_commenter", "Process"),
    ("comment_num", "Process"),
    ("reporter_response", "Process"),
    ("self_response", "Process"),
    ("other_response", "Process"),
    ("ld_num", "Process"),
    ("ld_types", "Process"),
    ("word_divergence", "Process"),
    ("time_from_start", "Resolution"),
    ("time_to_close", "Resolution"),
];

impl InfluenceFeatures {
    pub fn get(&self, feature: &str) -> Option<f64> {
        Some(match feature {
            "other_commenter" => self.other_commenter as f64,
            "comment_num" => self.comment_num as f64,
            "reporter_response" => self.reporter_response as f64,
            "self_response" => self.self_response as f64,
            "other_response" => self.other_response as f64,
            "ld_num" => self.ld_num as f64,
            "ld_types" => self.ld_types as f64,
            "word_divergence" => self.word_divergence,
            "time_from_start" => self.time_from_start,
            "time_to_close" => self.time_to_close,
            _ => return None,
        })
    }
}

/// Computes the features of `thread.comments[index]` with a half-open
/// effect window `(t, t + window_hours]`.
pub fn influence_features(
    thread: &IssueThread,
    index: usize,
    window_hours: f64,
) -> Result<InfluenceFeatures, AnalysisError> {
    let target = &thread.comments[index];
    let time_from_start = thread.created_at.hours_until(target.created_at);
    if time_from_start < 0.0 {
        return Err(AnalysisError::CommentOutsideIssue {
            comment_id: target.comment_id.clone(),
        });
    }
    let time_to_close = target.created_at.hours_until(thread.closed_at);
    if time_to_close < 0.0 {
        return Err(AnalysisError::CommentOutsideIssue {
            comment_id: target.comment_id.clone(),
        });
    }

    let start = target.created_at.epoch_seconds();
    let end = start + (window_hours * 3600.0).round() as i64;
    let in_window = |c: &ThreadComment| {
        let t = c.created_at.epoch_seconds();
        t > start && t <= end
    };

    let mut features = InfluenceFeatures {
        other_commenter: 0,
        comment_num: 0,
        reporter_response: 0,
        self_response: 0,
        other_response: 0,
        ld_num: 0,
        ld_types: 0,
        word_divergence: 0.0,
        time_from_start,
        time_to_close,
    };
    let mut commenters: BTreeSet<&str> = BTreeSet::new();
    let mut ld_labels: BTreeSet<LeadershipLabel> = BTreeSet::new();
    let mut unique_lemmas: BTreeSet<&str> = BTreeSet::new();
    let mut total_lemmas = 0u64;

    for c in thread.comments.iter().filter(|c| in_window(c)) {
        features.comment_num += 1;
        // when the comment author is the reporter, their responses land in
        // self_response; reporter_response never double-counts them
        if c.author == target.author {
            features.self_response += 1;
        } else if c.author == thread.reporter {
            features.reporter_response += 1;
        } else {
            features.other_response += 1;
            commenters.insert(&c.author);
        }
        if c.label.is_leadership() {
            features.ld_num += 1;
            ld_labels.insert(c.label);
        }
        for lemma in &c.lemmas {
            unique_lemmas.insert(lemma);
            total_lemmas += 1;
        }
    }
    features.other_commenter = commenters.len() as u64;
    features.ld_types = ld_labels.len() as u64;
    if total_lemmas > 0 {
        features.word_divergence = unique_lemmas.len() as f64 / total_lemmas as f64;
    }
    Ok(features)
}

/// Extracts `(comment_id, label, features)` for every comment of every
/// thread.
pub fn extract_influence_samples(
    threads: &[IssueThread],
    window_hours: f64,
) -> Result<Vec<(String, LeadershipLabel, InfluenceFeatures)>, AnalysisError> {
    let mut out = Vec::new();
    for thread in threads {
        for index in 0..thread.comments.len() {
            let features = influence_features(thread, index, window_hours)?;
            let c = &thread.comments[index];
            out.push((c.comment_id.clone(), c.label, features));
        }
    }
    Ok(out)
}

/// Significance bands: `#` p >= 0.05, `*` p < 0.05, `**` p < 0.01,
/// `***` p < 0.001.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Significance {
    NotSignificant,
    P05,
    P01,
    P001,
}

impl Significance {
    pub fn from_p(p: f64) -> Significance {
        if p < 0.001 {
            Significance::P001
        } else if p < 0.01 {
            Significance::P01
        } else if p < 0.05 {
            Significance::P05
        } else {
            Significance::NotSignificant
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Significance::NotSignificant => "#",
            Significance::P05 => "*",
            Significance::P01 => "**",
            Significance::P001 => "***",
        }
    }
}

/// Sign of the mean difference (leadership sample minus `N` sample).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Plus => "(+)",
            Direction::Minus => "(-)",
        }
    }
}

/// One cell: feature x leadership category compared against `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCell {
    pub direction: Direction,
    pub significance: Significance,
    pub p_value: f64,
}

impl HypothesisCell {
    pub fn render(&self) -> String {
        if self.significance == Significance::NotSignificant {
            "#".to_string()
        } else {
            format!("{}{}", self.direction.symbol(), self.significance.symbol())
        }
    }
}

/// One feature row across LD1-LD6. `None` cells mark insufficient data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub feature: String,
    pub category: String,
    pub cells: BTreeMap<LeadershipLabel, Option<HypothesisCell>>,
}

/// Compares each feature's values between LDk comments and N comments
/// with a two-sided Mann-Whitney U test, for every leadership category.
pub fn hypothesis_table(samples: &[(LeadershipLabel, InfluenceFeatures)]) -> Vec<HypothesisRow> {
    let mut rows = Vec::with_capacity(FEATURES.len());
    for (feature, category) in FEATURES {
        let mut cells = BTreeMap::new();
        let baseline: Vec<f64> = samples
            .iter()
            .filter(|(l, _)| *l == LeadershipLabel::N)
            .filter_map(|(_, f)| f.get(feature))
            .collect();
        for label in LeadershipLabel::LEADERSHIP {
            let group: Vec<f64> = samples
                .iter()
                .filter(|(l, _)| *l == label)
                .filter_map(|(_, f)| f.get(feature))
                .collect();
            let cell = if group.is_empty() || baseline.is_empty() {
                None
            } else {
                let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
                let direction = if mean(&group) >= mean(&baseline) {
                    Direction::Plus
                } else {
                    Direction::Minus
                };
                let (_, p) = mann_whitney_u(&group, &baseline)
                    .expect("both samples are non-empty and finite");
                Some(HypothesisCell {
                    direction,
                    significance: Significance::from_p(p),
                    p_value: p,
                })
            };
            cells.insert(label, cell);
        }
        rows.push(HypothesisRow {
            feature: feature.to_string(),
            category: category.to_string(),
            cells,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(hours: f64) -> Timestamp {
        Timestamp::from_epoch_seconds((hours * 3600.0) as i64)
    }

    fn tc(
        id: &str,
        author: &str,
        hours: f64,
        label: LeadershipLabel,
        lemmas: &[&str],
    ) -> ThreadComment {
        ThreadComment {
            comment_id: id.into(),
            author: author.into(),
            created_at: ts(hours),
            label,
            lemmas: lemmas.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn thread(reporter: &str, closed_hours: f64, comments: Vec<ThreadComment>) -> IssueThread {
        IssueThread {
            issue_number: 1,
            reporter: reporter.into(),
            created_at: ts(0.0),
            closed_at: ts(closed_hours),
            comments,
        }
    }

    #[test]
    fn empty_window_is_all_zero() {
        let t = thread(
            "rep",
            100.0,
            vec![tc("c1", "dev", 1.0, LeadershipLabel::LD1, &["try", "this"])],
        );
        let f = influence_features(&t, 0, 24.0).unwrap();
        assert_eq!(f.comment_num, 0);
        assert_eq!(f.word_divergence, 0.0);
        assert_eq!(f.ld_types, 0);
        assert_eq!(f.time_from_start, 1.0);
        assert_eq!(f.time_to_close, 99.0);
    }

    #[test]
    fn word_divergence_ratio() {
        let t = thread(
            "rep",
            100.0,
            vec![
                tc("c1", "dev", 1.0, LeadershipLabel::LD1, &[]),
                tc(
                    "c2",
                    "rep",
                    2.0,
                    LeadershipLabel::N,
                    &["try", "try", "this"],
                ),
            ],
        );
        let f = influence_features(&t, 0, 24.0).unwrap();
        assert!((f.word_divergence - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn window_partition_three_authors() {
        let t = thread(
            "rep",
            100.0,
            vec![
                tc("c1", "dev", 1.0, LeadershipLabel::LD4, &[]),
                tc("c2", "rep", 2.0, LeadershipLabel::N, &[]),
                tc("c3", "dev", 3.0, LeadershipLabel::N, &[]),
                tc("c4", "third", 4.0, LeadershipLabel::LD1, &[]),
            ],
        );
        let f = influence_features(&t, 0, 24.0).unwrap();
        assert_eq!(f.comment_num, 3);
        assert_eq!(f.reporter_response, 1);
        assert_eq!(f.self_response, 1);
        assert_eq!(f.other_response, 1);
        assert_eq!(f.other_commenter, 1);
        assert_eq!(f.ld_num, 1);
        assert_eq!(f.ld_types, 1);
        assert_eq!(
            f.reporter_response + f.self_response + f.other_response,
            f.comment_num
        );
    }

    #[test]
    fn reporter_as_author_counts_self_once() {
        let t = thread(
            "rep",
            100.0,
            vec![
                tc("c1", "rep", 1.0, LeadershipLabel::LD4, &[]),
                tc("c2", "rep", 2.0, LeadershipLabel::N, &[]),
                tc("c3", "dev", 3.0, LeadershipLabel::N, &[]),
            ],
        );
        let f = influence_features(&t, 0, 24.0).unwrap();
        assert_eq!(f.self_response, 1);
        assert_eq!(f.reporter_response, 0);
        assert_eq!(f.other_response, 1);
        assert_eq!(
            f.reporter_response + f.self_response + f.other_response,
            f.comment_num
        );
    }

    #[test]
    fn window_is_half_open() {
        let t = thread(
            "rep",
            100.0,
            vec![
                tc("c1", "dev", 1.0, LeadershipLabel::LD1, &[]),
                tc("same_instant", "x", 1.0, LeadershipLabel::N, &[]),
                tc("at_edge", "y", 25.0, LeadershipLabel::N, &[]),
                tc("past_edge", "z", 25.5, LeadershipLabel::N, &[]),
            ],
        );
        let f = influence_features(&t, 0, 24.0).unwrap();
        // the triggering instant is excluded, the 24h edge included
        assert_eq!(f.comment_num, 1);
    }

    #[test]
    fn comment_after_close_is_an_error() {
        let t = thread(
            "rep",
            10.0,
            vec![tc("late", "dev", 11.0, LeadershipLabel::N, &[])],
        );
        assert!(matches!(
            influence_features(&t, 0, 24.0),
            Err(AnalysisError::CommentOutsideIssue { .. })
        ));
    }

    #[test]
    fn identical_distributions_are_ns() {
        let mut samples = Vec::new();
        for label in [LeadershipLabel::LD1, LeadershipLabel::N] {
            for i in 0..50u64 {
                samples.push((
                    label,
                    InfluenceFeatures {
                        other_commenter: i % 3,
                        comment_num: i % 5,
                        reporter_response: i % 2,
                        self_response: i % 2,
                        other_response: i % 3,
                        ld_num: i % 4,
                        ld_types: i % 3,
                        word_divergence: (i % 7) as f64 / 7.0,
                        time_from_start: (i % 11) as f64,
                        time_to_close: (i % 13) as f64,
                    },
                ));
            }
        }
        let table = hypothesis_table(&samples);
        for row in &table {
            let cell = row.cells[&LeadershipLabel::LD1].as_ref().unwrap();
            assert_eq!(
                cell.significance,
                Significance::NotSignificant,
                "{}",
                row.feature
            );
        }
    }

    #[test]
    fn missing_group_marks_insufficient_data() {
        let samples = vec![(
            LeadershipLabel::N,
            InfluenceFeatures {
                other_commenter: 0,
                comment_num: 0,
                reporter_response: 0,
                self_response: 0,
                other_response: 0,
                ld_num: 0,
                ld_types: 0,
                word_divergence: 0.0,
                time_from_start: 0.0,
                time_to_close: 1.0,
            },
        )];
        let table = hypothesis_table(&samples);
        assert!(table[0].cells[&LeadershipLabel::LD3].is_none());
    }

    #[test]
    fn significance_bands() {
        assert_eq!(Significance::from_p(0.05), Significance::NotSignificant);
        assert_eq!(Significance::from_p(0.049), Significance::P05);
        assert_eq!(Significance::from_p(0.009), Significance::P01);
        assert_eq!(Significance::from_p(0.0009), Significance::P001);
    }
}
