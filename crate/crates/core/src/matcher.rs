//! Pattern matching and first-match-wins classification.
//!
//! A pattern matches a sentence when its elements can be assigned to
//! token positions `i1 < i2 < ... < ik` with every consecutive gap
//! `i(j+1) - i(j) <= 3`. The search is existential with backtracking: if
//! any valid assignment exists it is found, and the lexicographically
//! smallest index vector is returned. Classification walks the ranked
//! list in order and the first pattern that matches anywhere decides the
//! label; nothing matching means `N`.

use serde::{Deserialize, Serialize};

use crate::pattern::{
    DictionaryRegistry, LeadershipLabel, Pattern, PatternElement, RankedPatternList,
};
use crate::preprocess::{AnnotatedComment, AnnotatedToken};
use crate::util::indexed_parallel_map;

/// Maximum token-index difference between consecutively matched elements.
pub const MAX_ELEMENT_GAP: usize = 3;

/// A successful match: which pattern, where, and the matched token
/// positions (one per pattern element, strictly increasing, gaps <= 3).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub pattern_id: String,
    pub label: LeadershipLabel,
    pub sentence_index: usize,
    pub matched_token_indices: Vec<usize>,
}

/// Tests one pattern element against one token.
pub fn element_matches(
    elem: &PatternElement,
    token: &AnnotatedToken,
    dicts: &DictionaryRegistry,
) -> bool {
    match elem {
        PatternElement::Lemma(w) => token.lemma == *w,
        PatternElement::Pos(t) => token.upos == *t,
        PatternElement::Dict(name) => dicts.get(name).is_some_and(|d| d.contains(&token.lemma)),
        PatternElement::Url => token.is_url,
    }
}

// Depth-first search for the lexicographically smallest assignment of
// elements[depth..] to positions > prev (or any position when depth == 0).
fn search(
    elements: &[PatternElement],
    sentence: &[AnnotatedToken],
    dicts: &DictionaryRegistry,
    depth: usize,
    prev: Option<usize>,
    chosen: &mut Vec<usize>,
) -> bool {
    if depth == elements.len() {
        return true;
    }
    let (lo, hi) = match prev {
        Some(p) => (
            p + 1,
            (p + MAX_ELEMENT_GAP).min(sentence.len().saturating_sub(1)),
        ),
        None => (0, sentence.len().saturating_sub(1)),
    };
    if sentence.is_empty() || lo >= sentence.len() {
        return false;
    }
    for pos in lo..=hi {
        if element_matches(&elements[depth], &sentence[pos], dicts) {
            chosen.push(pos);
            if search(elements, sentence, dicts, depth + 1, Some(pos), chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Longest prefix of the pattern's elements for which a valid assignment
/// exists in this sentence; used by [`Classifier::explain`].
fn longest_matchable_prefix(
    elements: &[PatternElement],
    sentence: &[AnnotatedToken],
    dicts: &DictionaryRegistry,
) -> usize {
    for len in (1..=elements.len()).rev() {
        let mut chosen = Vec::with_capacity(len);
        if search(&elements[..len], sentence, dicts, 0, None, &mut chosen) {
            return len;
        }
    }
    0
}

/// Matches a single pattern against a single sentence.
pub fn match_in_sentence(
    pattern: &Pattern,
    sentence: &[AnnotatedToken],
    sentence_index: usize,
    dicts: &DictionaryRegistry,
) -> Option<MatchResult> {
    let mut chosen = Vec::with_capacity(pattern.elements.len());
    if search(&pattern.elements, sentence, dicts, 0, None, &mut chosen) {
        Some(MatchResult {
            pattern_id: pattern.id.clone(),
            label: pattern.label,
            sentence_index,
            matched_token_indices: chosen,
        })
    } else {
        None
    }
}

/// Per-pattern outcome reported by [`Classifier::explain`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDiagnosis {
    pub pattern_id: String,
    pub label: LeadershipLabel,
    pub matched: Option<MatchResult>,
    /// For a non-matching pattern: index of the first element that cannot
    /// be extended into a valid assignment in any sentence.
    pub first_unmatchable_element: Option<usize>,
}

/// Full diagnostic record for one comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub comment_id: String,
    pub label: LeadershipLabel,
    pub winner: Option<MatchResult>,
    pub patterns: Vec<PatternDiagnosis>,
}

/// One line of classification output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedRecord {
    pub comment_id: String,
    pub label: LeadershipLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_indices: Option<Vec<usize>>,
}

impl ClassifiedRecord {
    pub fn from_outcome(comment_id: &str, label: LeadershipLabel, m: Option<MatchResult>) -> Self {
        ClassifiedRecord {
            comment_id: comment_id.to_string(),
            label,
            pattern_id: m.as_ref().map(|m| m.pattern_id.clone()),
            sentence_index: m.as_ref().map(|m| m.sentence_index),
            token_indices: m.map(|m| m.matched_token_indices),
        }
    }
}

/// A ranked pattern list plus its dictionaries; pure and shareable.
#[derive(Debug, Clone, Copy)]
pub struct Classifier<'a> {
    list: &'a RankedPatternList,
    dicts: &'a DictionaryRegistry,
}

impl<'a> Classifier<'a> {
    pub fn new(list: &'a RankedPatternList, dicts: &'a DictionaryRegistry) -> Classifier<'a> {
        Classifier { list, dicts }
    }

    pub fn list(&self) -> &RankedPatternList {
        self.list
    }

    /// First valid match of one pattern over the comment's sentences, in
    /// reading order.
    pub fn match_comment(
        &self,
        pattern: &Pattern,
        comment: &AnnotatedComment,
    ) -> Option<MatchResult> {
        comment
            .sentences
            .iter()
            .enumerate()
            .find_map(|(idx, sentence)| match_in_sentence(pattern, sentence, idx, self.dicts))
    }

    /// Highest-priority strategy: patterns are tried in rank order and the
    /// first match decides. Returns `(N, None)` when nothing matches.
    pub fn classify(&self, comment: &AnnotatedComment) -> (LeadershipLabel, Option<MatchResult>) {
        for pattern in self.list {
            if let Some(m) = self.match_comment(pattern, comment) {
                return (pattern.label, Some(m));
            }
        }
        (LeadershipLabel::N, None)
    }

    /// Reports, for every pattern, whether it matched and where, plus the
    /// first unmatchable element index for the ones that did not.
    pub fn explain(&self, comment: &AnnotatedComment) -> ExplainReport {
        let mut winner: Option<MatchResult> = None;
        let mut patterns = Vec::with_capacity(self.list.len());
        for pattern in self.list {
            let matched = self.match_comment(pattern, comment);
            if winner.is_none() {
                winner = matched.clone();
            }
            let first_unmatchable_element = if matched.is_some() {
                None
            } else {
                let best_prefix = comment
                    .sentences
                    .iter()
                    .map(|s| longest_matchable_prefix(&pattern.elements, s, self.dicts))
                    .max()
                    .unwrap_or(0);
                Some(best_prefix)
            };
            patterns.push(PatternDiagnosis {
                pattern_id: pattern.id.clone(),
                label: pattern.label,
                matched,
                first_unmatchable_element,
            });
        }
        ExplainReport {
            comment_id: comment.comment_id.clone(),
            label: winner.as_ref().map_or(LeadershipLabel::N, |m| m.label),
            winner,
            patterns,
        }
    }

    /// Classifies a whole corpus. Output order equals input order for any
    /// worker count.
    pub fn classify_corpus(
        &self,
        comments: &[AnnotatedComment],
        workers: usize,
    ) -> Vec<ClassifiedRecord> {
        indexed_parallel_map(comments.len(), workers, |i| {
            let (label, m) = self.classify(&comments[i]);
            ClassifiedRecord::from_outcome(&comments[i].comment_id, label, m)
        })
    }
}
