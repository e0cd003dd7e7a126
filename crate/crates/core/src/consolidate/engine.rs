//! Memoized objective evaluation.
//!
//! Whether a pattern matches a comment does not depend on rank, so match
//! results are computed once per (pattern, comment) pair and every list
//! permutation is evaluated by re-ranking cached matches. Insert probing
//! additionally walks candidate positions from the bottom of the list
//! upward, flipping one comment at a time in the confusion matrix, so one
//! probe sweep over all positions costs one corpus scan. The resulting
//! confusion counts are integer-exact, hence objectives are bit-identical
//! to a from-scratch evaluation.

use std::collections::{HashMap, HashSet};

use crate::corpus::LabeledComment;
use crate::matcher::match_in_sentence;
use crate::metrics::macro_f1_from_confusion;
use crate::pattern::{DictionaryRegistry, LeadershipLabel, Pattern};

/// Interned pattern handle.
pub(crate) type Key = u32;

pub(crate) struct Engine<'a> {
    dicts: &'a DictionaryRegistry,
    corpus: &'a [LabeledComment],
    gold: Vec<LeadershipLabel>,
    patterns: Vec<Pattern>,
    key_of: HashMap<String, Key>,
    /// Per comment: the set of pattern keys that match it.
    matching: Vec<HashSet<Key>>,
}

impl<'a> Engine<'a> {
    pub fn new(dicts: &'a DictionaryRegistry, corpus: &'a [LabeledComment]) -> Engine<'a> {
        Engine {
            dicts,
            corpus,
            gold: corpus.iter().map(|c| c.gold).collect(),
            patterns: Vec::new(),
            key_of: HashMap::new(),
            matching: vec![HashSet::new(); corpus.len()],
        }
    }

    pub fn corpus(&self) -> &[LabeledComment] {
        self.corpus
    }

    pub fn pattern(&self, key: Key) -> &Pattern {
        &self.patterns[key as usize]
    }

    pub fn label(&self, key: Key) -> LeadershipLabel {
        self.patterns[key as usize].label
    }

    pub fn gold(&self, comment_idx: usize) -> LeadershipLabel {
        self.gold[comment_idx]
    }

    /// Interns a pattern and memoizes its matches over the corpus.
    /// Returns `None` when the id is already taken by a different pattern.
    pub fn intern(&mut self, pattern: &Pattern) -> Option<Key> {
        if let Some(&key) = self.key_of.get(&pattern.id) {
            return if self.patterns[key as usize] == *pattern {
                Some(key)
            } else {
                None
            };
        }
        let key = self.patterns.len() as Key;
        for (idx, comment) in self.corpus.iter().enumerate() {
            let hit = comment
                .annotated
                .sentences
                .iter()
                .enumerate()
                .any(|(si, s)| match_in_sentence(pattern, s, si, self.dicts).is_some());
            if hit {
                self.matching[idx].insert(key);
            }
        }
        self.patterns.push(pattern.clone());
        self.key_of.insert(pattern.id.clone(), key);
        Some(key)
    }

    pub fn matches(&self, comment_idx: usize, key: Key) -> bool {
        self.matching[comment_idx].contains(&key)
    }

    /// Rank of the first matching pattern in `order`, if any.
    pub fn winner_rank(&self, order: &[Key], comment_idx: usize) -> Option<usize> {
        let set = &self.matching[comment_idx];
        order.iter().position(|k| set.contains(k))
    }

    pub fn predict(&self, order: &[Key], comment_idx: usize) -> LeadershipLabel {
        self.winner_rank(order, comment_idx)
            .map_or(LeadershipLabel::N, |r| self.label(order[r]))
    }

    pub fn confusion(&self, order: &[Key]) -> [[u64; 7]; 7] {
        let mut counts = [[0u64; 7]; 7];
        for idx in 0..self.corpus.len() {
            let pred = self.predict(order, idx);
            counts[self.gold[idx].index()][pred.index()] += 1;
        }
        counts
    }

    /// The consolidation objective: macro-F1 over LD1-LD6.
    pub fn objective(&self, order: &[Key]) -> f64 {
        macro_f1_from_confusion(&self.confusion(order))
    }

    /// Objective at every insertion position `0..=order.len()` for a
    /// candidate pattern, via incremental confusion updates. Equivalent to
    /// evaluating `order` with the candidate inserted at each position.
    pub fn probe_insert_positions(&self, order: &[Key], candidate: Key) -> Vec<f64> {
        let n = order.len();
        let candidate_label = self.label(candidate);

        // base predictions and winner ranks under the unmodified order
        let mut flips: Vec<(usize, LeadershipLabel, LeadershipLabel)> = Vec::new();
        let mut confusion = [[0u64; 7]; 7];
        for idx in 0..self.corpus.len() {
            let rank = self.winner_rank(order, idx);
            let pred = rank.map_or(LeadershipLabel::N, |r| self.label(order[r]));
            confusion[self.gold[idx].index()][pred.index()] += 1;
            if self.matches(idx, candidate) {
                // inserting at any position k <= rank makes the candidate win
                flips.push((rank.unwrap_or(usize::MAX), self.gold[idx], pred));
            }
        }
        // sweep k from n down to 0; at position k every comment whose
        // winner rank is >= k has flipped to the candidate
        flips.sort_by_key(|f| std::cmp::Reverse(f.0));
        let mut objectives = vec![0.0; n + 1];
        let mut cursor = 0;
        for (k, slot) in objectives.iter_mut().enumerate().rev() {
            while cursor < flips.len() && flips[cursor].0 >= k {
                let (_, gold, old_pred) = flips[cursor];
                confusion[gold.index()][old_pred.index()] -= 1;
                confusion[gold.index()][candidate_label.index()] += 1;
                cursor += 1;
            }
            *slot = macro_f1_from_confusion(&confusion);
        }
        objectives
    }

    /// Realwinner and fakewinners of one comment under `order` (ranks, in
    /// rank order). The realwinner is the highest-ranked matching pattern
    /// carrying the gold label; fakewinners are the wrongly-labeling
    /// matching patterns ranked above it (all of them when there is no
    /// realwinner, e.g. for gold `N`).
    pub fn winner_analysis(
        &self,
        order: &[Key],
        comment_idx: usize,
    ) -> (Option<usize>, Vec<usize>) {
        let gold = self.gold[comment_idx];
        let set = &self.matching[comment_idx];
        let mut realwinner = None;
        let mut fakewinners = Vec::new();
        for (rank, key) in order.iter().enumerate() {
            if !set.contains(key) {
                continue;
            }
            if self.label(*key) == gold {
                realwinner = Some(rank);
                break;
            }
            fakewinners.push(rank);
        }
        (realwinner, fakewinners)
    }
}
