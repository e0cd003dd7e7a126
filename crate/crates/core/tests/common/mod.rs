//! Shared generators and independent oracles for the acceptance suite.
//! The oracles re-implement matching and objective evaluation from the
//! constraint definitions, without touching the engine or its caches.

// each test target compiles its own copy and uses a different subset
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use emlead::consolidate::evaluate_list;
use emlead::corpus::LabeledComment;
use emlead::pattern::{
    Dictionary, DictionaryRegistry, LeadershipLabel, Pattern, PatternElement, PosTag,
    RankedPatternList,
};
use emlead::preprocess::{AnnotatedComment, AnnotatedToken};

pub const VOCAB: [&str; 14] = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi",
];
const POS_POOL: [PosTag; 5] = [
    PosTag::NOUN,
    PosTag::VERB,
    PosTag::AUX,
    PosTag::PRON,
    PosTag::ADV,
];

pub fn test_registry() -> DictionaryRegistry {
    let mut reg = DictionaryRegistry::new();
    reg.insert(Dictionary::new("greek_low", ["alpha", "beta", "gamma", "delta"]).unwrap())
        .unwrap();
    reg.insert(Dictionary::new("greek_high", ["mu", "nu", "xi", "kappa"]).unwrap())
        .unwrap();
    reg
}

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn token(&mut self, index: usize) -> AnnotatedToken {
        let lemma = VOCAB[self.rng.gen_range(0..VOCAB.len())].to_string();
        let is_url = self.rng.gen_bool(0.08);
        AnnotatedToken {
            surface: lemma.clone(),
            upos: if is_url {
                PosTag::X
            } else {
                POS_POOL[self.rng.gen_range(0..POS_POOL.len())]
            },
            lemma,
            is_url,
            index,
        }
    }

    pub fn sentence(&mut self, max_tokens: usize) -> Vec<AnnotatedToken> {
        let len = self.rng.gen_range(1..=max_tokens);
        (0..len).map(|i| self.token(i)).collect()
    }

    pub fn comment(
        &mut self,
        id: &str,
        max_sentences: usize,
        max_tokens: usize,
    ) -> AnnotatedComment {
        let n = self.rng.gen_range(1..=max_sentences);
        AnnotatedComment {
            comment_id: id.to_string(),
            sentences: (0..n).map(|_| self.sentence(max_tokens)).collect(),
        }
    }

    pub fn element(&mut self) -> PatternElement {
        match self.rng.gen_range(0..100) {
            0..=44 => PatternElement::Lemma(VOCAB[self.rng.gen_range(0..VOCAB.len())].into()),
            45..=74 => PatternElement::Pos(POS_POOL[self.rng.gen_range(0..POS_POOL.len())]),
            75..=89 => PatternElement::Dict(
                if self.rng.gen_bool(0.5) {
                    "greek_low"
                } else {
                    "greek_high"
                }
                .into(),
            ),
            _ => PatternElement::Url,
        }
    }

    pub fn pattern(&mut self, id: &str, max_elements: usize) -> Pattern {
        let label = LeadershipLabel::LEADERSHIP[self.rng.gen_range(0..6)];
        let n = self.rng.gen_range(1..=max_elements);
        Pattern::new(id, label, (0..n).map(|_| self.element()).collect()).unwrap()
    }

    pub fn gold_label(&mut self) -> LeadershipLabel {
        // N-heavy, like a real corpus
        if self.rng.gen_bool(0.4) {
            LeadershipLabel::N
        } else {
            LeadershipLabel::LEADERSHIP[self.rng.gen_range(0..6)]
        }
    }

    pub fn labeled_corpus(
        &mut self,
        size: usize,
        max_sentences: usize,
        max_tokens: usize,
    ) -> Vec<LabeledComment> {
        (0..size)
            .map(|i| {
                let id = format!("c{i}");
                LabeledComment {
                    comment_id: id.clone(),
                    project: "gen".into(),
                    gold: self.gold_label(),
                    annotated: self.comment(&id, max_sentences, max_tokens),
                }
            })
            .collect()
    }
}

/// Independent element semantics, straight from the definitions.
pub fn oracle_element_matches(
    elem: &PatternElement,
    tok: &AnnotatedToken,
    dicts: &DictionaryRegistry,
) -> bool {
    match elem {
        PatternElement::Lemma(w) => &tok.lemma == w,
        PatternElement::Pos(t) => tok.upos == *t,
        PatternElement::Dict(name) => match dicts.get(name) {
            Some(d) => d.contains(&tok.lemma),
            None => false,
        },
        PatternElement::Url => tok.is_url,
    }
}

/// Enumerates every assignment of pattern elements to strictly increasing
/// token indices with consecutive gaps of at most three.
pub fn oracle_assignments(
    pattern: &Pattern,
    sentence: &[AnnotatedToken],
    dicts: &DictionaryRegistry,
) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut partial = Vec::new();
    fn recurse(
        elements: &[PatternElement],
        sentence: &[AnnotatedToken],
        dicts: &DictionaryRegistry,
        partial: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if partial.len() == elements.len() {
            found.push(partial.clone());
            return;
        }
        let candidates: Vec<usize> = match partial.last() {
            None => (0..sentence.len()).collect(),
            Some(&prev) => ((prev + 1)..sentence.len().min(prev + 4)).collect(),
        };
        for pos in candidates {
            if oracle_element_matches(&elements[partial.len()], &sentence[pos], dicts) {
                partial.push(pos);
                recurse(elements, sentence, dicts, partial, found);
                partial.pop();
            }
        }
    }
    recurse(&pattern.elements, sentence, dicts, &mut partial, &mut found);
    found
}

pub fn oracle_matches_comment(
    pattern: &Pattern,
    comment: &AnnotatedComment,
    dicts: &DictionaryRegistry,
) -> bool {
    comment
        .sentences
        .iter()
        .any(|s| !oracle_assignments(pattern, s, dicts).is_empty())
}

/// First-match-wins reference: lowest-rank matching pattern decides.
pub fn oracle_classify(
    list: &RankedPatternList,
    comment: &AnnotatedComment,
    dicts: &DictionaryRegistry,
) -> (LeadershipLabel, Option<String>) {
    for pattern in list {
        if oracle_matches_comment(pattern, comment, dicts) {
            return (pattern.label, Some(pattern.id.clone()));
        }
    }
    (LeadershipLabel::N, None)
}

/// Objective via the public classification path: fresh matching for every
/// comment, no memoization.
pub fn oracle_objective(
    list: &RankedPatternList,
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
) -> f64 {
    evaluate_list(list, dicts, corpus).macro_f1
}
