//! Linguistic patterns and the ranked pattern list.
//!
//! A pattern is an ordered sequence of match elements labeled with one of
//! the six leadership behavior categories. The ranked list of patterns is
//! the classifier itself: rank encodes match priority under
//! first-match-wins classification.

mod dict;
mod parse;

pub use dict::{load_dictionaries, Dictionary, DictionaryRegistry};
pub use parse::{load_pattern_file, parse_pattern_line, parse_pattern_list};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Leadership behavior categories, plus `N` for comments without any
/// leadership behavior. `N` is a classification outcome only; patterns
/// themselves are always labeled LD1-LD6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LeadershipLabel {
    /// Proposal: propose a solution or alternative.
    LD1,
    /// Redirection: guide to other topics or places to discuss.
    LD2,
    /// Confirmation: confirm an issue or opinion.
    LD3,
    /// Inquiry: ask for more information.
    LD4,
    /// Operation: suggest to close or reopen the issue report.
    LD5,
    /// Volunteer: voluntary acceptance of a task.
    LD6,
    /// No leadership behavior.
    N,
}

impl LeadershipLabel {
    /// All seven values, leadership categories first.
    pub const ALL: [LeadershipLabel; 7] = [
        LeadershipLabel::LD1,
        LeadershipLabel::LD2,
        LeadershipLabel::LD3,
        LeadershipLabel::LD4,
        LeadershipLabel::LD5,
        LeadershipLabel::LD6,
        LeadershipLabel::N,
    ];

    /// The six leadership categories (everything except `N`).
    pub const LEADERSHIP: [LeadershipLabel; 6] = [
        LeadershipLabel::LD1,
        LeadershipLabel::LD2,
        LeadershipLabel::LD3,
        LeadershipLabel::LD4,
        LeadershipLabel::LD5,
        LeadershipLabel::LD6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LeadershipLabel::LD1 => "LD1",
            LeadershipLabel::LD2 => "LD2",
            LeadershipLabel::LD3 => "LD3",
            LeadershipLabel::LD4 => "LD4",
            LeadershipLabel::LD5 => "LD5",
            LeadershipLabel::LD6 => "LD6",
            LeadershipLabel::N => "N",
        }
    }

    pub fn parse(s: &str) -> Option<LeadershipLabel> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }

    pub fn is_leadership(self) -> bool {
        self != LeadershipLabel::N
    }

    /// Dense index: LD1..LD6 map to 0..5, N to 6.
    pub fn index(self) -> usize {
        match self {
            LeadershipLabel::LD1 => 0,
            LeadershipLabel::LD2 => 1,
            LeadershipLabel::LD3 => 2,
            LeadershipLabel::LD4 => 3,
            LeadershipLabel::LD5 => 4,
            LeadershipLabel::LD6 => 5,
            LeadershipLabel::N => 6,
        }
    }
}

impl fmt::Display for LeadershipLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The 17 Universal POS tags. The set is closed; parsing any other tag
/// name is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum PosTag {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 17] = [
        PosTag::ADJ,
        PosTag::ADP,
        PosTag::ADV,
        PosTag::AUX,
        PosTag::CCONJ,
        PosTag::DET,
        PosTag::INTJ,
        PosTag::NOUN,
        PosTag::NUM,
        PosTag::PART,
        PosTag::PRON,
        PosTag::PROPN,
        PosTag::PUNCT,
        PosTag::SCONJ,
        PosTag::SYM,
        PosTag::VERB,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::ADJ => "ADJ",
            PosTag::ADP => "ADP",
            PosTag::ADV => "ADV",
            PosTag::AUX => "AUX",
            PosTag::CCONJ => "CCONJ",
            PosTag::DET => "DET",
            PosTag::INTJ => "INTJ",
            PosTag::NOUN => "NOUN",
            PosTag::NUM => "NUM",
            PosTag::PART => "PART",
            PosTag::PRON => "PRON",
            PosTag::PROPN => "PROPN",
            PosTag::PUNCT => "PUNCT",
            PosTag::SCONJ => "SCONJ",
            PosTag::SYM => "SYM",
            PosTag::VERB => "VERB",
            PosTag::X => "X",
        }
    }

    pub fn parse(s: &str) -> Option<PosTag> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One element of a pattern, tested against a single annotated token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternElement {
    /// Matches a token whose lemma equals this lowercase lemma exactly.
    Lemma(String),
    /// Matches a token with this Universal POS tag.
    Pos(PosTag),
    /// Matches a token whose lemma is a member of the named dictionary.
    Dict(String),
    /// Matches a token annotated as a URL.
    Url,
}

impl fmt::Display for PatternElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternElement::Lemma(w) => write!(f, "lemma:{w}"),
            PatternElement::Pos(t) => write!(f, "pos:{t}"),
            PatternElement::Dict(d) => write!(f, "dict:{d}"),
            PatternElement::Url => f.write_str("url"),
        }
    }
}

/// The maximum number of elements a pattern may carry.
pub const MAX_PATTERN_ELEMENTS: usize = 8;

/// A labeled sequence of match elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub id: String,
    pub label: LeadershipLabel,
    pub elements: Vec<PatternElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_project: Option<String>,
}

impl Pattern {
    /// Builds a pattern, enforcing the 1..=8 element count and the
    /// "never labeled N" invariant.
    pub fn new(
        id: impl Into<String>,
        label: LeadershipLabel,
        elements: Vec<PatternElement>,
    ) -> Result<Pattern, PatternError> {
        let id = id.into();
        if label == LeadershipLabel::N {
            return Err(PatternError::LabelN { id });
        }
        if elements.is_empty() {
            return Err(PatternError::NoElements { id });
        }
        if elements.len() > MAX_PATTERN_ELEMENTS {
            return Err(PatternError::TooManyElements {
                id,
                count: elements.len(),
            });
        }
        Ok(Pattern {
            id,
            label,
            elements,
            source_project: None,
        })
    }

    pub fn with_source(mut self, project: impl Into<String>) -> Pattern {
        self.source_project = Some(project.into());
        self
    }

    /// Names of dictionaries this pattern refers to.
    pub fn dict_refs(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().filter_map(|e| match e {
            PatternElement::Dict(name) => Some(name.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}:", self.id, self.label)?;
        for elem in &self.elements {
            write!(f, " [{elem}]")?;
        }
        if let Some(project) = &self.source_project {
            write!(f, " @{project}")?;
        }
        Ok(())
    }
}

/// The ordered rule list. Rank 0 is the highest priority; order is
/// semantically significant and pattern ids are unique.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RankedPatternList {
    patterns: Vec<Pattern>,
}

impl RankedPatternList {
    pub fn new() -> RankedPatternList {
        RankedPatternList::default()
    }

    pub fn from_patterns(patterns: Vec<Pattern>) -> Result<RankedPatternList, PatternError> {
        let mut list = RankedPatternList::new();
        for p in patterns {
            list.push(p)?;
        }
        Ok(list)
    }

    pub fn push(&mut self, pattern: Pattern) -> Result<(), PatternError> {
        self.insert(self.patterns.len(), pattern)
    }

    pub fn insert(&mut self, rank: usize, pattern: Pattern) -> Result<(), PatternError> {
        if self.contains_id(&pattern.id) {
            return Err(PatternError::DuplicateId {
                id: pattern.id.clone(),
            });
        }
        self.patterns.insert(rank, pattern);
        Ok(())
    }

    pub fn remove(&mut self, rank: usize) -> Pattern {
        self.patterns.remove(rank)
    }

    pub fn remove_by_id(&mut self, id: &str) -> Option<Pattern> {
        let rank = self.rank_of(id)?;
        Some(self.patterns.remove(rank))
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.patterns.iter().any(|p| p.id == id)
    }

    pub fn rank_of(&self, id: &str) -> Option<usize> {
        self.patterns.iter().position(|p| p.id == id)
    }

    pub fn get(&self, rank: usize) -> Option<&Pattern> {
        self.patterns.get(rank)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pattern> {
        self.patterns.iter()
    }

    /// Serializes the list in rank order, one pattern per line. Parsing the
    /// result yields a structurally identical list.
    pub fn serialize_text(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// Verifies every dictionary reference against a registry.
    pub fn check_dict_refs(&self, dicts: &DictionaryRegistry) -> Result<(), PatternError> {
        for p in &self.patterns {
            for name in p.dict_refs() {
                if dicts.get(name).is_none() {
                    return Err(PatternError::UnresolvedDict {
                        id: p.id.clone(),
                        dict: name.to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a RankedPatternList {
    type Item = &'a Pattern;
    type IntoIter = std::slice::Iter<'a, Pattern>;

    fn into_iter(self) -> Self::IntoIter {
        self.patterns.iter()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<PatternError>,
    },
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown label {label:?}")]
    UnknownLabel { label: String },
    #[error("unknown POS tag {tag:?}")]
    UnknownPosTag { tag: String },
    #[error("pattern {id:?} may not be labeled N")]
    LabelN { id: String },
    #[error("pattern {id:?} has no elements")]
    NoElements { id: String },
    #[error("pattern {id:?} has {count} elements (max {MAX_PATTERN_ELEMENTS})")]
    TooManyElements { id: String, count: usize },
    #[error("duplicate pattern id {id:?}")]
    DuplicateId { id: String },
    #[error("pattern {id:?} references unknown dictionary {dict:?}")]
    UnresolvedDict { id: String, dict: String },
    #[error("dictionary file {path:?} is empty")]
    EmptyDictionary { path: String },
    #[error("duplicate dictionary name {name:?}")]
    DuplicateDictionary { name: String },
    #[error("io error on {path:?}: {message}")]
    Io { path: String, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        for l in LeadershipLabel::ALL {
            assert_eq!(LeadershipLabel::parse(l.as_str()), Some(l));
        }
        assert_eq!(LeadershipLabel::parse("LD7"), None);
        assert_eq!(LeadershipLabel::parse("ld1"), None);
    }

    #[test]
    fn pos_tag_closed_set() {
        assert_eq!(PosTag::ALL.len(), 17);
        for t in PosTag::ALL {
            assert_eq!(PosTag::parse(t.as_str()), Some(t));
        }
        assert_eq!(PosTag::parse("VBZ"), None);
    }

    #[test]
    fn pattern_invariants() {
        let elems = vec![PatternElement::Url];
        assert!(Pattern::new("p", LeadershipLabel::N, elems.clone()).is_err());
        assert!(Pattern::new("p", LeadershipLabel::LD1, vec![]).is_err());
        let too_many = vec![PatternElement::Url; 9];
        assert!(matches!(
            Pattern::new("p", LeadershipLabel::LD1, too_many),
            Err(PatternError::TooManyElements { count: 9, .. })
        ));
        assert!(Pattern::new("p", LeadershipLabel::LD1, elems).is_ok());
    }

    #[test]
    fn list_rejects_duplicate_ids() {
        let p =
            |id: &str| Pattern::new(id, LeadershipLabel::LD2, vec![PatternElement::Url]).unwrap();
        let mut list = RankedPatternList::new();
        list.push(p("a")).unwrap();
        assert_eq!(
            list.push(p("a")),
            Err(PatternError::DuplicateId { id: "a".into() })
        );
        list.insert(0, p("b")).unwrap();
        assert_eq!(list.rank_of("b"), Some(0));
        assert_eq!(list.rank_of("a"), Some(1));
    }
}
