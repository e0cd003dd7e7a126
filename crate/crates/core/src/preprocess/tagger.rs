//! Deterministic lexicon-first POS tagging and lemmatization.
//!
//! The built-in tagger is deliberately simple: a closed-class lexicon
//! (auxiliaries, pronouns, determiners, prepositions, conjunctions) tags
//! function words exactly, a small open-class lexicon covers common verbs
//! and adjectives of issue discussions, suffix rules and a numeral check
//! handle the rest, and everything else defaults to NOUN. Users needing
//! reference-grade tagging can run an external tool and import its output
//! (see [`super::pretagged`]).

use std::collections::{HashMap, HashSet};

use crate::pattern::PosTag;

const CLOSED_CLASS: &str = include_str!("data/closed_class.tsv");
const IRREGULAR: &str = include_str!("data/irregular_lemmas.tsv");
const VERBS: &str = include_str!("data/verbs.txt");
const ADJECTIVES: &str = include_str!("data/adjectives.txt");

/// Identifies the bundled lexicon data; preprocessing is a pure function
/// of (comment body, this version).
pub const LEXICON_VERSION: &str = "builtin-1";

/// Immutable tagging handle, safe to share across threads.
#[derive(Debug)]
pub struct Tagger {
    closed_class: HashMap<String, PosTag>,
    irregular: HashMap<String, String>,
    verbs: HashSet<String>,
    adjectives: HashSet<String>,
}

impl Tagger {
    /// Builds the tagger from the bundled lexicons.
    pub fn builtin() -> Tagger {
        let mut closed_class = HashMap::new();
        for line in data_lines(CLOSED_CLASS) {
            let (word, tag) = line
                .split_once('\t')
                .expect("closed_class entries are word<TAB>tag");
            let tag = PosTag::parse(tag.trim()).expect("closed_class tags are valid UPOS");
            closed_class.insert(word.to_string(), tag);
        }
        let mut irregular = HashMap::new();
        for line in data_lines(IRREGULAR) {
            let (form, lemma) = line
                .split_once('\t')
                .expect("irregular entries are form<TAB>lemma");
            irregular.insert(form.to_string(), lemma.trim().to_string());
        }
        Tagger {
            closed_class,
            irregular,
            verbs: data_lines(VERBS).map(str::to_string).collect(),
            adjectives: data_lines(ADJECTIVES).map(str::to_string).collect(),
        }
    }

    pub fn version(&self) -> &'static str {
        LEXICON_VERSION
    }

    /// Lemma of a lowercase token: exception lexicon first, then
    /// suffix stripping (`-s`/`-es`/`-ed`/`-ing`) with doubling repair and
    /// `e`-restoration against the verb lexicon.
    pub fn lemma(&self, lower: &str) -> String {
        if let Some(lemma) = self.irregular.get(lower) {
            return lemma.clone();
        }
        if self.closed_class.contains_key(lower) {
            return lower.to_string();
        }
        let base = lower
            .strip_suffix("'s")
            .or_else(|| lower.strip_suffix("\u{2019}s"))
            .unwrap_or(lower);
        if base.len() <= 3 {
            return base.to_string();
        }

        if let Some(stem) = base.strip_suffix("ing") {
            if stem.len() >= 2 {
                return self.repair_stem(stem);
            }
        }
        if base.ends_with("ied") && base.len() > 4 {
            return format!("{}y", &base[..base.len() - 3]);
        }
        if base.ends_with("eed") {
            return base[..base.len() - 1].to_string();
        }
        if let Some(stem) = base.strip_suffix("ed") {
            if stem.len() >= 2 {
                return self.repair_stem(stem);
            }
        }
        if base.ends_with("ies") && base.len() > 4 {
            return format!("{}y", &base[..base.len() - 3]);
        }
        if ["ches", "shes", "sses", "xes", "zes"]
            .iter()
            .any(|s| base.ends_with(s))
        {
            return base[..base.len() - 2].to_string();
        }
        if base.ends_with('s')
            && !base.ends_with("ss")
            && !base.ends_with("us")
            && !base.ends_with("is")
        {
            return base[..base.len() - 1].to_string();
        }
        base.to_string()
    }

    // Undoubles doubled final consonants and restores a dropped `e`,
    // preferring whichever candidate the verb lexicon knows.
    fn repair_stem(&self, stem: &str) -> String {
        if self.verbs.contains(stem) {
            return stem.to_string();
        }
        let with_e = format!("{stem}e");
        if self.verbs.contains(&with_e) {
            return with_e;
        }
        let b = stem.as_bytes();
        if b.len() >= 2
            && b[b.len() - 1] == b[b.len() - 2]
            && !matches!(b[b.len() - 1], b'l' | b's' | b'z' | b'f')
        {
            let undoubled = &stem[..stem.len() - 1];
            if self.verbs.contains(undoubled) || undoubled.len() >= 3 {
                return undoubled.to_string();
            }
        }
        stem.to_string()
    }

    /// Tags one lowercase token given its lemma.
    pub fn tag(&self, lower: &str, lemma: &str) -> PosTag {
        if let Some(tag) = self.closed_class.get(lower) {
            return *tag;
        }
        if is_numeric_token(lower) {
            return PosTag::NUM;
        }
        if self.verbs.contains(lemma) {
            return PosTag::VERB;
        }
        if self.adjectives.contains(lower) || self.adjectives.contains(lemma) {
            return PosTag::ADJ;
        }
        if lower.ends_with("ly") && lower.len() > 3 {
            return PosTag::ADV;
        }
        if lower.ends_with("ing") || lower.ends_with("ed") {
            return PosTag::VERB;
        }
        if ["tion", "sion", "ness", "ment", "ity"]
            .iter()
            .any(|s| lower.ends_with(s))
        {
            return PosTag::NOUN;
        }
        PosTag::NOUN
    }

    /// Tags a sequence of lowercase tokens. This is the `TaggerHandle`
    /// contract used by tests and external callers; `preprocess` uses
    /// [`Tagger::lemma`] and [`Tagger::tag`] per token directly.
    pub fn tag_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<PosTag> {
        tokens
            .iter()
            .map(|t| {
                let lower = t.as_ref();
                let lemma = self.lemma(lower);
                self.tag(lower, &lemma)
            })
            .collect()
    }
}

fn data_lines(data: &str) -> impl Iterator<Item = &str> {
    data.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn is_numeric_token(token: &str) -> bool {
    let mut has_digit = false;
    for c in token.chars() {
        if c.is_ascii_digit() {
            has_digit = true;
        } else if !matches!(c, '.' | ',' | '-' | '+' | 'x' | '%' | '/') {
            return false;
        }
    }
    has_digit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_inquiry_prefix() {
        let tagger = Tagger::builtin();
        assert_eq!(
            tagger.tag_tokens(&["can", "you", "provide"]),
            vec![PosTag::AUX, PosTag::PRON, PosTag::VERB]
        );
    }

    #[test]
    fn numeric_rule() {
        let tagger = Tagger::builtin();
        assert_eq!(tagger.tag_tokens(&["17576"]), vec![PosTag::NUM]);
        assert_eq!(tagger.tag_tokens(&["0.17"]), vec![PosTag::NUM]);
    }

    #[test]
    fn duplicate_resolves_noun() {
        let tagger = Tagger::builtin();
        assert_eq!(
            tagger.tag_tokens(&["duplicate", "of"]),
            vec![PosTag::NOUN, PosTag::ADP]
        );
    }

    #[test]
    fn lemmas_strip_inflection() {
        let tagger = Tagger::builtin();
        for (form, lemma) in [
            ("tried", "try"),
            ("provides", "provide"),
            ("providing", "provide"),
            ("running", "run"),
            ("stopped", "stop"),
            ("issues", "issue"),
            ("was", "be"),
            ("goes", "go"),
            ("agreed", "agree"),
            ("uploading", "upload"),
            ("fixes", "fix"),
            ("status", "status"),
            ("this", "this"),
            ("user's", "user"),
        ] {
            assert_eq!(tagger.lemma(form), lemma, "lemma of {form}");
        }
    }

    #[test]
    fn suffix_rules() {
        let tagger = Tagger::builtin();
        assert_eq!(tagger.tag_tokens(&["quickly"]), vec![PosTag::ADV]);
        assert_eq!(tagger.tag_tokens(&["blargging"]), vec![PosTag::VERB]);
        assert_eq!(tagger.tag_tokens(&["information"]), vec![PosTag::NOUN]);
        assert_eq!(tagger.tag_tokens(&["gadget"]), vec![PosTag::NOUN]);
    }

    #[test]
    fn deterministic_version() {
        assert_eq!(Tagger::builtin().version(), LEXICON_VERSION);
    }
}
