//! Concrete syntax for patterns.
//!
//! One pattern per line:
//!
//! ```text
//! <id> <LDk>: [<elem>] [<elem>] ... [@<project>]
//! ```
//!
//! where `<elem>` is `lemma:<token>`, `pos:<TAG>`, `dict:<name>` or `url`.
//! The trailing `@<project>` records which project the pattern was
//! extracted from and is optional. In pattern files, `#` begins a comment
//! line and blank lines are skipped.

use std::fs;
use std::path::Path;

use super::{
    DictionaryRegistry, LeadershipLabel, Pattern, PatternElement, PatternError, PosTag,
    RankedPatternList,
};

struct Cursor<'a> {
    line: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str) -> Cursor<'a> {
        Cursor { line, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn syntax(&self, message: impl Into<String>) -> PatternError {
        PatternError::Syntax {
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.line.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, c)| !pred(*c))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }
}

/// Parses a single pattern line.
pub fn parse_pattern_line(line: &str) -> Result<Pattern, PatternError> {
    let mut cur = Cursor::new(line);
    cur.skip_ws();

    let id = cur.take_while(|c| !c.is_whitespace() && c != ':' && c != '[');
    if id.is_empty() {
        return Err(cur.syntax("expected pattern id"));
    }

    cur.skip_ws();
    let label_text = cur.take_while(|c| c.is_ascii_alphanumeric());
    if label_text.is_empty() {
        return Err(cur.syntax("expected label"));
    }
    let label = LeadershipLabel::parse(label_text).ok_or(PatternError::UnknownLabel {
        label: label_text.to_string(),
    })?;
    if !cur.eat(':') {
        return Err(cur.syntax("expected ':' after label"));
    }

    let mut elements = Vec::new();
    let mut source_project = None;
    loop {
        cur.skip_ws();
        if cur.rest().is_empty() {
            break;
        }
        if cur.eat('@') {
            let project = cur.take_while(|c| !c.is_whitespace());
            if project.is_empty() {
                return Err(cur.syntax("expected project name after '@'"));
            }
            cur.skip_ws();
            if !cur.rest().is_empty() {
                return Err(cur.syntax("trailing input after project marker"));
            }
            source_project = Some(project.to_string());
            break;
        }
        if !cur.eat('[') {
            return Err(cur.syntax("expected '[' to open an element"));
        }
        let body = cur.take_while(|c| c != ']');
        if !cur.eat(']') {
            return Err(cur.syntax("unclosed element, expected ']'"));
        }
        elements.push(parse_element(body, &cur)?);
    }

    if label == LeadershipLabel::N {
        return Err(PatternError::LabelN { id: id.to_string() });
    }
    let mut pattern = Pattern::new(id, label, elements)?;
    pattern.source_project = source_project;
    Ok(pattern)
}

fn parse_element(body: &str, cur: &Cursor<'_>) -> Result<PatternElement, PatternError> {
    if body == "url" {
        return Ok(PatternElement::Url);
    }
    if let Some(lemma) = body.strip_prefix("lemma:") {
        if lemma.is_empty() {
            return Err(cur.syntax("empty lemma"));
        }
        if lemma.chars().any(|c| c.is_whitespace()) {
            return Err(cur.syntax(format!("lemma {lemma:?} contains whitespace")));
        }
        if lemma.chars().any(|c| c.is_uppercase()) {
            return Err(cur.syntax(format!("lemma {lemma:?} must be lowercase")));
        }
        return Ok(PatternElement::Lemma(lemma.to_string()));
    }
    if let Some(tag) = body.strip_prefix("pos:") {
        let tag = PosTag::parse(tag).ok_or(PatternError::UnknownPosTag {
            tag: tag.to_string(),
        })?;
        return Ok(PatternElement::Pos(tag));
    }
    if let Some(name) = body.strip_prefix("dict:") {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(cur.syntax(format!("invalid dictionary name {name:?}")));
        }
        return Ok(PatternElement::Dict(name.to_string()));
    }
    Err(cur.syntax(format!(
        "unknown element {body:?} (expected lemma:, pos:, dict: or url)"
    )))
}

/// Parses a whole pattern file body. Line order becomes rank order; every
/// `dict:` reference must resolve against the registry.
pub fn parse_pattern_list(
    text: &str,
    dicts: &DictionaryRegistry,
) -> Result<RankedPatternList, PatternError> {
    let mut list = RankedPatternList::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let at_line = |e: PatternError| PatternError::AtLine {
            line: idx + 1,
            source: Box::new(e),
        };
        let pattern = parse_pattern_line(line).map_err(at_line)?;
        for dict in pattern.dict_refs() {
            if dicts.get(dict).is_none() {
                return Err(at_line(PatternError::UnresolvedDict {
                    id: pattern.id.clone(),
                    dict: dict.to_string(),
                }));
            }
        }
        list.push(pattern).map_err(at_line)?;
    }
    Ok(list)
}

/// Loads a pattern file from disk. See [`parse_pattern_list`].
pub fn load_pattern_file(
    path: impl AsRef<Path>,
    dicts: &DictionaryRegistry,
) -> Result<RankedPatternList, PatternError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| PatternError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_pattern_list(&text, dicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Dictionary;

    fn registry() -> DictionaryRegistry {
        let mut reg = DictionaryRegistry::new();
        reg.insert(
            Dictionary::new("inquiry_verb", ["provide", "give", "upload", "share"]).unwrap(),
        )
        .unwrap();
        reg
    }

    #[test]
    fn parses_inquiry_pattern() {
        let p = parse_pattern_line("p1 LD4: [pos:AUX] [lemma:you] [dict:inquiry_verb]").unwrap();
        assert_eq!(p.id, "p1");
        assert_eq!(p.label, LeadershipLabel::LD4);
        assert_eq!(
            p.elements,
            vec![
                PatternElement::Pos(PosTag::AUX),
                PatternElement::Lemma("you".into()),
                PatternElement::Dict("inquiry_verb".into()),
            ]
        );
        assert_eq!(p.source_project, None);
    }

    #[test]
    fn parses_url_pattern() {
        let p = parse_pattern_line("p2 LD2: [lemma:duplicate] [lemma:of] [url]").unwrap();
        assert_eq!(p.label, LeadershipLabel::LD2);
        assert_eq!(p.elements.len(), 3);
        assert_eq!(p.elements[2], PatternElement::Url);
    }

    #[test]
    fn unknown_label_is_rejected() {
        assert_eq!(
            parse_pattern_line("p3 LD9: [lemma:x]"),
            Err(PatternError::UnknownLabel {
                label: "LD9".into()
            })
        );
    }

    #[test]
    fn label_n_is_rejected() {
        assert_eq!(
            parse_pattern_line("p4 N: [lemma:x]"),
            Err(PatternError::LabelN { id: "p4".into() })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_pattern_line("p5 LD1: [lemma:x").unwrap_err();
        assert!(matches!(err, PatternError::Syntax { column, .. } if column > 8));
        let err = parse_pattern_line("p6 LD1: [wat:x]").unwrap_err();
        assert!(matches!(err, PatternError::Syntax { .. }));
        let err = parse_pattern_line("p7 LD1: [lemma:You]").unwrap_err();
        assert!(matches!(err, PatternError::Syntax { .. }));
    }

    #[test]
    fn too_many_elements_rejected() {
        let line = format!("p8 LD1:{}", " [lemma:x]".repeat(9));
        assert!(matches!(
            parse_pattern_line(&line),
            Err(PatternError::TooManyElements { count: 9, .. })
        ));
    }

    #[test]
    fn source_project_round_trips() {
        let p = parse_pattern_line("p9 LD1: [lemma:try] @bitcoin").unwrap();
        assert_eq!(p.source_project.as_deref(), Some("bitcoin"));
        assert_eq!(parse_pattern_line(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn list_preserves_order_and_skips_comments() {
        let text = "# seed patterns\n\np1 LD4: [pos:AUX] [lemma:you] [dict:inquiry_verb]\np2 LD2: [lemma:duplicate] [lemma:of] [url]\n";
        let list = parse_pattern_list(text, &registry()).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list.get(0).unwrap().id, "p1");
        assert_eq!(list.get(1).unwrap().id, "p2");
    }

    #[test]
    fn duplicate_id_names_line() {
        let text = "p1 LD1: [lemma:x]\np1 LD2: [lemma:y]\n";
        let err = parse_pattern_list(text, &registry()).unwrap_err();
        match err {
            PatternError::AtLine { line, source } => {
                assert_eq!(line, 2);
                assert_eq!(*source, PatternError::DuplicateId { id: "p1".into() });
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unresolved_dictionary_is_an_error() {
        let text = "p1 LD1: [dict:missing]\n";
        let err = parse_pattern_list(text, &registry()).unwrap_err();
        assert!(matches!(
            err,
            PatternError::AtLine { line: 1, source } if matches!(
                *source,
                PatternError::UnresolvedDict { ref dict, .. } if dict == "missing"
            )
        ));
    }

    #[test]
    fn serialize_round_trips() {
        let text = "p1 LD4: [pos:AUX] [lemma:you] [dict:inquiry_verb]\np2 LD2: [lemma:duplicate] [lemma:of] [url] @atom\n";
        let list = parse_pattern_list(text, &registry()).unwrap();
        let serialized = list.serialize_text();
        let reparsed = parse_pattern_list(&serialized, &registry()).unwrap();
        assert_eq!(list, reparsed);
        assert_eq!(serialized, text);
    }

    #[test]
    fn empty_list_serializes_to_empty_body() {
        assert_eq!(RankedPatternList::new().serialize_text(), "");
    }
}
