//! Import/export of externally tagged corpora.
//!
//! The built-in tagger trades accuracy for determinism; this is the
//! fidelity escape hatch. Any external tagger's output can be converted to
//! the line-delimited format below and imported, bypassing the internal
//! tokenizer and tagger entirely. Field names are documented in
//! `docs/schemas.md`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnnotatedComment, AnnotatedToken, PreprocessError};
use crate::pattern::PosTag;
use crate::time::Timestamp;

/// An annotated comment plus the source metadata needed downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PretaggedComment {
    pub issue_id: String,
    pub author: String,
    pub created_at: Timestamp,
    pub comment: AnnotatedComment,
}

#[derive(Serialize, Deserialize)]
struct RecordWire {
    comment_id: String,
    issue_id: String,
    author: String,
    created_at: String,
    sentences: Vec<Vec<TokenWire>>,
}

#[derive(Serialize, Deserialize)]
struct TokenWire {
    surface: String,
    lemma: String,
    upos: String,
    #[serde(default)]
    is_url: bool,
}

/// Parses a line-delimited pretagged corpus. Every schema violation is
/// reported with its 1-based record number.
pub fn parse_pretagged(text: &str) -> Result<Vec<PretaggedComment>, PreprocessError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = idx + 1;
        let schema = |message: String| PreprocessError::Schema { record, message };
        let wire: RecordWire = serde_json::from_str(line).map_err(|e| schema(e.to_string()))?;
        let created_at = Timestamp::parse(&wire.created_at).map_err(|e| schema(e.to_string()))?;
        let mut sentences = Vec::with_capacity(wire.sentences.len());
        for sent in wire.sentences {
            if sent.is_empty() {
                return Err(schema("empty sentence".into()));
            }
            let mut tokens = Vec::with_capacity(sent.len());
            for (index, tok) in sent.into_iter().enumerate() {
                let upos = PosTag::parse(&tok.upos)
                    .ok_or_else(|| schema(format!("unknown upos {:?}", tok.upos)))?;
                if tok.is_url && upos != PosTag::X {
                    return Err(schema(format!(
                        "url token {:?} must carry upos X, got {upos}",
                        tok.surface
                    )));
                }
                if tok.lemma != tok.lemma.to_lowercase() {
                    return Err(schema(format!("lemma {:?} must be lowercase", tok.lemma)));
                }
                tokens.push(AnnotatedToken {
                    surface: tok.surface,
                    lemma: tok.lemma,
                    upos,
                    is_url: tok.is_url,
                    index,
                });
            }
            sentences.push(tokens);
        }
        out.push(PretaggedComment {
            issue_id: wire.issue_id,
            author: wire.author,
            created_at,
            comment: AnnotatedComment {
                comment_id: wire.comment_id,
                sentences,
            },
        });
    }
    Ok(out)
}

/// Loads a pretagged corpus file. See [`parse_pretagged`].
pub fn import_pretagged(path: impl AsRef<Path>) -> Result<Vec<PretaggedComment>, PreprocessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| PreprocessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_pretagged(&text)
}

/// Serializes a corpus to the line-delimited format; `parse_pretagged`
/// round-trips it exactly.
pub fn export_pretagged(comments: &[PretaggedComment]) -> String {
    let mut out = String::new();
    for c in comments {
        let wire = RecordWire {
            comment_id: c.comment.comment_id.clone(),
            issue_id: c.issue_id.clone(),
            author: c.author.clone(),
            created_at: c.created_at.to_string(),
            sentences: c
                .comment
                .sentences
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|t| TokenWire {
                            surface: t.surface.clone(),
                            lemma: t.lemma.clone(),
                            upos: t.upos.as_str().to_string(),
                            is_url: t.is_url,
                        })
                        .collect()
                })
                .collect(),
        };
        out.push_str(&serde_json::to_string(&wire).expect("wire record serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{preprocess, RawComment, Tagger};

    fn sample() -> Vec<PretaggedComment> {
        let tagger = Tagger::builtin();
        [
            "Can you provide more information?",
            "Duplicate of https://x.y/z",
        ]
        .iter()
        .enumerate()
        .map(|(i, body)| {
            let raw = RawComment {
                comment_id: format!("c{i}"),
                issue_id: "7".into(),
                author: "dev".into(),
                created_at: Timestamp::parse("2021-01-01T00:00:00Z").unwrap(),
                body: body.to_string(),
            };
            PretaggedComment {
                issue_id: raw.issue_id.clone(),
                author: raw.author.clone(),
                created_at: raw.created_at,
                comment: preprocess(&raw, &tagger),
            }
        })
        .collect()
    }

    #[test]
    fn two_records_import() {
        let text = export_pretagged(&sample());
        assert_eq!(parse_pretagged(&text).unwrap().len(), 2);
    }

    #[test]
    fn round_trip_is_structural_equality() {
        let corpus = sample();
        let reimported = parse_pretagged(&export_pretagged(&corpus)).unwrap();
        assert_eq!(corpus, reimported);
    }

    #[test]
    fn non_upos_tag_is_rejected_with_record_number() {
        let line = r#"{"comment_id":"c","issue_id":"1","author":"a","created_at":"2021-01-01T00:00:00Z","sentences":[[{"surface":"runs","lemma":"run","upos":"VBZ"}]]}"#;
        let err = parse_pretagged(line).unwrap_err();
        match err {
            PreprocessError::Schema { record, message } => {
                assert_eq!(record, 1);
                assert!(message.contains("VBZ"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn url_must_be_tagged_x() {
        let line = r#"{"comment_id":"c","issue_id":"1","author":"a","created_at":"2021-01-01T00:00:00Z","sentences":[[{"surface":"https://x.y","lemma":"https://x.y","upos":"NOUN","is_url":true}]]}"#;
        assert!(parse_pretagged(line).is_err());
    }
}
