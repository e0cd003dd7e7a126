//! Turning raw comment bodies into annotated token sequences.
//!
//! The pipeline is: strip quoted/fenced material, detect URLs, split into
//! sentences, tokenize, lemmatize and POS-tag. It is deterministic: the
//! same body and lexicon version always yield the same annotation.

mod pretagged;
mod segment;
mod strip;
mod tagger;

pub use pretagged::{export_pretagged, import_pretagged, parse_pretagged, PretaggedComment};
pub use segment::{find_url_spans, segment, RawToken};
pub use strip::{strip_quotes, strip_quotes_with, StripOptions};
pub use tagger::{Tagger, LEXICON_VERSION};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::PosTag;
use crate::time::Timestamp;

/// A comment as crawled: identity, authorship, and the raw body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComment {
    pub comment_id: String,
    pub issue_id: String,
    pub author: String,
    pub created_at: Timestamp,
    pub body: String,
}

/// One token with its annotations. `index` is the 0-based position within
/// the sentence; URL tokens always carry the `X` tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: String,
    pub upos: PosTag,
    pub is_url: bool,
    pub index: usize,
}

/// A sentence-segmented, annotated comment. Every sentence is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedComment {
    pub comment_id: String,
    pub sentences: Vec<Vec<AnnotatedToken>>,
}

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("record {record}: {message}")]
    Schema { record: usize, message: String },
    #[error("io error on {path:?}: {message}")]
    Io { path: String, message: String },
}

/// Annotates a raw comment: strips quotes, segments, tokenizes, tags and
/// lemmatizes. An empty post-strip body yields zero sentences.
pub fn preprocess(raw: &RawComment, tagger: &Tagger) -> AnnotatedComment {
    preprocess_with(raw, tagger, StripOptions::default())
}

pub fn preprocess_with(
    raw: &RawComment,
    tagger: &Tagger,
    options: StripOptions,
) -> AnnotatedComment {
    let stripped = strip_quotes_with(&raw.body, options);
    let sentences = segment(&stripped)
        .into_iter()
        .map(|tokens| annotate_sentence(&tokens, tagger))
        .filter(|s| !s.is_empty())
        .collect();
    AnnotatedComment {
        comment_id: raw.comment_id.clone(),
        sentences,
    }
}

fn annotate_sentence(tokens: &[RawToken], tagger: &Tagger) -> Vec<AnnotatedToken> {
    tokens
        .iter()
        .enumerate()
        .map(|(index, tok)| {
            let lower = tok.surface.to_lowercase();
            if tok.is_url {
                return AnnotatedToken {
                    surface: tok.surface.clone(),
                    lemma: lower,
                    upos: PosTag::X,
                    is_url: true,
                    index,
                };
            }
            if tok.is_punct {
                return AnnotatedToken {
                    surface: tok.surface.clone(),
                    lemma: lower,
                    upos: PosTag::PUNCT,
                    is_url: false,
                    index,
                };
            }
            let lemma = tagger.lemma(&lower);
            let upos = tagger.tag(&lower, &lemma);
            AnnotatedToken {
                surface: tok.surface.clone(),
                lemma,
                upos,
                is_url: false,
                index,
            }
        })
        .collect()
}
