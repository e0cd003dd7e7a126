//! Mining emergent leadership behaviors from OSS issue comments.
//!
//! Issue comments are classified into six leadership behavior categories
//! (proposal, redirection, confirmation, inquiry, operation, volunteer) by
//! matching them against a ranked list of linguistic patterns. The crate
//! covers the whole pipeline:
//!
//! - [`pattern`]: the pattern DSL, dictionaries and the ranked pattern list
//! - [`preprocess`]: quote stripping, sentence segmentation, tokenization,
//!   lemmatization and POS tagging of raw comment bodies
//! - [`matcher`]: ordered, gap-constrained pattern matching and
//!   first-match-wins classification
//! - [`metrics`]: per-class and macro precision/recall/F1, Cohen's kappa
//! - [`consolidate`]: the insert/reorder/prune pattern consolidation
//!   algorithm and the multi-project convergence loop
//! - [`corpus`]: labeled-corpus import and seeded issue-level sampling
//! - [`records`]: issue/comment/developer records and the local cache format
//! - [`analysis`]: label distribution, Pareto curves, rank correlation,
//!   influence features and Mann-Whitney hypothesis tables
//! - [`report`]: CSV and SVG rendering of the analysis outputs

pub mod analysis;
pub mod consolidate;
pub mod corpus;
pub mod matcher;
pub mod metrics;
pub mod pattern;
pub mod preprocess;
pub mod records;
pub mod report;
pub mod time;

mod util;

pub use matcher::Classifier;
pub use pattern::{
    Dictionary, DictionaryRegistry, LeadershipLabel, Pattern, PatternElement, PosTag,
    RankedPatternList,
};
pub use preprocess::{AnnotatedComment, AnnotatedToken, RawComment, Tagger};
pub use time::Timestamp;
