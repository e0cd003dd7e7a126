//! Single-page browser demo. Three operations, all taking and returning
//! JSON strings so the page needs no glue types:
//!
//! - [`classify_comment`]: annotate a typed comment and show which
//!   patterns match where.
//! - [`corpus_overview`]: run a pattern list over the bundled fixture
//!   corpus; distribution and Pareto charts plus accuracy against the
//!   bundled gold labels.
//! - [`consolidation_demo`]: consolidate candidate patterns into a base
//!   list on the fixture corpus and return the step-by-step trace.
//!
//! The pattern list is editable in the page; dictionaries and the fixture
//! corpus are compiled in.

use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use emlead::analysis::{label_distribution, pareto_curve, per_developer_counts, svg};
use emlead::consolidate::{converge, evaluate_list, ConsolidationConfig};
use emlead::corpus::{import_labels, LabeledComment};
use emlead::matcher::Classifier;
use emlead::pattern::{parse_pattern_list, DictionaryRegistry, LeadershipLabel, RankedPatternList};
use emlead::preprocess::{preprocess, PretaggedComment, RawComment, Tagger};
use emlead::records::CommentRecord;

const SEED_PATTERNS: &str = include_str!("../../../data/patterns/seed.patterns");
const FIXTURE_COMMENTS: &str = include_str!("../../../data/fixtures/demo/comments.jsonl");
const FIXTURE_LABELS: &str = include_str!("../../../data/fixtures/demo_labels.csv");

const DICTIONARIES: [(&str, &str); 6] = [
    (
        "inquiry_verb",
        include_str!("../../../data/dictionaries/inquiry_verb.txt"),
    ),
    (
        "propose_verb",
        include_str!("../../../data/dictionaries/propose_verb.txt"),
    ),
    (
        "confirm_verb",
        include_str!("../../../data/dictionaries/confirm_verb.txt"),
    ),
    (
        "close_verb",
        include_str!("../../../data/dictionaries/close_verb.txt"),
    ),
    (
        "volunteer_verb",
        include_str!("../../../data/dictionaries/volunteer_verb.txt"),
    ),
    (
        "wh_word",
        include_str!("../../../data/dictionaries/wh_word.txt"),
    ),
];

fn registry() -> DictionaryRegistry {
    let mut reg = DictionaryRegistry::new();
    for (name, text) in DICTIONARIES {
        reg.insert_text(name, text)
            .expect("bundled dictionaries are valid");
    }
    reg
}

fn parse_patterns(text: &str, reg: &DictionaryRegistry) -> Result<RankedPatternList, String> {
    parse_pattern_list(text, reg).map_err(|e| e.to_string())
}

fn fixture_comments() -> Vec<CommentRecord> {
    FIXTURE_COMMENTS
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("bundled fixture is valid"))
        .collect()
}

fn fixture_labeled(tagger: &Tagger) -> Vec<LabeledComment> {
    let pretagged: Vec<PretaggedComment> = fixture_comments()
        .iter()
        .map(|c| {
            let raw = c.to_raw();
            PretaggedComment {
                issue_id: raw.issue_id.clone(),
                author: raw.author.clone(),
                created_at: raw.created_at,
                comment: preprocess(&raw, tagger),
            }
        })
        .collect();
    let (labeled, _) =
        import_labels(FIXTURE_LABELS, &pretagged, "demo").expect("bundled labels join");
    labeled
}

fn error_json(message: String) -> String {
    json!({ "error": message }).to_string()
}

#[derive(Serialize)]
struct TokenOut {
    surface: String,
    lemma: String,
    upos: String,
    is_url: bool,
}

/// The bundled seed pattern list, for pre-filling the editor.
#[wasm_bindgen]
pub fn seed_patterns() -> String {
    SEED_PATTERNS.to_string()
}

#[wasm_bindgen]
pub fn classify_comment(comment_text: &str, patterns_text: &str) -> String {
    classify_comment_impl(comment_text, patterns_text)
}

fn classify_comment_impl(comment_text: &str, patterns_text: &str) -> String {
    let reg = registry();
    let list = match parse_patterns(patterns_text, &reg) {
        Ok(list) => list,
        Err(e) => return error_json(e),
    };
    let tagger = Tagger::builtin();
    let raw = RawComment {
        comment_id: "typed".into(),
        issue_id: "demo".into(),
        author: "you".into(),
        created_at: emlead::time::Timestamp::from_epoch_seconds(0),
        body: comment_text.to_string(),
    };
    let annotated = preprocess(&raw, &tagger);
    let clf = Classifier::new(&list, &reg);
    let report = clf.explain(&annotated);

    let sentences: Vec<Vec<TokenOut>> = annotated
        .sentences
        .iter()
        .map(|s| {
            s.iter()
                .map(|t| TokenOut {
                    surface: t.surface.clone(),
                    lemma: t.lemma.clone(),
                    upos: t.upos.as_str().to_string(),
                    is_url: t.is_url,
                })
                .collect()
        })
        .collect();
    let patterns: Vec<serde_json::Value> = report
        .patterns
        .iter()
        .map(|p| {
            json!({
                "pattern_id": p.pattern_id,
                "label": p.label.as_str(),
                "matched": p.matched.as_ref().map(|m| json!({
                    "sentence_index": m.sentence_index,
                    "token_indices": m.matched_token_indices,
                })),
                "first_unmatchable_element": p.first_unmatchable_element,
            })
        })
        .collect();
    json!({
        "label": report.label.as_str(),
        "winner": report.winner.as_ref().map(|m| json!({
            "pattern_id": m.pattern_id,
            "sentence_index": m.sentence_index,
            "token_indices": m.matched_token_indices,
        })),
        "sentences": sentences,
        "patterns": patterns,
    })
    .to_string()
}

#[wasm_bindgen]
pub fn corpus_overview(patterns_text: &str) -> String {
    corpus_overview_impl(patterns_text)
}

fn corpus_overview_impl(patterns_text: &str) -> String {
    let reg = registry();
    let list = match parse_patterns(patterns_text, &reg) {
        Ok(list) => list,
        Err(e) => return error_json(e),
    };
    let tagger = Tagger::builtin();
    let labeled = fixture_labeled(&tagger);
    let comments = fixture_comments();
    let clf = Classifier::new(&list, &reg);

    let annotated: Vec<_> = labeled.iter().map(|l| l.annotated.clone()).collect();
    let records = clf.classify_corpus(&annotated, 1);
    let labels: Vec<LeadershipLabel> = records.iter().map(|r| r.label).collect();
    let distribution = label_distribution(&labels).expect("fixture is non-empty");

    let correct = records
        .iter()
        .zip(&labeled)
        .filter(|(r, l)| r.label == l.gold)
        .count();
    let mismatches: Vec<serde_json::Value> = records
        .iter()
        .zip(&labeled)
        .filter(|(r, l)| r.label != l.gold)
        .map(|(r, l)| {
            json!({
                "comment_id": r.comment_id,
                "predicted": r.label.as_str(),
                "gold": l.gold.as_str(),
            })
        })
        .collect();

    let bars: Vec<(String, f64)> = LeadershipLabel::ALL
        .iter()
        .map(|l| (l.to_string(), distribution[l]))
        .collect();
    let per_dev = per_developer_counts(&records, &comments);
    let counts: Vec<(String, u64)> = per_dev
        .values()
        .map(|d| (d.login.clone(), d.leadership_count))
        .collect();
    let curve = pareto_curve(&counts).expect("fixture has developers");
    let series = vec![("leadership".to_string(), curve)];

    json!({
        "total": records.len(),
        "accuracy": correct as f64 / records.len() as f64,
        "mismatches": mismatches,
        "distribution": LeadershipLabel::ALL.iter()
            .map(|l| (l.as_str().to_string(), distribution[l]))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "distribution_svg": svg::bar_chart("Label distribution (fixture corpus)", &bars),
        "pareto_svg": svg::line_chart("Cumulative leadership by developer fraction", &series),
    })
    .to_string()
}

#[wasm_bindgen]
pub fn consolidation_demo(base_text: &str, new_text: &str) -> String {
    consolidation_demo_impl(base_text, new_text)
}

fn consolidation_demo_impl(base_text: &str, new_text: &str) -> String {
    let reg = registry();
    let base = match parse_patterns(base_text, &reg) {
        Ok(list) => list,
        Err(e) => return error_json(format!("base list: {e}")),
    };
    let candidates = match parse_patterns(new_text, &reg) {
        Ok(list) => list,
        Err(e) => return error_json(format!("new patterns: {e}")),
    };
    let tagger = Tagger::builtin();
    let labeled = fixture_labeled(&tagger);
    let config = ConsolidationConfig::default();
    let sets = vec![(
        "demo".to_string(),
        candidates.iter().cloned().collect::<Vec<_>>(),
    )];
    let outcome = converge(&base, &sets, &labeled, &reg, &config);

    let before = evaluate_list(&base, &reg, &labeled);
    let after = evaluate_list(&outcome.list, &reg, &labeled);
    let trace: Vec<serde_json::Value> = outcome
        .traces
        .iter()
        .flat_map(|(_, steps)| steps.iter())
        .map(|s| serde_json::to_value(s).expect("trace step serializes"))
        .collect();
    json!({
        "f1_before": before.macro_f1,
        "f1_after": after.macro_f1,
        "iterations": outcome.iterations.iter().map(|it| json!({
            "project": it.project,
            "n_patterns": it.n_patterns,
            "added": it.added,
            "deleted": it.deleted,
            "changed": it.changed,
            "precision": it.precision,
            "recall": it.recall,
            "f1": it.f1,
        })).collect::<Vec<_>>(),
        "trace": trace,
        "final_patterns": outcome.list.serialize_text(),
    })
    .to_string()
}
