//! Property tests for the library-wide invariants: serialization round
//! trips, quote-stripping survival, rank monotonicity of classification,
//! and the statistics symmetries.

mod common;

use proptest::prelude::*;

use common::{oracle_matches_comment, test_registry, Gen, VOCAB};
use emlead::analysis::{label_distribution, mann_whitney_u, pareto_curve};
use emlead::matcher::Classifier;
use emlead::pattern::{
    parse_pattern_list, LeadershipLabel, Pattern, PatternElement, PosTag, RankedPatternList,
};
use emlead::preprocess::{
    export_pretagged, parse_pretagged, preprocess, strip_quotes, RawComment, Tagger,
};
use emlead::time::Timestamp;

fn label_strategy() -> impl Strategy<Value = LeadershipLabel> {
    prop::sample::select(LeadershipLabel::LEADERSHIP.to_vec())
}

fn element_strategy() -> impl Strategy<Value = PatternElement> {
    prop_oneof![
        prop::sample::select(VOCAB.to_vec()).prop_map(|w| PatternElement::Lemma(w.to_string())),
        prop::sample::select(PosTag::ALL.to_vec()).prop_map(PatternElement::Pos),
        prop::sample::select(vec!["greek_low", "greek_high"])
            .prop_map(|d| PatternElement::Dict(d.to_string())),
        Just(PatternElement::Url),
    ]
}

fn pattern_strategy(tag: &'static str) -> impl Strategy<Value = Pattern> {
    (
        0u32..10_000,
        label_strategy(),
        prop::collection::vec(element_strategy(), 1..=8),
        prop::option::of(prop::sample::select(vec!["bitcoin", "atom", "sklearn"])),
    )
        .prop_map(move |(id, label, elements, project)| {
            let mut pattern = Pattern::new(format!("{tag}{id}"), label, elements).unwrap();
            pattern.source_project = project.map(str::to_string);
            pattern
        })
}

fn list_strategy() -> impl Strategy<Value = RankedPatternList> {
    prop::collection::vec(pattern_strategy("p"), 0..12).prop_map(|patterns| {
        let mut list = RankedPatternList::new();
        for p in patterns {
            // duplicate ids from the generator are simply skipped
            let _ = list.push(p);
        }
        list
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse(serialize(L)) structurally equals L, order included.
    #[test]
    fn pattern_list_round_trips(list in list_strategy()) {
        let reg = test_registry();
        let text = list.serialize_text();
        let reparsed = parse_pattern_list(&text, &reg).unwrap();
        prop_assert_eq!(reparsed, list);
    }

    /// Lines that are not quotes survive quote stripping verbatim.
    #[test]
    fn strip_quotes_preserves_plain_lines(
        lines in prop::collection::vec("[ a-zA-Z0-9.>`]{0,24}", 0..12)
    ) {
        let body = lines.join("\n");
        let stripped = strip_quotes(&body);
        let mut in_fence = false;
        for line in body.lines() {
            let content = line.trim_start();
            if content.starts_with("```") {
                in_fence = !in_fence;
                continue;
            }
            if in_fence || content.starts_with('>') {
                continue;
            }
            prop_assert!(
                stripped.lines().any(|kept| kept == line),
                "line {:?} was lost", line
            );
        }
    }

    /// Swapping Mann-Whitney samples maps U to nm - U and keeps p.
    #[test]
    fn mwu_swap_symmetry(
        a in prop::collection::vec(0u8..12, 1..10),
        b in prop::collection::vec(0u8..12, 1..10),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let (u_ab, p_ab) = mann_whitney_u(&a, &b).unwrap();
        let (u_ba, p_ba) = mann_whitney_u(&b, &a).unwrap();
        prop_assert!((u_ab + u_ba - (a.len() * b.len()) as f64).abs() < 1e-9);
        prop_assert!((p_ab - p_ba).abs() < 1e-9);
    }

    /// Distribution fractions sum to one over the seven labels.
    #[test]
    fn distribution_sums_to_one(
        labels in prop::collection::vec(prop::sample::select(LeadershipLabel::ALL.to_vec()), 1..200)
    ) {
        let d = label_distribution(&labels).unwrap();
        let total: f64 = d.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(d.len(), 7);
    }

    /// Pareto curves are monotone non-decreasing and end at (1, 1).
    #[test]
    fn pareto_monotone(counts in prop::collection::vec((0u32..50, 0u64..40), 1..30)) {
        let counts: Vec<(String, u64)> = counts
            .into_iter()
            .enumerate()
            .map(|(i, (_, c))| (format!("dev{i}"), c))
            .collect();
        let curve = pareto_curve(&counts).unwrap();
        for w in curve.windows(2) {
            prop_assert!(w[1].0 > w[0].0);
            prop_assert!(w[1].1 >= w[0].1 - 1e-12);
        }
        let (x, y) = *curve.last().unwrap();
        prop_assert!((x - 1.0).abs() < 1e-12 && (y - 1.0).abs() < 1e-12);
    }
}

/// Rank monotonicity: deleting patterns ranked below the winner never
/// changes the outcome; deleting the winner promotes the next-ranked
/// matching pattern; N means nothing matches.
#[test]
fn classify_is_monotone_in_rank() {
    let reg = test_registry();
    for seed in 0..30u64 {
        let mut gen = Gen::new(0x9000 + seed);
        let patterns: Vec<Pattern> = (0..12).map(|i| gen.pattern(&format!("p{i}"), 3)).collect();
        let list = RankedPatternList::from_patterns(patterns.clone()).unwrap();
        let clf = Classifier::new(&list, &reg);
        for i in 0..40 {
            let comment = gen.comment(&format!("c{i}"), 2, 10);
            let (label, winner) = clf.classify(&comment);
            match winner {
                None => {
                    assert_eq!(label, LeadershipLabel::N);
                    // nothing in the list matches any sentence
                    for p in &list {
                        assert!(!oracle_matches_comment(p, &comment, &reg));
                    }
                }
                Some(m) => {
                    let rank = list.rank_of(&m.pattern_id).unwrap();
                    // deleting everything below the winner changes nothing
                    let truncated =
                        RankedPatternList::from_patterns(patterns[..=rank].to_vec()).unwrap();
                    let (label_t, winner_t) = Classifier::new(&truncated, &reg).classify(&comment);
                    assert_eq!(label_t, label);
                    assert_eq!(winner_t.unwrap().pattern_id, m.pattern_id);

                    // deleting the winner yields the next matching pattern
                    let mut without = list.clone();
                    without.remove_by_id(&m.pattern_id);
                    let (label_w, winner_w) = Classifier::new(&without, &reg).classify(&comment);
                    let expected = without
                        .iter()
                        .find(|p| oracle_matches_comment(p, &comment, &reg));
                    match expected {
                        Some(p) => {
                            assert_eq!(label_w, p.label);
                            assert_eq!(winner_w.unwrap().pattern_id, p.id);
                        }
                        None => assert_eq!(label_w, LeadershipLabel::N),
                    }
                }
            }
        }
    }
}

/// The bundled seed pattern file round-trips through serialization.
#[test]
fn bundled_seed_patterns_round_trip() {
    let data = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let dicts = emlead::pattern::load_dictionaries(data.join("dictionaries")).unwrap();
    let list =
        emlead::pattern::load_pattern_file(data.join("patterns/seed.patterns"), &dicts).unwrap();
    assert!(!list.is_empty());
    let reparsed = parse_pattern_list(&list.serialize_text(), &dicts).unwrap();
    assert_eq!(reparsed, list);
}

/// Preprocessed corpora survive export -> import unchanged.
#[test]
fn pretagged_export_import_round_trip_on_fixture() {
    let data = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let cache = emlead::records::load_cache(data.join("fixtures/demo")).unwrap();
    let tagger = Tagger::builtin();
    let corpus: Vec<_> = cache
        .comments
        .iter()
        .map(|c| {
            let raw: RawComment = c.to_raw();
            emlead::preprocess::PretaggedComment {
                issue_id: raw.issue_id.clone(),
                author: raw.author.clone(),
                created_at: raw.created_at,
                comment: preprocess(&raw, &tagger),
            }
        })
        .collect();
    let reimported = parse_pretagged(&export_pretagged(&corpus)).unwrap();
    assert_eq!(corpus, reimported);
    // determinism across tagger instances
    let again = preprocess(&cache.comments[0].to_raw(), &Tagger::builtin());
    assert_eq!(again, corpus[0].comment);
    let _ = Timestamp::from_epoch_seconds(0);
}
