//! Pattern consolidation: insert, reorder, prune.
//!
//! Patterns extracted from individual projects over-fit and overload each
//! other; consolidation merges a new project's pattern set into the
//! ranking list while the objective (macro-F1 over LD1-LD6 on a labeled
//! corpus) strictly improves:
//!
//! - **insert**: every candidate position is probed for each new pattern;
//!   the pattern joins at the best position only if that strictly beats
//!   the current objective, otherwise it is discarded.
//! - **reorder**: for each mislabeled comment, the realwinner (highest
//!   pattern with the gold label that matches) moves to just above the
//!   highest fakewinner; the move sticks only if the objective rises.
//! - **prune**: for each mislabeled comment, its fakewinners are removed
//!   as one update, kept only if the objective rises.
//!
//! Reorder and prune scan the corpus in stored order and repeat full
//! passes until a pass accepts nothing. [`converge`] chains consolidation
//! over project sets and stops once the F1 gain drops below the
//! configured threshold.

mod engine;
mod trace;

pub use trace::{trace_to_jsonl, ConsolidationTrace, Phase, TraceAction, TraceStep};

use serde::{Deserialize, Serialize};

use crate::corpus::LabeledComment;
use crate::matcher::Classifier;
use crate::metrics::{evaluate, EvalReport};
use crate::pattern::{DictionaryRegistry, LeadershipLabel, Pattern, RankedPatternList};
use crate::preprocess::AnnotatedComment;
use engine::{Engine, Key};

/// Tuning knobs. The objective itself is fixed: macro-F1 over LD1-LD6.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConsolidationConfig {
    /// Convergence loop stops when an iteration's F1 gain is below this.
    pub convergence_threshold: f64,
    /// Upper bound on reorder/prune passes over the corpus.
    pub max_full_passes: usize,
    /// Remove fakewinners one at a time instead of as one update.
    pub prune_individually: bool,
    /// During [`converge`], evaluate the objective only on the current
    /// project's comments instead of the whole labeled corpus.
    pub restrict_to_project: bool,
}

impl Default for ConsolidationConfig {
    fn default() -> ConsolidationConfig {
        ConsolidationConfig {
            convergence_threshold: 0.01,
            max_full_passes: 50,
            prune_individually: false,
            restrict_to_project: false,
        }
    }
}

/// Realwinner/fakewinners of one comment under a list (by pattern id).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinnerAnalysis {
    pub comment_id: String,
    pub realwinner: Option<String>,
    pub fakewinners: Vec<String>,
}

/// Identifies the realwinner (highest-ranked matching pattern with the
/// gold label) and the fakewinners (wrongly-labeling matching patterns
/// ranked above it; all matching patterns when gold is `N` or no pattern
/// carries the gold label).
pub fn find_winners(
    list: &RankedPatternList,
    dicts: &DictionaryRegistry,
    comment: &AnnotatedComment,
    gold: LeadershipLabel,
) -> WinnerAnalysis {
    let clf = Classifier::new(list, dicts);
    let mut realwinner = None;
    let mut fakewinners = Vec::new();
    for pattern in list {
        if clf.match_comment(pattern, comment).is_none() {
            continue;
        }
        if pattern.label == gold {
            realwinner = Some(pattern.id.clone());
            break;
        }
        fakewinners.push(pattern.id.clone());
    }
    WinnerAnalysis {
        comment_id: comment.comment_id.clone(),
        realwinner,
        fakewinners,
    }
}

/// Result of one consolidation run.
#[derive(Debug, Clone)]
pub struct ConsolidationOutcome {
    pub list: RankedPatternList,
    pub trace: ConsolidationTrace,
    pub objective_before: f64,
    pub objective_after: f64,
    /// Accepted insertions.
    pub added: usize,
    /// Patterns removed by accepted prunes.
    pub deleted: usize,
    /// Accepted reorder moves.
    pub changed: usize,
}

fn intern_list(engine: &mut Engine<'_>, list: &RankedPatternList) -> Vec<Key> {
    list.iter()
        .map(|p| engine.intern(p).expect("list ids are unique"))
        .collect()
}

fn rebuild_list(engine: &Engine<'_>, order: &[Key]) -> RankedPatternList {
    RankedPatternList::from_patterns(order.iter().map(|&k| engine.pattern(k).clone()).collect())
        .expect("engine keys map to unique ids")
}

fn insert_phase(
    engine: &mut Engine<'_>,
    order: &mut Vec<Key>,
    new_patterns: &[Pattern],
    trace: &mut ConsolidationTrace,
) {
    let mut current = engine.objective(order);
    for pattern in new_patterns {
        let key = engine.intern(pattern);
        let key = match key {
            Some(k) if !order.contains(&k) => k,
            _ => {
                trace.push(TraceStep {
                    phase: Phase::Insert,
                    pattern_ids: vec![pattern.id.clone()],
                    comment_id: None,
                    action: TraceAction::SkipDuplicate,
                    objective_before: current,
                    objective_after: current,
                    accepted: false,
                });
                continue;
            }
        };
        let probed = engine.probe_insert_positions(order, key);
        let (mut best_pos, mut best_obj) = (0usize, probed[0]);
        for (k, &obj) in probed.iter().enumerate().skip(1) {
            if obj > best_obj {
                best_pos = k;
                best_obj = obj;
            }
        }
        let accepted = best_obj > current;
        trace.push(TraceStep {
            phase: Phase::Insert,
            pattern_ids: vec![pattern.id.clone()],
            comment_id: None,
            action: if accepted {
                TraceAction::Insert { position: best_pos }
            } else {
                TraceAction::Discard {
                    best_position: best_pos,
                    best_objective: best_obj,
                }
            },
            objective_before: current,
            objective_after: best_obj,
            accepted,
        });
        if accepted {
            order.insert(best_pos, key);
            current = best_obj;
        }
    }
}

fn reorder_phase(
    engine: &Engine<'_>,
    order: &mut Vec<Key>,
    config: &ConsolidationConfig,
    trace: &mut ConsolidationTrace,
) {
    let mut current = engine.objective(order);
    for _pass in 0..config.max_full_passes {
        let mut accepted_any = false;
        for idx in 0..engine.corpus().len() {
            if engine.predict(order, idx) == engine.gold(idx) {
                continue;
            }
            let (realwinner, fakewinners) = engine.winner_analysis(order, idx);
            let (Some(from), Some(&to)) = (realwinner, fakewinners.first()) else {
                continue;
            };
            let mut candidate = order.clone();
            let moved = candidate.remove(from);
            candidate.insert(to, moved);
            let probed = engine.objective(&candidate);
            let accepted = probed > current;
            trace.push(TraceStep {
                phase: Phase::Reorder,
                pattern_ids: vec![engine.pattern(moved).id.clone()],
                comment_id: Some(engine.corpus()[idx].comment_id.clone()),
                action: TraceAction::Move { from, to },
                objective_before: current,
                objective_after: probed,
                accepted,
            });
            if accepted {
                *order = candidate;
                current = probed;
                accepted_any = true;
            }
        }
        if !accepted_any {
            break;
        }
    }
}

fn prune_phase(
    engine: &Engine<'_>,
    order: &mut Vec<Key>,
    config: &ConsolidationConfig,
    trace: &mut ConsolidationTrace,
) {
    let mut current = engine.objective(order);
    for _pass in 0..config.max_full_passes {
        let mut accepted_any = false;
        for idx in 0..engine.corpus().len() {
            if engine.predict(order, idx) == engine.gold(idx) {
                continue;
            }
            let (_, fakewinners) = engine.winner_analysis(order, idx);
            if fakewinners.is_empty() {
                continue;
            }
            let fake_keys: Vec<Key> = fakewinners.iter().map(|&r| order[r]).collect();
            let groups: Vec<Vec<Key>> = if config.prune_individually {
                fake_keys.iter().map(|&k| vec![k]).collect()
            } else {
                vec![fake_keys]
            };
            for group in groups {
                let candidate: Vec<Key> = order
                    .iter()
                    .copied()
                    .filter(|k| !group.contains(k))
                    .collect();
                let probed = engine.objective(&candidate);
                let accepted = probed > current;
                trace.push(TraceStep {
                    phase: Phase::Prune,
                    pattern_ids: group
                        .iter()
                        .map(|&k| engine.pattern(k).id.clone())
                        .collect(),
                    comment_id: Some(engine.corpus()[idx].comment_id.clone()),
                    action: TraceAction::Remove,
                    objective_before: current,
                    objective_after: probed,
                    accepted,
                });
                if accepted {
                    *order = candidate;
                    current = probed;
                    accepted_any = true;
                }
            }
        }
        if !accepted_any {
            break;
        }
    }
}

fn outcome_from(
    engine: &Engine<'_>,
    order: &[Key],
    trace: ConsolidationTrace,
    objective_before: f64,
) -> ConsolidationOutcome {
    let mut added = 0;
    let mut deleted = 0;
    let mut changed = 0;
    for step in trace.iter().filter(|s| s.accepted) {
        match step.phase {
            Phase::Insert => added += 1,
            Phase::Reorder => changed += 1,
            Phase::Prune => deleted += step.pattern_ids.len(),
        }
    }
    ConsolidationOutcome {
        list: rebuild_list(engine, order),
        objective_after: engine.objective(order),
        objective_before,
        trace,
        added,
        deleted,
        changed,
    }
}

/// The insert task alone.
pub fn insert_patterns(
    list: &RankedPatternList,
    new_patterns: &[Pattern],
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
) -> ConsolidationOutcome {
    let mut engine = Engine::new(dicts, corpus);
    let mut order = intern_list(&mut engine, list);
    let before = engine.objective(&order);
    let mut trace = Vec::new();
    insert_phase(&mut engine, &mut order, new_patterns, &mut trace);
    outcome_from(&engine, &order, trace, before)
}

/// The reorder task alone.
pub fn reorder(
    list: &RankedPatternList,
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
    config: &ConsolidationConfig,
) -> ConsolidationOutcome {
    let mut engine = Engine::new(dicts, corpus);
    let mut order = intern_list(&mut engine, list);
    let before = engine.objective(&order);
    let mut trace = Vec::new();
    reorder_phase(&engine, &mut order, config, &mut trace);
    outcome_from(&engine, &order, trace, before)
}

/// The prune task alone.
pub fn prune(
    list: &RankedPatternList,
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
    config: &ConsolidationConfig,
) -> ConsolidationOutcome {
    let mut engine = Engine::new(dicts, corpus);
    let mut order = intern_list(&mut engine, list);
    let before = engine.objective(&order);
    let mut trace = Vec::new();
    prune_phase(&engine, &mut order, config, &mut trace);
    outcome_from(&engine, &order, trace, before)
}

/// Insert, then reorder, then prune, with composed traces.
pub fn consolidate(
    list: &RankedPatternList,
    new_patterns: &[Pattern],
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
    config: &ConsolidationConfig,
) -> ConsolidationOutcome {
    let mut engine = Engine::new(dicts, corpus);
    let mut order = intern_list(&mut engine, list);
    let before = engine.objective(&order);
    let mut trace = Vec::new();
    insert_phase(&mut engine, &mut order, new_patterns, &mut trace);
    reorder_phase(&engine, &mut order, config, &mut trace);
    prune_phase(&engine, &mut order, config, &mut trace);
    outcome_from(&engine, &order, trace, before)
}

/// Classifies a labeled corpus with a list and evaluates it.
pub fn evaluate_list(
    list: &RankedPatternList,
    dicts: &DictionaryRegistry,
    corpus: &[LabeledComment],
) -> EvalReport {
    let clf = Classifier::new(list, dicts);
    let predicted: Vec<LeadershipLabel> = corpus
        .iter()
        .map(|c| clf.classify(&c.annotated).0)
        .collect();
    let gold: Vec<LeadershipLabel> = corpus.iter().map(|c| c.gold).collect();
    evaluate(&predicted, &gold).expect("corpus is non-empty and aligned")
}

/// One row of the convergence report, mirroring the iteration table:
/// pattern count, adds, deletes, changes, and macro precision/recall/F1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationReport {
    pub project: String,
    pub n_patterns: usize,
    pub added: usize,
    pub deleted: usize,
    pub changed: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Result of the multi-project convergence loop.
#[derive(Debug, Clone)]
pub struct ConvergeOutcome {
    pub list: RankedPatternList,
    pub iterations: Vec<IterationReport>,
    /// Per-iteration traces, tagged with the project name.
    pub traces: Vec<(String, ConsolidationTrace)>,
    /// True when remaining project sets were skipped because the gain
    /// dropped below the threshold.
    pub stopped_early: bool,
}

/// Iteratively consolidates each project's pattern set into the list and
/// stops as soon as an iteration's F1 gain falls below
/// `config.convergence_threshold` (strictly less; a gain equal to the
/// threshold continues).
pub fn converge(
    initial: &RankedPatternList,
    project_sets: &[(String, Vec<Pattern>)],
    corpus: &[LabeledComment],
    dicts: &DictionaryRegistry,
    config: &ConsolidationConfig,
) -> ConvergeOutcome {
    let mut list = initial.clone();
    let mut iterations = Vec::new();
    let mut traces = Vec::new();
    let mut stopped_early = false;
    let mut previous_f1 = evaluate_list(&list, dicts, corpus).macro_f1;

    for (i, (project, set)) in project_sets.iter().enumerate() {
        let scoped: Vec<LabeledComment>;
        let objective_corpus: &[LabeledComment] = if config.restrict_to_project {
            scoped = corpus
                .iter()
                .filter(|c| c.project == *project)
                .cloned()
                .collect();
            &scoped
        } else {
            corpus
        };
        let outcome = consolidate(&list, set, objective_corpus, dicts, config);
        list = outcome.list;
        traces.push((project.clone(), outcome.trace));

        let report = evaluate_list(&list, dicts, corpus);
        iterations.push(IterationReport {
            project: project.clone(),
            n_patterns: list.len(),
            added: outcome.added,
            deleted: outcome.deleted,
            changed: outcome.changed,
            precision: report.macro_precision,
            recall: report.macro_recall,
            f1: report.macro_f1,
        });

        let gain = report.macro_f1 - previous_f1;
        previous_f1 = report.macro_f1;
        if gain < config.convergence_threshold {
            stopped_early = i + 1 < project_sets.len();
            break;
        }
    }

    ConvergeOutcome {
        list,
        iterations,
        traces,
        stopped_early,
    }
}
