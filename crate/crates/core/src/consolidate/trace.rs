//! Audit trail of consolidation steps.
//!
//! Every probed update is logged, accepted or not, with the objective
//! before and after. Accepted steps carry enough detail (insert position,
//! move endpoints, removed ids) to replay the whole run from the initial
//! list, which is what the acceptance oracle does.

use serde::{Deserialize, Serialize};

/// Which of the three tasks produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Insert,
    Reorder,
    Prune,
}

/// What the step did (or would have done, when rejected).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceAction {
    /// Candidate inserted at `position` (rank index in the list it joined).
    Insert { position: usize },
    /// Candidate discarded: no position strictly improved the objective.
    /// `best_position`/`best_objective` record the best probe.
    Discard {
        best_position: usize,
        best_objective: f64,
    },
    /// Candidate skipped without probing (duplicate id).
    SkipDuplicate,
    /// Realwinner moved from rank `from` to rank `to` (indices before and
    /// after the move, in list coordinates).
    Move { from: usize, to: usize },
    /// Fakewinners removed from the list.
    Remove,
}

/// One logged step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub phase: Phase,
    /// Patterns the step concerns: the candidate for inserts, the moved
    /// realwinner for reorders, the removed fakewinners for prunes.
    pub pattern_ids: Vec<String>,
    /// Mislabeled comment that triggered a reorder/prune step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment_id: Option<String>,
    pub action: TraceAction,
    pub objective_before: f64,
    pub objective_after: f64,
    pub accepted: bool,
}

/// The ordered step log of one consolidation run.
pub type ConsolidationTrace = Vec<TraceStep>;

/// Renders a trace as line-delimited JSON records.
pub fn trace_to_jsonl(trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for step in trace {
        out.push_str(&serde_json::to_string(step).expect("trace step serializes"));
        out.push('\n');
    }
    out
}
