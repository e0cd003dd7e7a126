//! Evaluation metrics: per-class and macro precision/recall/F1 over the
//! six leadership categories, plus inter-annotator agreement.
//!
//! Macro averages cover LD1-LD6 only. `N` dominates real corpora and is
//! the absence of the behavior being measured, so counting it as a class
//! would swamp every other number; it still appears in the confusion
//! matrix. Zero denominators yield 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::LeadershipLabel;

/// Precision/recall/F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// A full evaluation: per-class metrics for LD1-LD6, their unweighted
/// means, and the 7x7 confusion matrix (rows = gold, columns = predicted,
/// indexed per [`LeadershipLabel::index`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_class: BTreeMap<LeadershipLabel, ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub confusion: [[u64; 7]; 7],
    pub total: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
}

/// Builds the confusion matrix for (predicted, gold) label pairs.
pub fn confusion_matrix(
    predicted: &[LeadershipLabel],
    gold: &[LeadershipLabel],
) -> Result<[[u64; 7]; 7], MetricsError> {
    if predicted.len() != gold.len() {
        return Err(MetricsError::LengthMismatch {
            left: predicted.len(),
            right: gold.len(),
        });
    }
    if predicted.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut counts = [[0u64; 7]; 7];
    for (p, g) in predicted.iter().zip(gold) {
        counts[g.index()][p.index()] += 1;
    }
    Ok(counts)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Per-class and macro metrics from a confusion matrix.
pub fn report_from_confusion(confusion: [[u64; 7]; 7], total: usize) -> EvalReport {
    let mut per_class = BTreeMap::new();
    let (mut sp, mut sr, mut sf) = (0.0, 0.0, 0.0);
    for label in LeadershipLabel::LEADERSHIP {
        let k = label.index();
        let tp = confusion[k][k];
        let pred_total: u64 = (0..7).map(|g| confusion[g][k]).sum();
        let gold_total: u64 = confusion[k].iter().sum();
        let precision = ratio(tp, pred_total);
        let recall = ratio(tp, gold_total);
        let f1 = f1(precision, recall);
        sp += precision;
        sr += recall;
        sf += f1;
        per_class.insert(
            label,
            ClassMetrics {
                precision,
                recall,
                f1,
            },
        );
    }
    let n = LeadershipLabel::LEADERSHIP.len() as f64;
    EvalReport {
        per_class,
        macro_precision: sp / n,
        macro_recall: sr / n,
        macro_f1: sf / n,
        confusion,
        total,
    }
}

/// Evaluates predictions against gold labels.
pub fn evaluate(
    predicted: &[LeadershipLabel],
    gold: &[LeadershipLabel],
) -> Result<EvalReport, MetricsError> {
    let confusion = confusion_matrix(predicted, gold)?;
    Ok(report_from_confusion(confusion, predicted.len()))
}

/// Macro-F1 straight from a confusion matrix; this is the consolidation
/// objective.
pub fn macro_f1_from_confusion(confusion: &[[u64; 7]; 7]) -> f64 {
    let mut sum = 0.0;
    for label in LeadershipLabel::LEADERSHIP {
        let k = label.index();
        let tp = confusion[k][k];
        let pred_total: u64 = (0..7).map(|g| confusion[g][k]).sum();
        let gold_total: u64 = confusion[k].iter().sum();
        sum += f1(ratio(tp, pred_total), ratio(tp, gold_total));
    }
    sum / LeadershipLabel::LEADERSHIP.len() as f64
}

/// Cohen's kappa between two annotators: `(p_o - p_e) / (1 - p_e)`.
/// Degenerate identical marginals (`p_e = 1`) mean both raters were
/// constant on the same label, which forces full agreement; returns 1.
pub fn cohen_kappa(a: &[LeadershipLabel], b: &[LeadershipLabel]) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = a.len() as f64;
    let mut agree = 0u64;
    let mut ma = [0u64; 7];
    let mut mb = [0u64; 7];
    for (x, y) in a.iter().zip(b) {
        if x == y {
            agree += 1;
        }
        ma[x.index()] += 1;
        mb[y.index()] += 1;
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = (0..7)
        .map(|k| (ma[k] as f64 / n) * (mb[k] as f64 / n))
        .sum();
    if (1.0 - p_e).abs() < 1e-12 {
        return Ok(1.0);
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Mean kappa over all annotator pairs, in input order.
pub fn average_pairwise_kappa(annotations: &[Vec<LeadershipLabel>]) -> Result<f64, MetricsError> {
    if annotations.len() < 2 {
        return Err(MetricsError::Empty);
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..annotations.len() {
        for j in i + 1..annotations.len() {
            sum += cohen_kappa(&annotations[i], &annotations[j])?;
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}

impl EvalReport {
    /// Plain-text table: one row per class plus the macro row.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<8}{:>11}{:>11}{:>11}\n",
            "class", "precision", "recall", "f1"
        ));
        for (label, m) in &self.per_class {
            out.push_str(&format!(
                "{:<8}{:>11.4}{:>11.4}{:>11.4}\n",
                label.as_str(),
                m.precision,
                m.recall,
                m.f1
            ));
        }
        out.push_str(&format!(
            "{:<8}{:>11.4}{:>11.4}{:>11.4}\n",
            "macro", self.macro_precision, self.macro_recall, self.macro_f1
        ));
        out
    }
}
