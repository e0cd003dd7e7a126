//! CSV rendering of analysis and consolidation outputs. All numbers are
//! formatted with fixed precision so identical runs produce byte-identical
//! files.

use std::collections::BTreeMap;

use crate::analysis::{HypothesisRow, InfluenceFeatures, FEATURES};
use crate::consolidate::IterationReport;
use crate::pattern::LeadershipLabel;

fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Generic CSV builder with quoting.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(
        &header
            .iter()
            .map(|h| escape(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        out.push_str(&row.iter().map(|f| escape(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn fmt_p(p: f64) -> String {
    if p < 1e-4 {
        format!("{p:.3e}")
    } else {
        format!("{p:.6}")
    }
}

/// Per-iteration convergence table, mirroring the iteration report shape:
/// `Projects,#Patterns,#Add,#Delete,#Change,Precision,Recall,F1-Score`.
pub fn iteration_csv(iterations: &[IterationReport]) -> String {
    let rows: Vec<Vec<String>> = iterations
        .iter()
        .map(|it| {
            vec![
                it.project.clone(),
                it.n_patterns.to_string(),
                it.added.to_string(),
                it.deleted.to_string(),
                it.changed.to_string(),
                fmt(it.precision),
                fmt(it.recall),
                fmt(it.f1),
            ]
        })
        .collect();
    csv_table(
        &[
            "Projects",
            "#Patterns",
            "#Add",
            "#Delete",
            "#Change",
            "Precision",
            "Recall",
            "F1-Score",
        ],
        &rows,
    )
}

/// Label distribution: `label,fraction`.
pub fn distribution_csv(distribution: &BTreeMap<LeadershipLabel, f64>) -> String {
    let rows: Vec<Vec<String>> = LeadershipLabel::ALL
        .iter()
        .filter_map(|l| {
            distribution
                .get(l)
                .map(|v| vec![l.to_string(), format!("{v:.6}")])
        })
        .collect();
    csv_table(&["label", "fraction"], &rows)
}

/// Pareto points: `series,dev_fraction,leadership_fraction`.
pub fn pareto_csv(series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut rows = Vec::new();
    for (name, points) in series {
        for (x, y) in points {
            rows.push(vec![name.clone(), format!("{x:.6}"), format!("{y:.6}")]);
        }
    }
    csv_table(&["series", "dev_fraction", "leadership_fraction"], &rows)
}

/// Hypothesis table: one row per feature, one column
/// per leadership category, cells rendered like `(+)***` or `#`.
pub fn hypothesis_csv(rows: &[HypothesisRow]) -> String {
    let header = [
        "Feature", "Category", "LD1", "LD2", "LD3", "LD4", "LD5", "LD6",
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut cols = vec![row.feature.clone(), row.category.clone()];
            for label in LeadershipLabel::LEADERSHIP {
                cols.push(match &row.cells[&label] {
                    Some(cell) => cell.render(),
                    None => "insufficient-data".to_string(),
                });
            }
            cols
        })
        .collect();
    csv_table(&header, &body)
}

/// Raw p-values backing the hypothesis table.
pub fn hypothesis_pvalues_csv(rows: &[HypothesisRow]) -> String {
    let header = [
        "Feature", "Category", "LD1", "LD2", "LD3", "LD4", "LD5", "LD6",
    ];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut cols = vec![row.feature.clone(), row.category.clone()];
            for label in LeadershipLabel::LEADERSHIP {
                cols.push(match &row.cells[&label] {
                    Some(cell) => fmt_p(cell.p_value),
                    None => String::new(),
                });
            }
            cols
        })
        .collect();
    csv_table(&header, &body)
}

/// Per-comment influence features: `comment_id,label,<ten features>`.
pub fn influence_csv(samples: &[(String, LeadershipLabel, InfluenceFeatures)]) -> String {
    let mut header = vec!["comment_id", "label"];
    header.extend(FEATURES.iter().map(|(name, _)| *name));
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|(id, label, f)| {
            let mut cols = vec![id.clone(), label.to_string()];
            for (name, _) in FEATURES {
                cols.push(fmt(f.get(name).expect("known feature")));
            }
            cols
        })
        .collect();
    csv_table(&header, &rows)
}
