use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use emlead::consolidate::{converge, ConsolidationConfig, TraceStep};
use emlead::pattern::{load_dictionaries, load_pattern_file, Pattern, RankedPatternList};
use emlead::report::iteration_csv;
use serde_json::json;

use super::io::read_labeled_corpus;
use crate::config::ConfigFile;
use crate::manifest::OutputDir;

#[derive(Debug, Args)]
pub struct ConsolidateArgs {
    /// Starting pattern list; omit to start from an empty list.
    #[arg(long)]
    pub base: Option<PathBuf>,

    /// New pattern set files, one per project, consolidated in order. The
    /// file stem names the project.
    #[arg(long, required = true, num_args = 1..)]
    pub new: Vec<PathBuf>,

    /// Labeled corpus (corpus join output) providing the objective.
    #[arg(long)]
    pub corpus: PathBuf,

    #[arg(long)]
    pub dicts: Option<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Stop when an iteration's F1 gain drops below this.
    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long, default_value_t = 50)]
    pub max_passes: usize,

    /// Evaluate prune removals one fakewinner at a time.
    #[arg(long)]
    pub prune_individually: bool,

    /// Restrict the objective to the current project's comments during
    /// each iteration.
    #[arg(long)]
    pub restrict_to_project: bool,

    /// Print the outcome without writing any files.
    #[arg(long)]
    pub dry_run: bool,
}

pub fn run(args: ConsolidateArgs, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    let dicts_dir = config
        .path_or(args.dicts, "dicts_dir")
        .context("--dicts (or dicts_dir in the config) is required")?;
    let dicts = load_dictionaries(&dicts_dir)?;

    let base = match &args.base {
        Some(path) => load_pattern_file(path, &dicts)?,
        None => RankedPatternList::new(),
    };
    let mut project_sets: Vec<(String, Vec<Pattern>)> = Vec::new();
    for path in &args.new {
        let project = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("set")
            .to_string();
        let list = load_pattern_file(path, &dicts)
            .with_context(|| format!("loading pattern set {}", path.display()))?;
        project_sets.push((project, list.iter().cloned().collect()));
    }
    let corpus = read_labeled_corpus(&args.corpus)?;
    anyhow::ensure!(!corpus.is_empty(), "labeled corpus is empty");

    let config_values = ConsolidationConfig {
        convergence_threshold: config
            .parse_or(args.threshold, "convergence_threshold")
            .unwrap_or(0.01),
        max_full_passes: args.max_passes,
        prune_individually: args.prune_individually,
        restrict_to_project: args.restrict_to_project,
    };
    let outcome = converge(&base, &project_sets, &corpus, &dicts, &config_values);

    for it in &outcome.iterations {
        println!(
            "{}: {} patterns (+{} -{} ~{}) P {:.4} R {:.4} F1 {:.4}",
            it.project,
            it.n_patterns,
            it.added,
            it.deleted,
            it.changed,
            it.precision,
            it.recall,
            it.f1
        );
    }
    if outcome.stopped_early {
        println!(
            "converged after {} of {} sets (gain below {})",
            outcome.iterations.len(),
            project_sets.len(),
            config_values.convergence_threshold
        );
    }

    if args.dry_run {
        let steps: usize = outcome.traces.iter().map(|(_, t)| t.len()).sum();
        println!("dry run: {} trace steps, no files written", steps);
        return Ok(());
    }

    let out_dir = config
        .path_or(args.out, "output_dir")
        .context("--out (or output_dir in the config) is required")?;
    let mut out = OutputDir::create(&out_dir, "consolidate", seed)?;
    out.write("final.patterns", &outcome.list.serialize_text())?;
    out.write("iterations.csv", &iteration_csv(&outcome.iterations))?;
    let mut trace_body = String::new();
    for (project, trace) in &outcome.traces {
        for step in trace {
            // tag each step with its iteration's project
            let mut value = serde_json::to_value(TraceStep::clone(step))?;
            value["project"] = json!(project);
            trace_body.push_str(&value.to_string());
            trace_body.push('\n');
        }
    }
    out.write("trace.jsonl", &trace_body)?;
    out.finish()?;
    println!("wrote {}", out_dir.display());
    Ok(())
}
