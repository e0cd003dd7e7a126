use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Subcommand, ValueEnum};
use emlead::analysis::{
    extract_influence_samples, hypothesis_table, label_distribution, pareto_curve, pearson,
    per_developer_counts, spearman, svg, AnalysisError, IssueThread, ThreadComment,
    DEFAULT_WINDOW_HOURS,
};
use emlead::matcher::ClassifiedRecord;
use emlead::pattern::LeadershipLabel;
use emlead::preprocess::{import_pretagged, preprocess, Tagger};
use emlead::records::{load_cache, ProjectCache};
use emlead::report::{
    csv_table, distribution_csv, hypothesis_csv, hypothesis_pvalues_csv, influence_csv, pareto_csv,
};

use super::io::read_classified;
use crate::config::ConfigFile;
use crate::manifest::OutputDir;

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Label distribution over a classified corpus.
    Dist(DistArgs),
    /// Cumulative distribution of leadership over developers.
    Pareto(CacheArgs),
    /// Correlation of leadership counts with commits and followers.
    Corr(CorrArgs),
    /// Per-comment influence features over the effect window.
    Influence(WindowArgs),
    /// Mann-Whitney hypothesis table (each category against N).
    Hypothesis(WindowArgs),
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// classified.jsonl from `classify`.
    #[arg(long)]
    pub classified: PathBuf,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    #[arg(long)]
    pub classified: PathBuf,

    /// Project cache directory (with issues.jsonl and comments.jsonl).
    #[arg(long)]
    pub cache: Option<PathBuf>,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrMethod {
    Spearman,
    Pearson,
}

#[derive(Debug, Args)]
pub struct CorrArgs {
    #[command(flatten)]
    pub common: CacheArgs,

    /// Rank correlation by default; Pearson for sensitivity checks.
    #[arg(long, value_enum, default_value_t = CorrMethod::Spearman)]
    pub method: CorrMethod,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[command(flatten)]
    pub common: CacheArgs,

    /// Annotated corpus supplying lemmas for word divergence; bodies are
    /// re-annotated with the built-in tagger when omitted.
    #[arg(long)]
    pub pretagged: Option<PathBuf>,

    /// Effect window length in hours.
    #[arg(long, default_value_t = DEFAULT_WINDOW_HOURS)]
    pub window_hours: f64,
}

pub fn run(command: AnalyzeCommand, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    match command {
        AnalyzeCommand::Dist(args) => dist(args, config, seed),
        AnalyzeCommand::Pareto(args) => pareto(args, config, seed),
        AnalyzeCommand::Corr(args) => corr(args, config, seed),
        AnalyzeCommand::Influence(args) => influence(args, config, seed, false),
        AnalyzeCommand::Hypothesis(args) => influence(args, config, seed, true),
    }
}

fn out_dir(config: &ConfigFile, out: Option<PathBuf>) -> anyhow::Result<PathBuf> {
    config
        .path_or(out, "output_dir")
        .context("--out (or output_dir in the config) is required")
}

fn cache_dir(config: &ConfigFile, cache: Option<PathBuf>) -> anyhow::Result<PathBuf> {
    config
        .path_or(cache, "cache_dir")
        .context("--cache (or cache_dir in the config) is required")
}

fn dist(args: DistArgs, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    let records = read_classified(&args.classified)?;
    let labels: Vec<_> = records.iter().map(|r| r.label).collect();
    let distribution = label_distribution(&labels)?;

    let bars: Vec<(String, f64)> = LeadershipLabel::ALL
        .iter()
        .map(|l| (l.to_string(), distribution[l]))
        .collect();
    let mut out = OutputDir::create(&out_dir(config, args.out)?, "analyze dist", seed)?;
    out.write("distribution.csv", &distribution_csv(&distribution))?;
    out.write(
        "distribution.svg",
        &svg::bar_chart("Label distribution", &bars),
    )?;
    out.finish()?;

    let leadership: f64 = LeadershipLabel::LEADERSHIP
        .iter()
        .map(|l| distribution[l])
        .sum();
    println!(
        "{} comments, leadership fraction {:.3}",
        records.len(),
        leadership
    );
    Ok(())
}

fn pareto(args: CacheArgs, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    let records = read_classified(&args.classified)?;
    let cache = load_cache(cache_dir(config, args.cache)?)?;
    let per_dev = per_developer_counts(&records, &cache.comments);
    let counts: Vec<(String, u64)> = per_dev
        .values()
        .map(|d| (d.login.clone(), d.leadership_count))
        .collect();
    anyhow::ensure!(
        !counts.is_empty(),
        "no classified comments matched the cache"
    );
    let curve = pareto_curve(&counts)?;

    let series = vec![("leadership".to_string(), curve)];
    let mut out = OutputDir::create(&out_dir(config, args.out)?, "analyze pareto", seed)?;
    out.write("pareto.csv", &pareto_csv(&series))?;
    out.write(
        "pareto.svg",
        &svg::line_chart("Cumulative leadership by developer fraction", &series),
    )?;
    out.finish()?;
    println!("pareto over {} developers", counts.len());
    Ok(())
}

fn corr(args: CorrArgs, config: &ConfigFile, seed: u64) -> anyhow::Result<()> {
    let records = read_classified(&args.common.classified)?;
    let cache = load_cache(cache_dir(config, args.common.cache)?)?;
    let per_dev = per_developer_counts(&records, &cache.comments);

    // align over developers with recorded stats, sorted by login
    let stats: BTreeMap<&str, (f64, f64, f64)> = cache
        .developers
        .iter()
        .map(|d| {
            (
                d.login.as_str(),
                (
                    d.commit_count as f64,
                    d.follower_count as f64,
                    d.comment_count as f64,
                ),
            )
        })
        .collect();
    let logins: Vec<&str> = stats.keys().copied().collect();
    let commits: Vec<f64> = logins.iter().map(|l| stats[l].0).collect();
    let followers: Vec<f64> = logins.iter().map(|l| stats[l].1).collect();
    let comment_totals: Vec<f64> = logins.iter().map(|l| stats[l].2).collect();
    let counts_for = |label: Option<LeadershipLabel>| -> Vec<f64> {
        logins
            .iter()
            .map(|login| match per_dev.get(*login) {
                Some(d) => match label {
                    Some(l) => d.per_label[l.index()] as f64,
                    None => d.leadership_count as f64,
                },
                None => 0.0,
            })
            .collect()
    };
    let correlate = |xs: &[f64], ys: &[f64]| -> String {
        let result = match args.method {
            CorrMethod::Spearman => spearman(xs, ys),
            CorrMethod::Pearson => pearson(xs, ys),
        };
        match result {
            Ok(value) => format!("{value:.4}"),
            Err(AnalysisError::ConstantInput) => "undefined".to_string(),
            Err(e) => format!("error: {e}"),
        }
    };

    let mut rows: Vec<Vec<String>> = Vec::new();
    for label in LeadershipLabel::LEADERSHIP {
        let counts = counts_for(Some(label));
        rows.push(vec![
            label.to_string(),
            "commits".into(),
            correlate(&counts, &commits),
        ]);
        rows.push(vec![
            label.to_string(),
            "followers".into(),
            correlate(&counts, &followers),
        ]);
    }
    let total = counts_for(None);
    rows.push(vec![
        "TotalLD".into(),
        "commits".into(),
        correlate(&total, &commits),
    ]);
    rows.push(vec![
        "TotalLD".into(),
        "followers".into(),
        correlate(&total, &followers),
    ]);

    // middle 60% of developers by total comments: leadership count and
    // leadership share against comment totals
    let mut order: Vec<usize> = (0..logins.len()).collect();
    order.sort_by(|&a, &b| {
        comment_totals[b]
            .partial_cmp(&comment_totals[a])
            .unwrap()
            .then_with(|| logins[a].cmp(logins[b]))
    });
    let n = order.len();
    let skip = n / 5;
    let middle: Vec<usize> = order[skip..n - skip.min(n - skip)].to_vec();
    if middle.len() >= 3 {
        let mid_comments: Vec<f64> = middle.iter().map(|&i| comment_totals[i]).collect();
        let mid_counts: Vec<f64> = middle.iter().map(|&i| total[i]).collect();
        let mid_pct: Vec<f64> = middle
            .iter()
            .map(|&i| {
                if comment_totals[i] == 0.0 {
                    0.0
                } else {
                    total[i] / comment_totals[i]
                }
            })
            .collect();
        rows.push(vec![
            "mid60_ld_count".into(),
            "comments".into(),
            correlate(&mid_counts, &mid_comments),
        ]);
        rows.push(vec![
            "mid60_ld_pct".into(),
            "comments".into(),
            correlate(&mid_pct, &mid_comments),
        ]);
    }

    let method = match args.method {
        CorrMethod::Spearman => "spearman",
        CorrMethod::Pearson => "pearson",
    };
    let mut out = OutputDir::create(&out_dir(config, args.common.out)?, "analyze corr", seed)?;
    out.write(
        "correlation.csv",
        &csv_table(&["indicator", "reference", method], &rows),
    )?;
    out.finish()?;
    println!(
        "correlated {} indicators over {} developers",
        rows.len(),
        logins.len()
    );
    Ok(())
}

fn build_threads(
    cache: &ProjectCache,
    records: &[ClassifiedRecord],
    pretagged: Option<&Path>,
) -> anyhow::Result<Vec<IssueThread>> {
    let label_of: HashMap<&str, LeadershipLabel> = records
        .iter()
        .map(|r| (r.comment_id.as_str(), r.label))
        .collect();

    // lemmas per comment (punctuation excluded): from the annotated corpus
    // when given, otherwise re-annotated from the raw bodies
    let mut lemmas_of: HashMap<String, Vec<String>> = HashMap::new();
    match pretagged {
        Some(path) => {
            for record in import_pretagged(path)? {
                let lemmas = record
                    .comment
                    .sentences
                    .iter()
                    .flatten()
                    .filter(|t| t.upos != emlead::pattern::PosTag::PUNCT)
                    .map(|t| t.lemma.clone())
                    .collect();
                lemmas_of.insert(record.comment.comment_id, lemmas);
            }
        }
        None => {
            let tagger = Tagger::builtin();
            for comment in &cache.comments {
                let annotated = preprocess(&comment.to_raw(), &tagger);
                let lemmas = annotated
                    .sentences
                    .iter()
                    .flatten()
                    .filter(|t| t.upos != emlead::pattern::PosTag::PUNCT)
                    .map(|t| t.lemma.clone())
                    .collect();
                lemmas_of.insert(comment.comment_id.clone(), lemmas);
            }
        }
    }

    let mut threads = Vec::new();
    for issue in &cache.issues {
        let mut comments: Vec<ThreadComment> = cache
            .comments
            .iter()
            .filter(|c| c.issue_number == issue.number)
            .map(|c| ThreadComment {
                comment_id: c.comment_id.clone(),
                author: c.author.clone(),
                created_at: c.created_at,
                label: label_of
                    .get(c.comment_id.as_str())
                    .copied()
                    .unwrap_or(LeadershipLabel::N),
                lemmas: lemmas_of.remove(&c.comment_id).unwrap_or_default(),
            })
            .collect();
        if comments.is_empty() {
            continue;
        }
        comments.sort_by(|a, b| {
            a.created_at
                .cmp(&b.created_at)
                .then_with(|| a.comment_id.cmp(&b.comment_id))
        });
        threads.push(IssueThread {
            issue_number: issue.number,
            reporter: issue.reporter.clone(),
            created_at: issue.created_at,
            closed_at: issue.closed_at,
            comments,
        });
    }
    Ok(threads)
}

fn influence(
    args: WindowArgs,
    config: &ConfigFile,
    seed: u64,
    hypothesis: bool,
) -> anyhow::Result<()> {
    let records = read_classified(&args.common.classified)?;
    let cache = load_cache(cache_dir(config, args.common.cache)?)?;
    let threads = build_threads(&cache, &records, args.pretagged.as_deref())?;
    let samples = extract_influence_samples(&threads, args.window_hours)?;

    let dir = out_dir(config, args.common.out)?;
    if hypothesis {
        let tuples: Vec<_> = samples.iter().map(|(_, l, f)| (*l, *f)).collect();
        let table = hypothesis_table(&tuples);
        let mut out = OutputDir::create(&dir, "analyze hypothesis", seed)?;
        out.write("hypothesis.csv", &hypothesis_csv(&table))?;
        out.write("hypothesis_pvalues.csv", &hypothesis_pvalues_csv(&table))?;
        out.finish()?;
        println!(
            "hypothesis table over {} samples ({} issue threads, {}h window)",
            samples.len(),
            threads.len(),
            args.window_hours
        );
    } else {
        let mut out = OutputDir::create(&dir, "analyze influence", seed)?;
        out.write("influence.csv", &influence_csv(&samples))?;
        out.finish()?;
        println!(
            "influence features for {} comments ({}h window)",
            samples.len(),
            args.window_hours
        );
    }
    Ok(())
}
