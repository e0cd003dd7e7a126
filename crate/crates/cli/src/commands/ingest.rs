use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::Args;
use emlead_github::{fetch_project, FetchOptions};

use crate::config::ConfigFile;
use crate::UsageError;

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Repository as owner/name.
    #[arg(long)]
    pub repo: String,

    /// Cache directory root (one subdirectory per repository).
    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Environment variable holding the API token.
    #[arg(long, default_value = "GITHUB_TOKEN")]
    pub token_env: String,

    /// Fail instead of continuing unauthenticated when the token variable
    /// is unset.
    #[arg(long)]
    pub require_auth: bool,

    /// REST API root; override to run against a mirror or a mock.
    #[arg(long, default_value = "https://api.github.com")]
    pub api_base: String,

    #[arg(long, default_value_t = 100)]
    pub page_size: usize,

    /// Minimum milliseconds between requests.
    #[arg(long, default_value_t = 0)]
    pub min_interval_ms: u64,

    /// Concurrent user-profile fetches.
    #[arg(long, default_value_t = 2)]
    pub user_workers: usize,
}

pub fn run(args: IngestArgs, config: &ConfigFile) -> anyhow::Result<()> {
    let cache = config
        .path_or(args.cache, "cache_dir")
        .unwrap_or_else(|| PathBuf::from("cache"));
    let token = std::env::var(&args.token_env)
        .ok()
        .filter(|t| !t.is_empty());
    if args.require_auth && token.is_none() {
        return Err(UsageError(format!(
            "--require-auth set but the {} environment variable is empty",
            args.token_env
        ))
        .into());
    }

    let options = FetchOptions {
        api_base: args.api_base,
        token,
        page_size: args.page_size,
        min_request_interval: Duration::from_millis(args.min_interval_ms),
        user_workers: args.user_workers,
    };
    let summary = fetch_project(&args.repo, &options, &cache)
        .with_context(|| format!("fetching {}", args.repo))?;

    if summary.up_to_date {
        println!("cache up to date for {}", args.repo);
    }
    println!(
        "{}: {} issues, {} comments, {} developers ({} commits attributed, {} skipped), {} requests",
        args.repo,
        summary.issues,
        summary.comments,
        summary.developers,
        summary.commits_attributed,
        summary.commits_skipped,
        summary.requests
    );
    Ok(())
}
