//! Crawling closed issues, their comments, and developer indicators from
//! the GitHub REST API into a local line-delimited cache.
//!
//! The cache layout under `cache/<owner>__<repo>/` is `issues.jsonl`,
//! `comments.jsonl`, `commits.jsonl` (per-author counts), `users.jsonl`
//! (follower counts), plus one small `<kind>.state.json` per record kind
//! so interrupted runs resume where they stopped. Re-running against an
//! unchanged repository performs a single freshness probe and nothing
//! else. Pull requests show up on the issues endpoint too; they are
//! filtered out and never enter the cache.

mod throttle;

pub use throttle::Throttle;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use emlead::records::{load_cache, CommentRecord, CommitCountRecord, IssueRecord, UserRecord};
use emlead::time::Timestamp;

#[derive(Debug, Clone)]
pub struct FetchOptions {
    /// REST API root; point it at a mock server in tests.
    pub api_base: String,
    pub token: Option<String>,
    pub page_size: usize,
    /// Minimum spacing between request starts (0 disables the gate).
    pub min_request_interval: Duration,
    /// Concurrent workers for per-user profile fetches.
    pub user_workers: usize,
}

impl Default for FetchOptions {
    fn default() -> FetchOptions {
        FetchOptions {
            api_base: "https://api.github.com".to_string(),
            token: None,
            page_size: 100,
            min_request_interval: Duration::ZERO,
            user_workers: 2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchSummary {
    pub issues: usize,
    pub comments: usize,
    pub developers: usize,
    pub commits_attributed: u64,
    /// Commits without a linked account, dropped from the counts.
    pub commits_skipped: u64,
    /// Requests issued during this run.
    pub requests: usize,
    /// True when the cache was already complete (freshness probe only).
    pub up_to_date: bool,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("repository must be written owner/name, got {0:?}")]
    BadRepo(String),
    #[error("authentication failed (HTTP 401): check the token passed via --token-env")]
    AuthFailed,
    #[error("repository or resource not found: {url}")]
    NotFound { url: String },
    #[error("malformed page at {url}: {message}")]
    MalformedPage { url: String, message: String },
    #[error("unexpected HTTP {status} from {url}")]
    Http { url: String, status: u16 },
    #[error("transport error on {url}: {message}")]
    Transport { url: String, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Cache(#[from] emlead::records::CacheError),
}

fn io_err(path: &Path, e: std::io::Error) -> IngestError {
    IngestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
struct KindState {
    pages_done: u32,
    complete: bool,
    #[serde(default)]
    skipped: u64,
}

fn state_path(dir: &Path, kind: &str) -> PathBuf {
    dir.join(format!("{kind}.state.json"))
}

fn load_state(dir: &Path, kind: &str) -> KindState {
    fs::read_to_string(state_path(dir, kind))
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok())
        .unwrap_or_default()
}

fn save_state(dir: &Path, kind: &str, state: &KindState) -> Result<(), IngestError> {
    let path = state_path(dir, kind);
    fs::write(
        &path,
        serde_json::to_string(state).expect("state serializes"),
    )
    .map_err(|e| io_err(&path, e))
}

struct Client {
    agent: ureq::Agent,
    throttle: Throttle,
    token: Option<String>,
    requests: AtomicUsize,
}

impl Client {
    fn new(options: &FetchOptions) -> Client {
        Client {
            agent: ureq::AgentBuilder::new()
                .timeout(Duration::from_secs(30))
                .build(),
            throttle: Throttle::new(options.min_request_interval),
            token: options.token.clone(),
            requests: AtomicUsize::new(0),
        }
    }

    /// One GET with rate-limit handling: a 403/429 carrying a reset or
    /// retry header sleeps (with jitter) and retries the same URL.
    fn get(&self, url: &str) -> Result<(Value, Option<String>), IngestError> {
        let mut rate_limit_retries = 0u32;
        loop {
            self.throttle.acquire();
            self.requests.fetch_add(1, Ordering::SeqCst);
            let mut request = self
                .agent
                .get(url)
                .set("User-Agent", "emlead-crawler")
                .set("Accept", "application/vnd.github+json");
            if let Some(token) = &self.token {
                request = request.set("Authorization", &format!("Bearer {token}"));
            }
            match request.call() {
                Ok(response) => {
                    let link = response.header("Link").map(str::to_string);
                    let body = response.into_string().map_err(|e| IngestError::Transport {
                        url: url.to_string(),
                        message: e.to_string(),
                    })?;
                    let value =
                        serde_json::from_str(&body).map_err(|e| IngestError::MalformedPage {
                            url: url.to_string(),
                            message: e.to_string(),
                        })?;
                    return Ok((value, link));
                }
                Err(ureq::Error::Status(401, _)) => return Err(IngestError::AuthFailed),
                Err(ureq::Error::Status(404, _)) => {
                    return Err(IngestError::NotFound {
                        url: url.to_string(),
                    })
                }
                Err(ureq::Error::Status(status @ (403 | 429), response)) => {
                    let wait = rate_limit_wait(&response);
                    match wait {
                        Some(wait) if rate_limit_retries < 10 => {
                            rate_limit_retries += 1;
                            eprintln!(
                                "rate limited on {url}; sleeping {:.1}s (retry {rate_limit_retries})",
                                wait.as_secs_f64()
                            );
                            std::thread::sleep(wait);
                            continue;
                        }
                        _ => {
                            return Err(IngestError::Http {
                                url: url.to_string(),
                                status,
                            })
                        }
                    }
                }
                Err(ureq::Error::Status(status, _)) => {
                    return Err(IngestError::Http {
                        url: url.to_string(),
                        status,
                    })
                }
                Err(e) => {
                    return Err(IngestError::Transport {
                        url: url.to_string(),
                        message: e.to_string(),
                    })
                }
            }
        }
    }

    fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

/// Sleep budget from rate-limit headers, jittered to avoid retry bursts.
fn rate_limit_wait(response: &ureq::Response) -> Option<Duration> {
    let jitter = Duration::from_millis(rand::thread_rng().gen_range(50..250));
    if let Some(retry) = response
        .header("Retry-After")
        .and_then(|v| v.parse::<u64>().ok())
    {
        return Some(Duration::from_secs(retry.min(3600)) + jitter);
    }
    let remaining = response.header("X-RateLimit-Remaining")?;
    if remaining.trim() != "0" {
        return None;
    }
    let reset: i64 = response.header("X-RateLimit-Reset")?.trim().parse().ok()?;
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .ok()?
        .as_secs() as i64;
    Some(Duration::from_secs((reset - now).clamp(0, 3600) as u64) + jitter)
}

fn has_next_page(link: Option<&str>, items_on_page: usize, page_size: usize) -> bool {
    match link {
        Some(link) => link.split(',').any(|part| part.contains("rel=\"next\"")),
        None => items_on_page >= page_size,
    }
}

fn append_lines<T: Serialize>(path: &Path, records: &[T]) -> Result<(), IngestError> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    let mut buffer = String::new();
    for record in records {
        buffer.push_str(&serde_json::to_string(record).expect("record serializes"));
        buffer.push('\n');
    }
    file.write_all(buffer.as_bytes())
        .map_err(|e| io_err(path, e))
}

fn field_str<'a>(item: &'a Value, field: &str, url: &str) -> Result<&'a str, IngestError> {
    item.get(field)
        .and_then(Value::as_str)
        .ok_or_else(|| IngestError::MalformedPage {
            url: url.to_string(),
            message: format!("missing string field {field:?}"),
        })
}

fn parse_timestamp(item: &Value, field: &str, url: &str) -> Result<Timestamp, IngestError> {
    Timestamp::parse(field_str(item, field, url)?).map_err(|e| IngestError::MalformedPage {
        url: url.to_string(),
        message: e.to_string(),
    })
}

/// Crawls one repository into `cache_dir/<owner>__<repo>/`. Idempotent:
/// finished kinds are skipped, a partially fetched kind resumes at its
/// next page, and a fully cached project only triggers a freshness probe.
pub fn fetch_project(
    repo: &str,
    options: &FetchOptions,
    cache_dir: &Path,
) -> Result<FetchSummary, IngestError> {
    let (owner, name) = repo
        .split_once('/')
        .filter(|(o, n)| !o.is_empty() && !n.is_empty() && !n.contains('/'))
        .ok_or_else(|| IngestError::BadRepo(repo.to_string()))?;
    let dir = cache_dir.join(format!("{owner}__{name}"));
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let client = Client::new(options);
    let base = format!(
        "{}/repos/{owner}/{name}",
        options.api_base.trim_end_matches('/')
    );

    let kinds = ["issues", "comments", "commits", "users"];
    let all_complete = kinds.iter().all(|k| load_state(&dir, k).complete);
    if all_complete {
        // freshness probe; pagination state is kept, so nothing refetches
        client.get(&base)?;
        let cache = load_cache(&dir)?;
        let commits_state = load_state(&dir, "commits");
        return Ok(FetchSummary {
            issues: cache.issues.len(),
            comments: cache.comments.len(),
            developers: cache.developers.len(),
            commits_attributed: cache.developers.iter().map(|d| d.commit_count).sum(),
            commits_skipped: commits_state.skipped,
            requests: client.request_count(),
            up_to_date: true,
        });
    }

    fetch_issues(&client, &base, options, &dir)?;
    fetch_comments(&client, &base, options, &dir)?;
    fetch_commit_counts(&client, &base, options, &dir)?;
    fetch_users(&client, options, &dir)?;

    let cache = load_cache(&dir)?;
    let commits_state = load_state(&dir, "commits");
    Ok(FetchSummary {
        issues: cache.issues.len(),
        comments: cache.comments.len(),
        developers: cache.developers.len(),
        commits_attributed: cache.developers.iter().map(|d| d.commit_count).sum(),
        commits_skipped: commits_state.skipped,
        requests: client.request_count(),
        up_to_date: false,
    })
}

fn fetch_issues(
    client: &Client,
    base: &str,
    options: &FetchOptions,
    dir: &Path,
) -> Result<(), IngestError> {
    let mut state = load_state(dir, "issues");
    while !state.complete {
        let page = state.pages_done + 1;
        let url = format!(
            "{base}/issues?state=closed&per_page={}&page={page}",
            options.page_size
        );
        let (value, link) = client.get(&url)?;
        let items = value.as_array().ok_or_else(|| IngestError::MalformedPage {
            url: url.clone(),
            message: "expected a JSON array".to_string(),
        })?;
        let mut records = Vec::new();
        for item in items {
            // the issues endpoint interleaves pull requests; skip them
            if item.get("pull_request").is_some() {
                state.skipped += 1;
                continue;
            }
            let number = item.get("number").and_then(Value::as_u64).ok_or_else(|| {
                IngestError::MalformedPage {
                    url: url.clone(),
                    message: "issue without a number".to_string(),
                }
            })?;
            let reporter = item
                .get("user")
                .and_then(|u| u.get("login"))
                .and_then(Value::as_str)
                .unwrap_or("ghost")
                .to_string();
            records.push(IssueRecord {
                number,
                title: item
                    .get("title")
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string(),
                reporter,
                created_at: parse_timestamp(item, "created_at", &url)?,
                closed_at: parse_timestamp(item, "closed_at", &url)?,
                is_pull_request: false,
            });
        }
        append_lines(&dir.join("issues.jsonl"), &records)?;
        state.pages_done = page;
        state.complete = !has_next_page(link.as_deref(), items.len(), options.page_size);
        save_state(dir, "issues", &state)?;
    }
    Ok(())
}

fn fetch_comments(
    client: &Client,
    base: &str,
    options: &FetchOptions,
    dir: &Path,
) -> Result<(), IngestError> {
    let mut state = load_state(dir, "comments");
    if state.complete {
        return Ok(());
    }
    let issue_numbers: BTreeSet<u64> = read_jsonl::<IssueRecord>(&dir.join("issues.jsonl"))?
        .into_iter()
        .map(|i| i.number)
        .collect();
    while !state.complete {
        let page = state.pages_done + 1;
        let url = format!(
            "{base}/issues/comments?per_page={}&page={page}",
            options.page_size
        );
        let (value, link) = client.get(&url)?;
        let items = value.as_array().ok_or_else(|| IngestError::MalformedPage {
            url: url.clone(),
            message: "expected a JSON array".to_string(),
        })?;
        let mut records = Vec::new();
        for item in items {
            let issue_number: u64 = field_str(item, "issue_url", &url)?
                .rsplit('/')
                .next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| IngestError::MalformedPage {
                    url: url.clone(),
                    message: "comment with unparseable issue_url".to_string(),
                })?;
            // comments of excluded items (pull requests) would dangle
            if !issue_numbers.contains(&issue_number) {
                state.skipped += 1;
                continue;
            }
            let id = item.get("id").and_then(Value::as_u64).ok_or_else(|| {
                IngestError::MalformedPage {
                    url: url.clone(),
                    message: "comment without an id".to_string(),
                }
            })?;
            records.push(CommentRecord {
                comment_id: id.to_string(),
                issue_number,
                author: item
                    .get("user")
                    .and_then(|u| u.get("login"))
                    .and_then(Value::as_str)
                    .unwrap_or("ghost")
                    .to_string(),
                created_at: parse_timestamp(item, "created_at", &url)?,
                body: item
                    .get("body")
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string(),
            });
        }
        append_lines(&dir.join("comments.jsonl"), &records)?;
        state.pages_done = page;
        state.complete = !has_next_page(link.as_deref(), items.len(), options.page_size);
        save_state(dir, "comments", &state)?;
    }
    Ok(())
}

// Commit counting restarts from page one when incomplete: the per-author
// tallies only exist in memory, so a partial pass cannot resume.
fn fetch_commit_counts(
    client: &Client,
    base: &str,
    options: &FetchOptions,
    dir: &Path,
) -> Result<(), IngestError> {
    let mut state = load_state(dir, "commits");
    if state.complete {
        return Ok(());
    }
    state = KindState::default();
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut page = 1u32;
    loop {
        let url = format!("{base}/commits?per_page={}&page={page}", options.page_size);
        let (value, link) = client.get(&url)?;
        let items = value.as_array().ok_or_else(|| IngestError::MalformedPage {
            url: url.clone(),
            message: "expected a JSON array".to_string(),
        })?;
        for item in items {
            match item
                .get("author")
                .and_then(|a| a.get("login"))
                .and_then(Value::as_str)
            {
                Some(login) => *counts.entry(login.to_string()).or_insert(0) += 1,
                // commit without a linked account
                None => state.skipped += 1,
            }
        }
        state.pages_done = page;
        if !has_next_page(link.as_deref(), items.len(), options.page_size) {
            break;
        }
        page += 1;
    }
    let records: Vec<CommitCountRecord> = counts
        .into_iter()
        .map(|(login, commit_count)| CommitCountRecord {
            login,
            commit_count,
        })
        .collect();
    let path = dir.join("commits.jsonl");
    fs::write(&path, "").map_err(|e| io_err(&path, e))?;
    append_lines(&path, &records)?;
    state.complete = true;
    save_state(dir, "commits", &state)
}

fn fetch_users(client: &Client, options: &FetchOptions, dir: &Path) -> Result<(), IngestError> {
    let mut state = load_state(dir, "users");
    if state.complete {
        return Ok(());
    }
    let comments = read_jsonl::<CommentRecord>(&dir.join("comments.jsonl"))?;
    let already: BTreeSet<String> = read_jsonl::<UserRecord>(&dir.join("users.jsonl"))?
        .into_iter()
        .map(|u| u.login)
        .collect();
    let pending: Vec<String> = comments
        .iter()
        .map(|c| c.author.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|login| !already.contains(login))
        .collect();

    let path = dir.join("users.jsonl");
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(|e| io_err(&path, e))?;
    let writer = Mutex::new(file);
    let queue = Mutex::new(pending);
    let failure: Mutex<Option<IngestError>> = Mutex::new(None);
    let api_base = options.api_base.trim_end_matches('/');

    std::thread::scope(|scope| {
        for _ in 0..options.user_workers.max(1) {
            scope.spawn(|| loop {
                if failure.lock().unwrap().is_some() {
                    return;
                }
                let Some(login) = queue.lock().unwrap().pop() else {
                    return;
                };
                let url = format!("{api_base}/users/{login}");
                match client.get(&url) {
                    Ok((value, _)) => {
                        let record = UserRecord {
                            login,
                            follower_count: value
                                .get("followers")
                                .and_then(Value::as_u64)
                                .unwrap_or(0),
                        };
                        let line = format!(
                            "{}\n",
                            serde_json::to_string(&record).expect("record serializes")
                        );
                        let mut file = writer.lock().unwrap();
                        if let Err(e) = file.write_all(line.as_bytes()) {
                            *failure.lock().unwrap() = Some(io_err(&path, e));
                            return;
                        }
                    }
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e);
                        return;
                    }
                }
            });
        }
    });
    if let Some(err) = failure.into_inner().unwrap() {
        return Err(err);
    }
    state.complete = true;
    save_state(dir, "users", &state)
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, IngestError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        out.push(serde_json::from_str(line).map_err(|e| IngestError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
