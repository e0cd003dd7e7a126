//! Issue, comment and developer records, and the local cache format.
//!
//! The crawler writes one line-delimited JSON file per record kind under
//! `cache/<owner>__<repo>/`: `issues.jsonl`, `comments.jsonl`,
//! `commits.jsonl` (per-author commit counts) and `users.jsonl`
//! (follower counts). This module loads such a directory back into
//! memory; fetching lives in the `emlead-github` crate.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::preprocess::RawComment;
use crate::time::Timestamp;

/// A closed issue. Pull requests are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueRecord {
    pub number: u64,
    pub title: String,
    pub reporter: String,
    pub created_at: Timestamp,
    pub closed_at: Timestamp,
    #[serde(default)]
    pub is_pull_request: bool,
}

/// One issue comment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub comment_id: String,
    pub issue_number: u64,
    pub author: String,
    pub created_at: Timestamp,
    pub body: String,
}

impl CommentRecord {
    pub fn to_raw(&self) -> RawComment {
        RawComment {
            comment_id: self.comment_id.clone(),
            issue_id: self.issue_number.to_string(),
            author: self.author.clone(),
            created_at: self.created_at,
            body: self.body.clone(),
        }
    }
}

/// Per-developer indicators: traditional ones (commits, followers) plus
/// the comment count derived from the cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeveloperStats {
    pub login: String,
    pub commit_count: u64,
    pub follower_count: u64,
    pub comment_count: u64,
}

/// Commit-count row as stored in `commits.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitCountRecord {
    pub login: String,
    pub commit_count: u64,
}

/// Follower row as stored in `users.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserRecord {
    pub login: String,
    pub follower_count: u64,
}

/// Everything loaded from one project's cache directory.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectCache {
    pub issues: Vec<IssueRecord>,
    pub comments: Vec<CommentRecord>,
    pub developers: Vec<DeveloperStats>,
}

impl ProjectCache {
    pub fn issue(&self, number: u64) -> Option<&IssueRecord> {
        self.issues.iter().find(|i| i.number == number)
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{path}:{line}: {message}")]
    Schema {
        path: String,
        line: usize,
        message: String,
    },
    #[error("comment {comment_id:?} references missing issue #{issue_number}")]
    DanglingComment {
        comment_id: String,
        issue_number: u64,
    },
    #[error("issue #{issue_number} closes before it was created")]
    ClosedBeforeCreated { issue_number: u64 },
    #[error("io error on {path:?}: {message}")]
    Io { path: String, message: String },
}

fn load_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CacheError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(path).map_err(|e| CacheError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| CacheError::Schema {
            path: path.display().to_string(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Loads a cache directory, checking referential integrity: every
/// comment's issue must exist. Missing files load as empty collections.
pub fn load_cache(dir: impl AsRef<Path>) -> Result<ProjectCache, CacheError> {
    let dir = dir.as_ref();
    let issues: Vec<IssueRecord> = load_jsonl(&dir.join("issues.jsonl"))?;
    let comments: Vec<CommentRecord> = load_jsonl(&dir.join("comments.jsonl"))?;
    let commit_counts: Vec<CommitCountRecord> = load_jsonl(&dir.join("commits.jsonl"))?;
    let users: Vec<UserRecord> = load_jsonl(&dir.join("users.jsonl"))?;

    let issue_numbers: std::collections::HashSet<u64> = issues.iter().map(|i| i.number).collect();
    for issue in &issues {
        if issue.closed_at < issue.created_at {
            return Err(CacheError::ClosedBeforeCreated {
                issue_number: issue.number,
            });
        }
    }
    for c in &comments {
        if !issue_numbers.contains(&c.issue_number) {
            return Err(CacheError::DanglingComment {
                comment_id: c.comment_id.clone(),
                issue_number: c.issue_number,
            });
        }
    }

    fn dev_entry<'a>(
        devs: &'a mut BTreeMap<String, DeveloperStats>,
        login: &str,
    ) -> &'a mut DeveloperStats {
        devs.entry(login.to_string())
            .or_insert_with(|| DeveloperStats {
                login: login.to_string(),
                commit_count: 0,
                follower_count: 0,
                comment_count: 0,
            })
    }
    let mut devs: BTreeMap<String, DeveloperStats> = BTreeMap::new();
    for c in &commit_counts {
        dev_entry(&mut devs, &c.login).commit_count = c.commit_count;
    }
    for u in &users {
        dev_entry(&mut devs, &u.login).follower_count = u.follower_count;
    }
    for c in &comments {
        dev_entry(&mut devs, &c.author).comment_count += 1;
    }

    Ok(ProjectCache {
        issues,
        comments,
        developers: devs.into_values().collect(),
    })
}
