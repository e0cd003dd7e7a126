//! Crawler acceptance against a local mock of the REST API: exact fixture
//! counts, pull-request exclusion, resumability after truncation, the
//! rate-limit retry path, and the configured request-rate gate.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use emlead::records::load_cache;
use emlead_github::{fetch_project, FetchOptions, IngestError};
use serde_json::{json, Value};
use tiny_http::{Header, Response, Server};

struct MockServer {
    base: String,
    server: Arc<Server>,
    requests: Arc<Mutex<Vec<(Instant, String)>>>,
    handle: Option<std::thread::JoinHandle<()>>,
}

fn page_param(url: &str) -> u32 {
    url.split_once('?')
        .map(|(_, q)| q)
        .and_then(|q| {
            q.split('&')
                .find_map(|kv| kv.strip_prefix("page=").and_then(|v| v.parse().ok()))
        })
        .unwrap_or(1)
}

fn json_response(value: Value) -> Response<std::io::Cursor<Vec<u8>>> {
    Response::from_string(value.to_string())
        .with_header(Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..]).unwrap())
}

fn link_next(base: &str, path: &str, page: u32) -> Header {
    Header::from_bytes(
        &b"Link"[..],
        format!("<{base}{path}?page={page}>; rel=\"next\"").into_bytes(),
    )
    .unwrap()
}

// last pages carry a Link header without rel="next", like the real API
fn link_last(base: &str, path: &str, page: u32) -> Header {
    Header::from_bytes(
        &b"Link"[..],
        format!("<{base}{path}?page={page}>; rel=\"prev\"").into_bytes(),
    )
    .unwrap()
}

const AUTHORS: [&str; 4] = ["dev0", "dev1", "dev2", "dev3"];

fn issue_json(number: u64) -> Value {
    json!({
        "number": number,
        "title": format!("issue {number}"),
        "state": "closed",
        "user": {"login": AUTHORS[(number % 4) as usize]},
        "created_at": "2021-01-01T00:00:00Z",
        "closed_at": "2021-01-03T00:00:00Z",
    })
}

fn comment_json(base: &str, id: u64) -> Value {
    json!({
        "id": id,
        "issue_url": format!("{base}/repos/octo/demo/issues/{}", (id - 1) % 100 + 1),
        "user": {"login": AUTHORS[(id % 4) as usize]},
        "created_at": "2021-01-02T00:00:00Z",
        "body": format!("Comment number {id}."),
    })
}

fn start_mock() -> MockServer {
    let server = Arc::new(Server::http("127.0.0.1:0").unwrap());
    let port = server.server_addr().to_ip().unwrap().port();
    let base = format!("http://127.0.0.1:{port}");
    let requests: Arc<Mutex<Vec<(Instant, String)>>> = Arc::new(Mutex::new(Vec::new()));

    let thread_server = Arc::clone(&server);
    let thread_requests = Arc::clone(&requests);
    let thread_base = base.clone();
    let served_comment_p2_403 = AtomicBool::new(false);
    let handle = std::thread::spawn(move || {
        for request in thread_server.incoming_requests() {
            let url = request.url().to_string();
            thread_requests
                .lock()
                .unwrap()
                .push((Instant::now(), url.clone()));
            let path = url.split('?').next().unwrap_or("").to_string();
            let page = page_param(&url);
            let base = &thread_base;

            let response = match path.as_str() {
                "/repos/octo/demo" => json_response(json!({"full_name": "octo/demo"})),
                "/repos/octo/demo/issues" => {
                    if page > 3 {
                        json_response(Value::Array(Vec::new()))
                    } else {
                        let start = (page - 1) as u64 * 100;
                        let mut items: Vec<Value> =
                            (start + 1..=start + 100).map(issue_json).collect();
                        if page == 1 {
                            // planted pull request; must never reach the cache
                            let mut pr = issue_json(9999);
                            pr["pull_request"] =
                                json!({"url": format!("{base}/repos/octo/demo/pulls/9999")});
                            items.push(pr);
                        }
                        let mut resp = json_response(Value::Array(items));
                        resp = if page < 3 {
                            resp.with_header(link_next(base, "/repos/octo/demo/issues", page + 1))
                        } else {
                            resp.with_header(link_last(base, "/repos/octo/demo/issues", page - 1))
                        };
                        resp
                    }
                }
                "/repos/octo/demo/issues/comments" => {
                    if page == 2 && !served_comment_p2_403.swap(true, Ordering::SeqCst) {
                        // one injected rate-limit rejection
                        let reset = SystemTime::now()
                            .duration_since(UNIX_EPOCH)
                            .unwrap()
                            .as_secs()
                            + 1;
                        let resp =
                            Response::from_string("{\"message\":\"API rate limit exceeded\"}")
                                .with_status_code(403)
                                .with_header(
                                    Header::from_bytes(&b"X-RateLimit-Remaining"[..], &b"0"[..])
                                        .unwrap(),
                                )
                                .with_header(
                                    Header::from_bytes(
                                        &b"X-RateLimit-Reset"[..],
                                        reset.to_string().into_bytes(),
                                    )
                                    .unwrap(),
                                );
                        request.respond(resp).ok();
                        continue;
                    }
                    if page > 2 {
                        json_response(Value::Array(Vec::new()))
                    } else {
                        let start = (page - 1) as u64 * 50;
                        let items: Vec<Value> = (start + 1..=start + 50)
                            .map(|id| comment_json(base, id))
                            .collect();
                        let mut resp = json_response(Value::Array(items));
                        resp = if page < 2 {
                            resp.with_header(link_next(base, "/repos/octo/demo/issues/comments", 2))
                        } else {
                            resp.with_header(link_last(base, "/repos/octo/demo/issues/comments", 1))
                        };
                        resp
                    }
                }
                "/repos/octo/demo/commits" => {
                    let mut items = Vec::new();
                    for i in 0..25u64 {
                        // dev0 x 10, dev1 x 8, dev2 x 7
                        let login = if i < 10 {
                            "dev0"
                        } else if i < 18 {
                            "dev1"
                        } else {
                            "dev2"
                        };
                        items.push(json!({"sha": format!("a{i}"), "author": {"login": login}}));
                    }
                    for i in 0..5u64 {
                        items.push(json!({"sha": format!("n{i}"), "author": null}));
                    }
                    json_response(Value::Array(items))
                }
                p if p.starts_with("/users/") => {
                    let login = p.trim_start_matches("/users/");
                    let followers = match login {
                        "dev0" => 120,
                        "dev1" => 45,
                        "dev2" => 9,
                        "dev3" => 300,
                        _ => 0,
                    };
                    json_response(json!({"login": login, "followers": followers}))
                }
                "/repos/octo/bad/issues" => {
                    request
                        .respond(
                            Response::from_string("{not json").with_header(
                                Header::from_bytes(&b"Content-Type"[..], &b"application/json"[..])
                                    .unwrap(),
                            ),
                        )
                        .ok();
                    continue;
                }
                "/repos/octo/locked/issues" => {
                    request
                        .respond(Response::from_string("{}").with_status_code(401))
                        .ok();
                    continue;
                }
                _ => {
                    request
                        .respond(
                            Response::from_string("{\"message\":\"Not Found\"}")
                                .with_status_code(404),
                        )
                        .ok();
                    continue;
                }
            };
            request.respond(response).ok();
        }
    });

    MockServer {
        base,
        server,
        requests,
        handle: Some(handle),
    }
}

impl MockServer {
    fn request_count(&self) -> usize {
        self.requests.lock().unwrap().len()
    }

    fn requests_matching(&self, needle: &str) -> usize {
        self.requests
            .lock()
            .unwrap()
            .iter()
            .filter(|(_, url)| url.contains(needle))
            .count()
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(handle) = self.handle.take() {
            handle.join().ok();
        }
    }
}

fn temp_cache(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("emlead-ingest-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn criterion_9_ingestion_against_mock_server() {
    let mock = start_mock();
    let cache = temp_cache("main");
    let options = FetchOptions {
        api_base: mock.base.clone(),
        token: None,
        page_size: 100,
        min_request_interval: Duration::from_millis(30),
        user_workers: 2,
    };

    // full fetch: exact fixture counts, pull request excluded
    let summary = fetch_project("octo/demo", &options, &cache).unwrap();
    assert_eq!(summary.issues, 300, "3 pages x 100 closed issues");
    assert_eq!(summary.comments, 100);
    assert_eq!(summary.developers, 4);
    assert_eq!(summary.commits_attributed, 25);
    assert_eq!(summary.commits_skipped, 5);
    assert!(!summary.up_to_date);

    let dir = cache.join("octo__demo");
    let loaded = load_cache(&dir).unwrap();
    assert_eq!(loaded.issues.len(), 300);
    assert!(
        loaded.issues.iter().all(|i| i.number != 9999),
        "planted PR leaked into the cache"
    );
    assert!(loaded.issues.iter().all(|i| !i.is_pull_request));
    let dev0 = loaded
        .developers
        .iter()
        .find(|d| d.login == "dev0")
        .unwrap();
    assert_eq!(dev0.commit_count, 10);
    assert_eq!(dev0.follower_count, 120);
    assert_eq!(dev0.comment_count, 25);

    // the injected 403 forced one retry of comments page 2
    assert_eq!(
        mock.requests_matching("issues/comments?per_page=100&page=2"),
        2
    );

    // request-rate gate: consecutive arrivals at least ~min_interval apart
    {
        let requests = mock.requests.lock().unwrap();
        for pair in requests.windows(2) {
            let gap = pair[1].0 - pair[0].0;
            assert!(
                gap >= Duration::from_millis(15),
                "requests {:?} and {:?} only {gap:?} apart",
                pair[0].1,
                pair[1].1
            );
        }
    }

    // idempotent re-run: a single freshness probe, no data fetches
    let before = mock.request_count();
    let rerun = fetch_project("octo/demo", &options, &cache).unwrap();
    assert!(rerun.up_to_date);
    assert_eq!(rerun.issues, 300);
    assert_eq!(
        mock.request_count() - before,
        1,
        "expected only the freshness probe"
    );

    // truncation mid-project: drop the comments kind, re-fetch converges
    let saved_comments = std::fs::read_to_string(dir.join("comments.jsonl")).unwrap();
    std::fs::remove_file(dir.join("comments.jsonl")).unwrap();
    std::fs::remove_file(dir.join("comments.state.json")).unwrap();
    let before = mock.request_count();
    let resumed = fetch_project("octo/demo", &options, &cache).unwrap();
    assert_eq!(resumed.comments, 100);
    assert_eq!(
        std::fs::read_to_string(dir.join("comments.jsonl")).unwrap(),
        saved_comments,
        "resumed cache differs from the original"
    );
    let delta = mock.request_count() - before;
    assert_eq!(
        delta, 2,
        "only the two comment pages should be refetched, saw {delta}"
    );

    std::fs::remove_dir_all(&cache).unwrap();
    println!(
        "ACCEPTANCE 9: PASS - fixture counts exact, PR excluded, 403 retried, truncation resumed, request gaps >= gate"
    );
}

#[test]
fn malformed_page_aborts_with_url() {
    let mock = start_mock();
    let cache = temp_cache("bad");
    let options = FetchOptions {
        api_base: mock.base.clone(),
        min_request_interval: Duration::ZERO,
        ..FetchOptions::default()
    };
    let err = fetch_project("octo/bad", &options, &cache).unwrap_err();
    match err {
        IngestError::MalformedPage { url, .. } => assert!(url.contains("/repos/octo/bad/issues")),
        other => panic!("expected MalformedPage, got {other:?}"),
    }
    std::fs::remove_dir_all(&cache).unwrap();
}

#[test]
fn auth_failure_is_actionable() {
    let mock = start_mock();
    let cache = temp_cache("auth");
    let options = FetchOptions {
        api_base: mock.base.clone(),
        min_request_interval: Duration::ZERO,
        ..FetchOptions::default()
    };
    let err = fetch_project("octo/locked", &options, &cache).unwrap_err();
    assert!(matches!(err, IngestError::AuthFailed));
    assert!(err.to_string().contains("token"));
    std::fs::remove_dir_all(&cache).unwrap();
}

#[test]
fn missing_repo_is_not_found() {
    let mock = start_mock();
    let cache = temp_cache("missing");
    let options = FetchOptions {
        api_base: mock.base.clone(),
        min_request_interval: Duration::ZERO,
        ..FetchOptions::default()
    };
    let err = fetch_project("octo/nosuch", &options, &cache).unwrap_err();
    assert!(matches!(err, IngestError::NotFound { .. }));
    std::fs::remove_dir_all(&cache).unwrap();
}

#[test]
fn wire_fixture_round_trip() {
    // fetch -> load_cache yields records identical to the wire fixtures
    let mock = start_mock();
    let cache = temp_cache("roundtrip");
    let options = FetchOptions {
        api_base: mock.base.clone(),
        min_request_interval: Duration::ZERO,
        ..FetchOptions::default()
    };
    fetch_project("octo/demo", &options, &cache).unwrap();
    let loaded = load_cache(cache.join("octo__demo")).unwrap();

    let mut expected_numbers: Vec<u64> = (1..=300).collect();
    let mut got_numbers: Vec<u64> = loaded.issues.iter().map(|i| i.number).collect();
    expected_numbers.sort_unstable();
    got_numbers.sort_unstable();
    assert_eq!(got_numbers, expected_numbers);

    let c42 = loaded
        .comments
        .iter()
        .find(|c| c.comment_id == "42")
        .unwrap();
    assert_eq!(c42.issue_number, 42);
    assert_eq!(c42.author, AUTHORS[42 % 4]);
    assert_eq!(c42.body, "Comment number 42.");

    let per_dev: HashMap<&str, u64> = loaded
        .developers
        .iter()
        .map(|d| (d.login.as_str(), d.follower_count))
        .collect();
    assert_eq!(per_dev["dev3"], 300);
    std::fs::remove_dir_all(&cache).unwrap();
}
