#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use chunksel::http::{router, AppState};
use chunksel_core::example;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub fn app() -> Router {
    router(AppState::new(example::repository()))
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_owned())).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub async fn call_json(app: &Router, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let (status, text) = call(app, method, uri, body).await;
    (status, serde_json::from_str(&text).unwrap_or(Value::Null))
}

/// Creates a session and returns its id.
pub async fn new_session(app: &Router) -> String {
    let (status, v) = call_json(app, Method::POST, "/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    v["id"].as_str().unwrap().to_owned()
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary with the given arguments and stdin.
pub fn chunksel(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_chunksel"))
        .args(args)
        .env_remove("CHUNKSEL_REPO")
        .env_remove("CHUNKSEL_PORT")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/is-security")
        .join(name)
}

pub fn data_str(name: &str) -> String {
    data(name).to_str().unwrap().to_owned()
}

/// The three adapter-equivalence scenarios: (label, CLI flags, criteria
/// file, weights file, schedule file).
pub type Scenario = (
    &'static str,
    &'static str,
    &'static str,
    Option<&'static str>,
    Option<&'static str>,
);

pub const SCENARIOS: [Scenario; 3] = [
    ("addition", "addition", "criteria.json", None, None),
    ("wsum", "wsum", "criteria.json", Some("weights.json"), None),
    ("electre", "electre", "criteria-full.json", None, Some("schedule.json")),
];

pub fn cli_report(technique: &str, criteria: &str, weights: Option<&str>, schedule: Option<&str>) -> Output {
    let criteria = data_str(criteria);
    let mut args = vec![
        "select",
        "--format",
        "json",
        "--technique",
        technique,
        "--criteria",
        &criteria,
    ];
    let w = weights.map(data_str);
    let s = schedule.map(data_str);
    if let Some(w) = &w {
        args.extend(["--weights", w]);
    }
    if let Some(s) = &s {
        args.extend(["--schedule", s]);
    }
    chunksel(&args, "")
}

pub async fn http_report(
    app: &Router,
    technique: &str,
    criteria: &str,
    weights: Option<&str>,
    schedule: Option<&str>,
) -> (StatusCode, String) {
    let id = new_session(app).await;
    let base = format!("/sessions/{id}");
    let read = |f: &str| std::fs::read_to_string(data(f)).unwrap();
    assert_eq!(
        call(app, Method::PUT, &format!("{base}/profile"), Some("{}")).await.0,
        StatusCode::OK
    );
    assert_eq!(
        call(app, Method::PUT, &format!("{base}/criteria"), Some(&read(criteria)))
            .await
            .0,
        StatusCode::OK
    );
    if let Some(w) = weights {
        assert_eq!(
            call(app, Method::PUT, &format!("{base}/weights"), Some(&read(w)))
                .await
                .0,
            StatusCode::OK
        );
    }
    let schedule = schedule.map(read).unwrap_or_else(|| "null".into());
    let body = format!(r#"{{"technique": "{technique}", "schedule": {schedule}}}"#);
    call(app, Method::POST, &format!("{base}/select"), Some(&body)).await
}
