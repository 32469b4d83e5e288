mod support;

use axum::http::{Method, StatusCode};
use serde_json::{json, Value};
use support::{app, call, call_json, data, new_session};

const QUANTIFIED: &str = r#"[
  {"id": "impact", "direction": "maximize"},
  {"id": "level-of-innovation", "direction": "maximize"},
  {"id": "expertise", "direction": "minimize"}
]"#;

async fn with_criteria(app: &axum::Router, criteria: &str) -> String {
    let id = new_session(app).await;
    assert_eq!(
        call(app, Method::PUT, &format!("/sessions/{id}/profile"), Some("{}"))
            .await
            .0,
        StatusCode::OK
    );
    let (status, body) = call(app, Method::PUT, &format!("/sessions/{id}/criteria"), Some(criteria)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    id
}

#[tokio::test]
async fn typology_and_repository() {
    let app = app();
    let (status, v) = call_json(&app, Method::GET, "/typology", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v.as_array().unwrap().len(), 29);
    let (_, v) = call_json(&app, Method::GET, "/typology?scope=repository", None).await;
    assert_eq!(v.as_array().unwrap().len(), 32);
    let (status, v) = call_json(&app, Method::GET, "/repository", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["chunks"].as_array().unwrap().len(), 5);
}

#[tokio::test]
async fn recommendation_endpoint() {
    let app = app();
    let (status, v) = call_json(
        &app,
        Method::POST,
        "/recommendation",
        Some(r#"{"weighted": true, "data_nature": "mixed"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["strategy"], "weighted-outranking");
    let (status, _) = call(&app, Method::POST, "/recommendation", Some(r#"{"weighted": "yes"}"#)).await;
    assert!(status.is_client_error());
}

#[tokio::test]
async fn smart_elicitation_then_weighted_sum() {
    let app = app();
    let id = with_criteria(&app, QUANTIFIED).await;
    let base = format!("/sessions/{id}");

    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("{base}/elicitation"),
        Some(r#"{"technique": "smart"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["pending"]["criterion"], "impact");

    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("{base}/select"),
        Some(r#"{"technique": "wsum"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["context"]["expected"], "weighted");

    let (_, v) = call_json(&app, Method::GET, &base, None).await;
    assert_eq!(v["stage"], "eliciting");

    let mut last = Value::Null;
    for a in [60, 40, 100] {
        let (status, v) = call_json(
            &app,
            Method::POST,
            &format!("{base}/elicitation/answer"),
            Some(&format!(r#"{{"answer": {a}}}"#)),
        )
        .await;
        assert_eq!(status, StatusCode::OK);
        last = v;
    }
    assert_eq!(last["complete"], true);

    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("{base}/elicitation/answer"),
        Some(r#"{"answer": 5}"#),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["error_code"], "invalid_transition");

    let (status, report) = call_json(
        &app,
        Method::POST,
        &format!("{base}/select"),
        Some(r#"{"technique": "wsum"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    for (c, w) in [("impact", 0.3), ("level-of-innovation", 0.2), ("expertise", 0.5)] {
        assert!((report["weights"][c].as_f64().unwrap() - w).abs() < 1e-9);
    }
    assert_eq!(report["ranking"]["entries"][0]["alternative"], "misuse-cases");

    let (status, again) = call_json(&app, Method::GET, &format!("{base}/report"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again, report);
    let (_, v) = call_json(&app, Method::GET, &base, None).await;
    assert_eq!(v["stage"], "reported");
}

#[tokio::test]
async fn malformed_answer_keeps_the_question() {
    let app = app();
    let id = with_criteria(&app, QUANTIFIED).await;
    let base = format!("/sessions/{id}");
    call(
        &app,
        Method::POST,
        &format!("{base}/elicitation"),
        Some(r#"{"technique": "swing"}"#),
    )
    .await;
    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("{base}/elicitation/answer"),
        Some(r#"{"answer": 12}"#),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error_code"].is_string());
    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("{base}/elicitation/answer"),
        Some(r#"{"answer": ["expertise", "impact", "level-of-innovation"]}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["pending"]["criterion"], "impact");
}

#[tokio::test]
async fn transcript_replay() {
    let app = app();
    let id = with_criteria(&app, QUANTIFIED).await;
    let base = format!("/sessions/{id}");
    call(
        &app,
        Method::POST,
        &format!("{base}/elicitation"),
        Some(r#"{"technique": "smart"}"#),
    )
    .await;
    let mut transcript = Value::Null;
    for a in [60, 40, 100] {
        let (_, v) = call_json(
            &app,
            Method::POST,
            &format!("{base}/elicitation/answer"),
            Some(&format!(r#"{{"answer": {a}}}"#)),
        )
        .await;
        transcript = v["transcript"].clone();
    }

    let other = with_criteria(&app, QUANTIFIED).await;
    let body = json!({"technique": "smart", "transcript": transcript}).to_string();
    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("/sessions/{other}/elicitation"),
        Some(&body),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["complete"], true);
    assert!((v["weights"]["expertise"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    let body = json!({"technique": "swing", "transcript": transcript}).to_string();
    let (status, v) = call_json(
        &app,
        Method::POST,
        &format!("/sessions/{other}/elicitation"),
        Some(&body),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error_code"], "transcript_mismatch");
}

#[tokio::test]
async fn error_statuses() {
    let app = app();
    let (status, v) = call_json(&app, Method::GET, "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(v["error_code"], "unknown_session");
    assert_eq!(v["context"]["session"], "nope");

    let id = new_session(&app).await;
    let base = format!("/sessions/{id}");
    let (status, v) = call_json(&app, Method::PUT, &format!("{base}/criteria"), Some(QUANTIFIED)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["context"], json!({"stage": "created", "expected": "profile"}));

    let (status, v) = call_json(
        &app,
        Method::PUT,
        &format!("{base}/profile"),
        Some(r#"{"entries": {"impact": {"value": "huge"}}}"#),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["context"]["issues"].is_array());

    call(&app, Method::PUT, &format!("{base}/profile"), Some("{}")).await;
    let (status, v) = call_json(
        &app,
        Method::PUT,
        &format!("{base}/criteria"),
        Some(r#"[{"id": "nope", "direction": "maximize"}]"#),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error_code"].is_string());

    let (status, v) = call_json(&app, Method::PUT, &format!("{base}/criteria"), Some("[{")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error_code"].is_string());

    let (status, _) = call(&app, Method::GET, &format!("{base}/report"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    call(&app, Method::PUT, &format!("{base}/criteria"), Some(QUANTIFIED)).await;
    let (status, _) = call(
        &app,
        Method::PUT,
        &format!("{base}/weights"),
        Some(r#"{"impact": 1.0}"#),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(
        &app,
        Method::POST,
        &format!("{base}/select"),
        Some(r#"{"technique": "wsum"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, Method::GET, &format!("{base}/matrices"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    assert_eq!(call(&app, Method::DELETE, &base, None).await.0, StatusCode::NO_CONTENT);
    assert_eq!(call(&app, Method::DELETE, &base, None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn outranking_matrices() {
    let app = app();
    let criteria = std::fs::read_to_string(data("criteria-full.json")).unwrap();
    let id = with_criteria(&app, &criteria).await;
    let base = format!("/sessions/{id}");
    let (status, report) = call_json(
        &app,
        Method::POST,
        &format!("{base}/select"),
        Some(r#"{"technique": "electre"}"#),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report["strategy"], "outranking");

    let (status, m) = call_json(&app, Method::GET, &format!("{base}/matrices"), None).await;
    assert_eq!(status, StatusCode::OK);
    let rows = m["concordance"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (i, row) in rows.iter().enumerate() {
        assert!(row[i].is_null());
    }
    assert_eq!(m["least_discordant"], report["outranking"]["least_discordant"]);
    assert_eq!(m["discordance"], report["outranking"]["discordance"]);
}
