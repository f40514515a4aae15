use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use gen_server::api::{router, AppState};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, v)
}

fn create_body(config: Value) -> Value {
    json!({
        "corpus": fixture("synthetic/corpus.json"),
        "seeds": fixture("synthetic/seeds.json"),
        "resources": fixture("resources"),
        "reference": fixture("synthetic/reference.json"),
        "config": config,
    })
}

async fn decide_all(app: &Router, id: &str) -> usize {
    let (status, batch) = call(app, "GET", &format!("/sessions/{id}/batch"), None).await;
    assert_eq!(status, StatusCode::OK);
    let qs = batch["questions"].as_array().unwrap().clone();
    for (i, q) in qs.iter().enumerate() {
        if q.get("decision").is_some() {
            continue;
        }
        let qid = q["id"].as_str().unwrap();
        let body = if i % 3 == 2 {
            json!({ "action": "discarded" })
        } else {
            json!({ "action": "kept" })
        };
        let (status, _) = call(app, "POST", &format!("/sessions/{id}/questions/{qid}/decision"), Some(body)).await;
        assert_eq!(status, StatusCode::OK);
    }
    qs.len()
}

#[tokio::test]
async fn full_review_session_over_http() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::new(dir.path()).unwrap());
    let (status, created) = call(&app, "POST", "/sessions", Some(create_body(json!({ "batch_size": 10 })))).await;
    assert_eq!(status, StatusCode::CREATED, "{created}");
    let id = created["id"].as_str().unwrap().to_string();
    assert_eq!(created["batches"], 3);
    assert!(created["warnings"].as_array().unwrap().is_empty());

    let (status, batch) = call(&app, "GET", &format!("/sessions/{id}/batch"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(batch["sentences"].as_array().unwrap().len(), 10);
    let qs = batch["questions"].as_array().unwrap();
    assert!(!qs.is_empty());
    for q in qs {
        assert!(q["rank_score"].is_number() && q["pattern_id"].is_string() && q["strategy"].is_string());
    }
    let q0 = qs[0]["id"].as_str().unwrap().to_string();

    // Advancing with undecided questions lists them.
    let (status, err) = call(&app, "POST", &format!("/sessions/{id}/advance"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(err["undecided"].as_array().unwrap().len(), qs.len());

    let uri = format!("/sessions/{id}/questions/{q0}/decision");
    let edit = json!({ "action": "edited", "corrected_text": "Who built it ?" });
    let (status, r) = call(&app, "POST", &uri, Some(edit.clone())).await;
    assert_eq!((status, r["recorded"].clone()), (StatusCode::OK, json!(true)));
    let (status, r) = call(&app, "POST", &uri, Some(edit)).await;
    assert_eq!((status, r["recorded"].clone()), (StatusCode::OK, json!(false)));
    let (status, _) = call(&app, "POST", &uri, Some(json!({ "action": "discarded" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/questions/nope/decision"),
        Some(json!({ "action": "kept" })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let q1 = qs[1]["id"].as_str().unwrap();
    let (status, _) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/questions/{q1}/decision"),
        Some(json!({ "action": "discarded", "corrected_text": ["Who"] })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let mut last = Value::Null;
    for k in 1..=3 {
        decide_all(&app, &id).await;
        let (status, adv) = call(&app, "POST", &format!("/sessions/{id}/advance"), None).await;
        assert_eq!(status, StatusCode::OK, "{adv}");
        assert_eq!(adv["batch"], k);
        assert_eq!(adv["columns"].as_array().unwrap().len(), 8);
        last = adv;
    }
    assert_eq!(last["status"], "complete");
    assert!(last["report"]["topn"].as_array().is_some_and(|t| t.len() == 3));

    let (status, batch) = call(&app, "GET", &format!("/sessions/{id}/batch"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(batch["status"], "complete");
    assert!(batch["questions"].as_array().unwrap().is_empty());
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/advance"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, pats) = call(&app, "GET", &format!("/sessions/{id}/patterns"), None).await;
    assert_eq!(status, StatusCode::OK);
    let pats = pats["patterns"].as_array().unwrap();
    assert!(pats.iter().any(|p| !p["history"].as_array().unwrap().is_empty()));

    let (status, rep) = call(&app, "GET", &format!("/sessions/{id}/report?top=5,10"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(rep["report"]["topn"].as_array().unwrap().len(), 2);
    assert!(rep["text"].as_str().unwrap().contains("edit avg"));
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/report?top=0"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    // A fresh server over the same directory sees the same session.
    let again = router(AppState::new(dir.path()).unwrap());
    let (status, s) = call(&again, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["status"], "complete");
    assert_eq!(s["stats"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn reload_mid_batch_keeps_decisions() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::new(dir.path()).unwrap());
    let (_, created) = call(&app, "POST", "/sessions", Some(create_body(json!({ "batch_size": 10 })))).await;
    let id = created["id"].as_str().unwrap().to_string();
    decide_all(&app, &id).await;
    let again = router(AppState::new(dir.path()).unwrap());
    let (status, s) = call(&again, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(s["pending"], 0);
    let (status, _) = call(&again, "POST", &format!("/sessions/{id}/advance"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn configuration_errors_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let app = Arc::new(router(AppState::new(dir.path()).unwrap()));

    let (status, created) = call(
        &app,
        "POST",
        "/sessions",
        Some(create_body(json!({ "strategy": "ewaf", "th": 0.9 }))),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(created["warnings"].as_array().unwrap().len(), 1);

    let (status, _) = call(
        &app,
        "POST",
        "/sessions",
        Some(create_body(json!({ "strategy": "wma", "sim": "lev", "th": 0.8, "penalty": 0.2, "bonus": 0.1 }))),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);

    let (status, _) = call(&app, "POST", "/sessions", Some(create_body(json!({ "batch_size": 0 })))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(
        &app,
        "POST",
        "/sessions",
        Some(create_body(json!({ "strategy": "wma", "penalty": 1.5 }))),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let mut missing = create_body(json!({}));
    missing["corpus"] = json!(dir.path().join("absent.json"));
    let (status, _) = call(&app, "POST", "/sessions", Some(missing)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = call(&app, "GET", "/sessions/0123456789abcdef", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", "/sessions/..%2Fetc/batch", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
