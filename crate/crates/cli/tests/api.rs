use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use fspl_cli::{router, AppState, ServiceConfig};
use fspl_core::{
    ApplicationProfile, EmbeddingStore, KnowledgeBase, Policy, Recommender, SimilarityModel,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn store() -> EmbeddingStore {
    EmbeddingStore::load(fixture("toy_vectors.txt")).unwrap()
}

fn reuse_kb() -> KnowledgeBase {
    KnowledgeBase::load(fixture("reuse_kb.json")).unwrap()
}

fn profile() -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture("new_profile.json")).unwrap()).unwrap()
}

fn app(kb: KnowledgeBase) -> (AppState, Router) {
    let state = AppState::new(kb, store(), None, ServiceConfig::default()).unwrap();
    (state.clone(), router(state, None))
}

async fn call(
    router: &Router,
    method: &str,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = router.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    (
        status,
        serde_json::from_str(&text).unwrap_or(Value::Null),
        text,
    )
}

#[tokio::test]
async fn recommend_returns_seven_ranked_features() {
    let (_, r) = app(reuse_kb());
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/recommend",
        Some(json!({"profile": profile(), "policy": "probable"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let items = body["recommendations"]["items"].as_array().unwrap();
    assert_eq!(items.len(), 7);
    let rel: Vec<f64> = items
        .iter()
        .map(|i| i["relevance"].as_f64().unwrap())
        .collect();
    assert!(rel.windows(2).all(|w| w[0] >= w[1]));
    for item in items {
        for e in item["evidence"].as_array().unwrap() {
            assert_eq!(
                e["norsim"].as_f64().unwrap(),
                e["alpha"].as_f64().unwrap() * e["delta"].as_f64().unwrap()
            );
        }
    }
    assert!(body["session_id"].as_str().is_some());
}

#[tokio::test]
async fn recommendation_payload_is_byte_stable() {
    let (_, r) = app(reuse_kb());
    let req = json!({"profile": profile(), "policy": "aggressive"});
    let (_, a, _) = call(&r, "POST", "/v1/recommend", Some(req.clone())).await;
    let (_, b, _) = call(&r, "POST", "/v1/recommend", Some(req)).await;
    assert_eq!(
        a["recommendations"].to_string(),
        b["recommendations"].to_string()
    );
}

#[tokio::test]
async fn empty_kb_is_unprocessable() {
    let (_, r) = app(KnowledgeBase::new());
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/recommend",
        Some(json!({"profile": profile()})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["message"], "knowledge base is empty");
}

#[tokio::test]
async fn schema_violations_are_bad_requests() {
    let (_, r) = app(reuse_kb());
    let mut bad = profile();
    bad.as_object_mut().unwrap().remove("performance_metric");
    let (status, body, _) = call(&r, "POST", "/v1/recommend", Some(json!({"profile": bad}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/recommend",
        Some(json!({"profile": profile(), "policy": "greedy"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _, _) = call(&r, "POST", "/v1/feedback", Some(json!({"nope": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn applications_crud() {
    let (_, r) = app(reuse_kb());
    let (status, body, _) = call(&r, "GET", "/v1/applications", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body.as_array().unwrap().len(), 3);

    let (status, body, _) = call(&r, "GET", "/v1/applications/bio-interactions", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["features"].as_array().unwrap().len(), 6);
    let (status, _, _) = call(&r, "GET", "/v1/applications/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let mut p = profile();
    p["id"] = json!("added");
    let add = json!({"profile": p, "features": [{"fspl_source": "POS_Sequence := YES", "relevance": 0.7}]});
    let (status, body, _) = call(&r, "POST", "/v1/applications", Some(add.clone())).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_eq!(body["features"][0]["feature_id"], "pos");
    let (status, _, _) = call(&r, "POST", "/v1/applications", Some(add)).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn proximity_endpoint() {
    let (_, r) = app(reuse_kb());
    let (status, ab, _) = call(
        &r,
        "GET",
        "/v1/proximity/bio-interactions/financial-news",
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (_, ba, _) = call(
        &r,
        "GET",
        "/v1/proximity/financial-news/bio-interactions",
        None,
    )
    .await;
    assert!((ab["alpha"].as_f64().unwrap() - ba["alpha"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(ab["proximity"]["fields"].as_array().unwrap().len(), 3);
    let (status, _, _) = call(&r, "GET", "/v1/proximity/bio-interactions/zz", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn extract_streams_jsonl() {
    let (_, r) = app(reuse_kb());
    let corpus = std::fs::read_to_string(fixture("sample_gold.tsv")).unwrap();
    let spec = std::fs::read_to_string(fixture("example.fspl")).unwrap();
    let (status, _, text) = call(
        &r,
        "POST",
        "/v1/extract",
        Some(json!({"corpus": corpus, "spec": spec})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(text.lines().count(), 79);
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["POS_Sequence"], "DT");

    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/extract",
        Some(json!({"corpus": corpus, "spec": "Bogus := 1"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "spec_error");
}

async fn start_session(r: &Router) -> Value {
    let (status, body, _) = call(
        r,
        "POST",
        "/v1/recommend",
        Some(json!({"profile": profile(), "policy": "conservative"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    body
}

fn unchanged_rerank(recs: &Value) -> Value {
    let items: Vec<Value> = recs["items"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, it)| json!({"feature_id": it["feature_id"], "user_rank": i + 1}))
        .collect();
    json!({"app_id": recs["new_app_id"], "mode": "Rerank", "items": items})
}

#[tokio::test]
async fn noop_feedback_does_not_retrain() {
    let (_, r) = app(reuse_kb());
    let session = start_session(&r).await;
    let event = unchanged_rerank(&session["recommendations"]);
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": session["session_id"], "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["retrained"], false);
    assert_eq!(body["new_sim"], json!({}));
    assert_eq!(body["updated_recommendations"], session["recommendations"]);
}

#[tokio::test]
async fn drag_reorder_is_accepted() {
    let (_, r) = app(reuse_kb());
    let session = start_session(&r).await;
    let mut event = unchanged_rerank(&session["recommendations"]);
    let items = event["items"].as_array_mut().unwrap();
    items[0]["user_rank"] = json!(2);
    items[1]["user_rank"] = json!(1);
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": session["session_id"], "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert!(!body["ledger"].as_object().unwrap().is_empty());

    let mut broken = unchanged_rerank(&session["recommendations"]);
    broken["items"][0]["user_rank"] = json!(2);
    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": session["session_id"], "event": broken})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn stale_or_unknown_sessions() {
    let (_, r) = app(reuse_kb());
    let session = start_session(&r).await;
    let event = unchanged_rerank(&session["recommendations"]);
    let sid = session["session_id"].clone();

    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": "missing", "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": sid, "version": 0, "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": sid, "version": 0, "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");

    let mut other = event.clone();
    other["app_id"] = json!("someone-else");
    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": sid, "event": other})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);

    let mut p = profile();
    p["id"] = json!("late");
    let add = json!({"profile": p, "features": [{"fspl_source": "POS_Sequence := YES", "relevance": 1.0}]});
    assert_eq!(
        call(&r, "POST", "/v1/applications", Some(add)).await.0,
        StatusCode::CREATED
    );
    let (status, _, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": sid, "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn retrained_alphas_match_direct_model() {
    let (state, r) = app(reuse_kb());
    let session = start_session(&r).await;
    let recs = &session["recommendations"];
    let top = &recs["items"][0];
    let event = json!({
        "app_id": recs["new_app_id"],
        "mode": "rescore",
        "items": [{"feature_id": top["feature_id"], "user_rel": top["relevance"].as_f64().unwrap() / 2.0}],
    });
    let (status, body, _) = call(
        &r,
        "POST",
        "/v1/feedback",
        Some(json!({"session_id": session["session_id"], "event": event})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["retrained"], true);

    // rebuild the same model from module calls
    let kb = reuse_kb();
    let store = store();
    let rec = Recommender::new(&kb, &store);
    let set = rec
        .recommend(
            &ApplicationProfile::from_json_str(&profile().to_string()).unwrap(),
            Policy::Conservative,
        )
        .unwrap();
    let fb: fspl_core::FeedbackEvent = serde_json::from_value(event).unwrap();
    let outcome =
        fspl_core::feedback::process_feedback(&fb, &set, fspl_core::NewSimRule::Scaled, 0.05)
            .unwrap();
    let mut model = SimilarityModel::bootstrap(rec.pair_samples().unwrap());
    model.refit_with(outcome.training_pairs(&set)).unwrap();
    assert_eq!(state.model(), model);

    for s in body["updated_recommendations"]["similarities"]
        .as_array()
        .unwrap()
    {
        let components: Vec<f64> =
            serde_json::from_value::<fspl_core::ProximityVector>(s["proximity"].clone())
                .unwrap()
                .components();
        // components pass through JSON, so allow float round-trip noise
        assert!((s["alpha"].as_f64().unwrap() - model.predict(&components).unwrap()).abs() < 1e-12);
    }
}

#[tokio::test]
async fn static_assets_are_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>review</h1>").unwrap();
    let state = AppState::new(reuse_kb(), store(), None, ServiceConfig::default()).unwrap();
    let r = router(state, Some(dir.path()));
    let (status, _, text) = call(&r, "GET", "/index.html", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(text, "<h1>review</h1>");
    assert_eq!(
        call(&r, "GET", "/v1/applications", None).await.0,
        StatusCode::OK
    );
}
