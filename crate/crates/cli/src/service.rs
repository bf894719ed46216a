//! JSON API under `/v1`, with per-recommendation sessions that accept feedback.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use fspl_core::corpus::parse_conll;
use fspl_core::feedback::process_feedback;
use fspl_core::lang::parse;
use fspl_core::{
    ApplicationProfile, ChangeLedger, EmbeddingStore, Error, Extractor, FeatureInput,
    FeedbackEvent, KnowledgeBase, NewSimRule, Policy, RecommendationSet, Recommender,
    SimilarityModel, Thesaurus,
};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Knowledge base file rewritten after every accepted application.
    pub kb_path: Option<PathBuf>,
    pub epsilon: f64,
    pub rule: NewSimRule,
    pub sessions_path: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            kb_path: None,
            epsilon: fspl_core::feedback::DEFAULT_EPSILON,
            rule: NewSimRule::Scaled,
            sessions_path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub profile: ApplicationProfile,
    pub policy: Policy,
    /// Incremented each time feedback replaces the recommendations.
    pub version: u64,
    pub kb_generation: u64,
    pub recommendations: RecommendationSet,
    pub ledger: ChangeLedger,
}

struct Shared {
    kb: KnowledgeBase,
    /// Bumped on every knowledge-base change; older sessions become stale.
    kb_generation: u64,
    model: SimilarityModel,
    sessions: HashMap<String, Session>,
}

struct Inner {
    store: EmbeddingStore,
    thesaurus: Option<Thesaurus>,
    config: ServiceConfig,
    shared: RwLock<Shared>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(
        kb: KnowledgeBase,
        store: EmbeddingStore,
        thesaurus: Option<Thesaurus>,
        config: ServiceConfig,
    ) -> fspl_core::Result<Self> {
        let model = SimilarityModel::bootstrap(Self::pairs(&kb, &store, thesaurus.as_ref())?);
        Ok(AppState(Arc::new(Inner {
            store,
            thesaurus,
            config,
            shared: RwLock::new(Shared {
                kb,
                kb_generation: 0,
                model,
                sessions: HashMap::new(),
            }),
        })))
    }

    fn pairs(
        kb: &KnowledgeBase,
        store: &EmbeddingStore,
        thesaurus: Option<&Thesaurus>,
    ) -> fspl_core::Result<Vec<(Vec<f64>, f64)>> {
        let mut rec = Recommender::new(kb, store);
        if let Some(t) = thesaurus {
            rec = rec.with_thesaurus(t);
        }
        rec.pair_samples()
    }

    fn recommender<'a>(
        &'a self,
        kb: &'a KnowledgeBase,
        model: &'a SimilarityModel,
    ) -> Recommender<'a> {
        let mut rec = Recommender::new(kb, &self.0.store);
        if let Some(t) = &self.0.thesaurus {
            rec = rec.with_thesaurus(t);
        }
        if model.is_fitted() {
            rec = rec.with_model(model);
        }
        rec
    }

    /// Current similarity model.
    pub fn model(&self) -> SimilarityModel {
        self.0.shared.read().expect("lock").model.clone()
    }

    pub fn knowledge_base(&self) -> KnowledgeBase {
        self.0.shared.read().expect("lock").kb.clone()
    }

    pub fn session(&self, id: &str) -> Option<Session> {
        self.0
            .shared
            .read()
            .expect("lock")
            .sessions
            .get(id)
            .cloned()
    }

    /// Write all sessions to the configured snapshot file, if any.
    pub fn snapshot_sessions(&self) -> std::io::Result<()> {
        let Some(path) = &self.0.config.sessions_path else {
            return Ok(());
        };
        let shared = self.0.shared.read().expect("lock");
        let mut sessions: Vec<&Session> = shared.sessions.values().collect();
        sessions.sort_by(|a, b| a.session_id.cmp(&b.session_id));
        let text = serde_json::to_string_pretty(&sessions).expect("sessions serialize");
        std::fs::write(path, text + "\n")
    }
}

pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            kind,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_request", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, kind) = match &e {
            Error::EmptyKnowledgeBase => (StatusCode::UNPROCESSABLE_ENTITY, "empty_knowledge_base"),
            Error::UnknownApplication(_) | Error::UnknownFeature(_) => {
                (StatusCode::NOT_FOUND, "not_found")
            }
            Error::DuplicateApplication(_) | Error::DuplicateFeatureId(_) => {
                (StatusCode::CONFLICT, "conflict")
            }
            Error::Io { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
            Error::MetricMismatch { .. } => (StatusCode::BAD_REQUEST, "metric_mismatch"),
            Error::Spec(_) => (StatusCode::BAD_REQUEST, "spec_error"),
            Error::Schema { .. } => (StatusCode::BAD_REQUEST, "schema_error"),
            _ => (StatusCode::BAD_REQUEST, "invalid_request"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": self.kind, "message": self.message })),
        )
            .into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("request body: {e}")))
}

fn profile_from(value: &Value) -> ApiResult<ApplicationProfile> {
    let profile = ApplicationProfile::from_json_str(&value.to_string())?;
    profile.validate()?;
    Ok(profile)
}

/// Profile and features of the `i`-th application.
pub fn application_view(kb: &KnowledgeBase, i: usize) -> Value {
    let features: Vec<Value> = kb
        .catalog()
        .iter()
        .enumerate()
        .filter(|(j, _)| kb.relevance(i, *j) > 0.0)
        .map(|(j, c)| json!({ "feature_id": c.feature_id, "fspl_source": c.fspl_source, "relevance": kb.relevance(i, j) }))
        .collect();
    json!({ "profile": kb.applications()[i], "features": features })
}

#[derive(Deserialize)]
struct ExtractRequest {
    /// Five-column annotated text.
    corpus: String,
    spec: String,
}

async fn extract(State(state): State<AppState>, bytes: Bytes) -> ApiResult<Response> {
    let req: ExtractRequest = body(&bytes)?;
    let spec = parse(&req.spec).map_err(Error::from)?;
    let corpus = parse_conll(&req.corpus)?;
    let matrix = tokio::task::spawn_blocking(move || {
        Extractor::new(&spec)
            .with_embeddings(&state.0.store)
            .run(&corpus)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok((
        [(header::CONTENT_TYPE, "application/x-ndjson")],
        matrix.to_jsonl(),
    )
        .into_response())
}

#[derive(Deserialize)]
struct NewApplication {
    profile: Value,
    #[serde(default)]
    features: Vec<FeatureInput>,
}

async fn add_application(State(state): State<AppState>, bytes: Bytes) -> ApiResult<Response> {
    let req: NewApplication = body(&bytes)?;
    let profile = profile_from(&req.profile)?;
    let id = profile.id.clone();
    let mut shared = state.0.shared.write().expect("lock");
    let mut kb = shared.kb.clone();
    kb.add_application(profile, req.features)?;
    if let Some(path) = &state.0.config.kb_path {
        kb.save(path)?;
    }
    if !shared.model.is_fitted() {
        shared.model = SimilarityModel::bootstrap(AppState::pairs(
            &kb,
            &state.0.store,
            state.0.thesaurus.as_ref(),
        )?);
    }
    let view = application_view(&kb, kb.m() - 1);
    shared.kb = kb;
    shared.kb_generation += 1;
    log::info!("added application {id}");
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn list_applications(State(state): State<AppState>) -> Json<Value> {
    let shared = state.0.shared.read().expect("lock");
    Json(json!(shared.kb.applications()))
}

async fn show_application(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Json<Value>> {
    let shared = state.0.shared.read().expect("lock");
    let i = shared
        .kb
        .app_index(&id)
        .ok_or(Error::UnknownApplication(id))?;
    Ok(Json(application_view(&shared.kb, i)))
}

#[derive(Deserialize)]
struct RecommendRequest {
    profile: Value,
    #[serde(default = "default_policy")]
    policy: String,
}

fn default_policy() -> String {
    Policy::Probable.as_str().into()
}

async fn recommend(State(state): State<AppState>, bytes: Bytes) -> ApiResult<Json<Value>> {
    let req: RecommendRequest = body(&bytes)?;
    let policy: Policy = req.policy.parse().map_err(ApiError::bad_request)?;
    let mut shared = state.0.shared.write().expect("lock");
    if shared.kb.is_empty() {
        return Err(Error::EmptyKnowledgeBase.into());
    }
    let profile = profile_from(&req.profile)?;
    let set = state
        .recommender(&shared.kb, &shared.model)
        .recommend(&profile, policy)?;
    let session = Session {
        session_id: uuid::Uuid::new_v4().to_string(),
        profile,
        policy,
        version: 0,
        kb_generation: shared.kb_generation,
        recommendations: set,
        ledger: ChangeLedger::new(),
    };
    let response = json!({
        "session_id": session.session_id,
        "version": session.version,
        "recommendations": session.recommendations,
    });
    shared.sessions.insert(session.session_id.clone(), session);
    Ok(Json(response))
}

#[derive(Deserialize)]
struct FeedbackRequest {
    session_id: String,
    /// Version of the recommendations the event was made against.
    #[serde(default)]
    version: Option<u64>,
    event: FeedbackEvent,
}

async fn feedback(State(state): State<AppState>, bytes: Bytes) -> ApiResult<Json<Value>> {
    let req: FeedbackRequest = body(&bytes)?;
    let mut guard = state.0.shared.write().expect("lock");
    let shared = &mut *guard;
    let session = shared.sessions.get(&req.session_id).ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "not_found",
            format!("unknown session {:?}", req.session_id),
        )
    })?;

    let conflict = |msg: String| ApiError::new(StatusCode::CONFLICT, "stale_session", msg);
    if req.event.app_id != session.profile.id {
        return Err(conflict(format!(
            "event is for {:?}, session is for {:?}",
            req.event.app_id, session.profile.id
        )));
    }
    if session.kb_generation != shared.kb_generation {
        return Err(conflict(
            "knowledge base changed since these recommendations".into(),
        ));
    }
    if let Some(v) = req.version.filter(|v| *v != session.version) {
        return Err(conflict(format!(
            "feedback is for version {v}, current is {}",
            session.version
        )));
    }

    let outcome = process_feedback(
        &req.event,
        &session.recommendations,
        state.0.config.rule,
        state.0.config.epsilon,
    )?;
    let pairs = outcome.training_pairs(&session.recommendations);
    let mut retrained = false;
    if !pairs.is_empty() {
        let mut model = shared.model.clone();
        retrained = model.refit_with(pairs)?;
        shared.model = model;
    }
    let (profile, policy) = (session.profile.clone(), session.policy);
    let updated = state
        .recommender(&shared.kb, &shared.model)
        .recommend(&profile, policy)?;

    let session = shared.sessions.get_mut(&req.session_id).expect("present");
    session.recommendations = updated;
    session.ledger = outcome.ledger.clone();
    session.version += 1;
    Ok(Json(json!({
        "new_sim": outcome.new_sim,
        "retrained": retrained,
        "ledger": outcome.ledger,
        "skipped": outcome.skipped,
        "model_version": shared.model.version(),
        "version": session.version,
        "updated_recommendations": session.recommendations,
    })))
}

async fn proximity(
    State(state): State<AppState>,
    UrlPath((a, b)): UrlPath<(String, String)>,
) -> ApiResult<Json<Value>> {
    let shared = state.0.shared.read().expect("lock");
    let app = |id: &String| {
        shared
            .kb
            .application(id)
            .ok_or_else(|| Error::UnknownApplication(id.clone()))
    };
    let (pa, pb) = (app(&a)?, app(&b)?);
    let rec = state.recommender(&shared.kb, &shared.model);
    let pv = rec.proximity(pa, pb)?;
    let similarity = rec.similarity(&pv)?;
    Ok(Json(
        json!({ "a": a, "b": b, "alpha": pv.alpha(), "similarity": similarity, "proximity": pv }),
    ))
}

pub fn router(state: AppState, assets: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/v1/extract", post(extract))
        .route(
            "/v1/applications",
            post(add_application).get(list_applications),
        )
        .route("/v1/applications/:id", get(show_application))
        .route("/v1/recommend", post(recommend))
        .route("/v1/feedback", post(feedback))
        .route("/v1/proximity/:a/:b", get(proximity))
        .with_state(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
