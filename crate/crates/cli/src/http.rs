//! HTTP service. Sessions live in memory; each session is locked for the
//! duration of one request, so requests on one session are serialized while
//! distinct sessions proceed independently.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use chunksel_core::decision::{Criterion, DataNature};
use chunksel_core::prioritization::{
    recommend_technique, SelectionReport, ThresholdSchedule, DEFAULT_REQUIRED_SEPARATION,
};
use chunksel_core::weighting::{
    Answer, ConsistencyReport, ElicitationSession, Question, Transcript, WeightVector, WeightingTechnique,
};
use chunksel_core::{
    run_selection, Error as CoreError, ProjectProfile, Repository, SelectionRequest, Technique, Typology,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as JsonValue};

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub context: JsonValue,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>, context: JsonValue) -> Self {
        ApiError {
            status,
            code: code.to_owned(),
            message: message.into(),
            context,
        }
    }

    fn unknown_session(id: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "unknown_session",
            format!("no session `{id}`"),
            json!({ "session": id }),
        )
    }

    fn transition(stage: Stage, expected: &str, message: &str) -> Self {
        Self::new(
            StatusCode::CONFLICT,
            "invalid_transition",
            message,
            json!({ "stage": stage, "expected": expected }),
        )
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let status = match &e {
            CoreError::Parse { .. } => StatusCode::BAD_REQUEST,
            CoreError::SessionComplete => StatusCode::CONFLICT,
            CoreError::Io(_) | CoreError::Csv(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let context = match &e {
            CoreError::Parse { line, column, .. } => json!({ "line": line, "column": column }),
            CoreError::MissingCell { alternative, criterion }
            | CoreError::UndescribedCell { alternative, criterion } => {
                json!({ "alternative": alternative, "criterion": criterion })
            }
            CoreError::WeightMismatch { expected, found } => json!({ "expected": expected, "found": found }),
            CoreError::InvalidCriterion { criterion, .. } => json!({ "criterion": criterion }),
            CoreError::InvalidProfile(issues) | CoreError::InvalidRepository(issues) => json!({ "issues": issues }),
            CoreError::UnknownCharacteristic(id) | CoreError::UnknownChunk(id) | CoreError::DuplicateCriterion(id) => {
                json!({ "id": id })
            }
            _ => json!({}),
        };
        ApiError::new(status, e.code(), e.to_string(), context)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::new(r.status(), "invalid_body", r.body_text(), json!({}))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error_code": self.code, "message": self.message, "context": self.context });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Where a session stands; each stage unlocks the next request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Created,
    Profiled,
    CriteriaSet,
    Eliciting,
    Weighted,
    Reported,
}

enum Weights {
    None,
    Eliciting(ElicitationSession),
    Ready(WeightVector),
}

struct Session {
    profile: Option<ProjectProfile>,
    criteria: Option<Vec<Criterion>>,
    weights: Weights,
    report: Option<SelectionReport>,
}

impl Session {
    fn stage(&self) -> Stage {
        match (&self.profile, &self.criteria, &self.weights, &self.report) {
            (_, _, _, Some(_)) => Stage::Reported,
            (None, _, _, _) => Stage::Created,
            (Some(_), None, _, _) => Stage::Profiled,
            (_, Some(_), Weights::Eliciting(s), _) if !s.is_complete() => Stage::Eliciting,
            (_, Some(_), Weights::None, _) => Stage::CriteriaSet,
            _ => Stage::Weighted,
        }
    }

    fn criteria(&self) -> ApiResult<&[Criterion]> {
        self.criteria
            .as_deref()
            .ok_or_else(|| ApiError::transition(self.stage(), "criteria", "set criteria first"))
    }
}

#[derive(Clone)]
pub struct AppState {
    repo: Arc<Repository>,
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
}

impl AppState {
    pub fn new(repo: Repository) -> Self {
        AppState {
            repo: Arc::new(repo),
            sessions: Arc::default(),
        }
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }
}

fn with_session<T>(state: &AppState, id: &str, f: impl FnOnce(&mut Session) -> ApiResult<T>) -> ApiResult<T> {
    let s = state.session(id)?;
    let mut guard = s.lock().expect("session lock");
    f(&mut guard)
}

fn report_response(report: &SelectionReport) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], report.to_json()).into_response()
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/typology", get(get_typology))
        .route("/repository", get(get_repository))
        .route("/recommendation", post(post_recommendation))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session).delete(delete_session))
        .route("/sessions/{id}/profile", put(put_profile))
        .route("/sessions/{id}/criteria", put(put_criteria))
        .route("/sessions/{id}/weights", put(put_weights))
        .route("/sessions/{id}/elicitation", post(start_elicitation))
        .route("/sessions/{id}/elicitation/answer", post(answer_elicitation))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/report", get(get_report))
        .route("/sessions/{id}/matrices", get(get_matrices))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, repo: Repository, assets: Option<PathBuf>) -> std::io::Result<()> {
    let mut app = router(AppState::new(repo));
    if let Some(dir) = assets {
        app = app.fallback_service(tower_http::services::ServeDir::new(dir));
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[derive(Deserialize)]
struct TypologyQuery {
    #[serde(default)]
    scope: Option<String>,
}

/// Built-in typology by default; `?scope=repository` adds the extensions the
/// loaded repository declares.
async fn get_typology(State(state): State<AppState>, Query(q): Query<TypologyQuery>) -> Response {
    let t = match q.scope.as_deref() {
        Some("repository") => state.repo.typology().clone(),
        _ => Typology::builtin(),
    };
    ([(header::CONTENT_TYPE, "application/json")], t.to_json()).into_response()
}

async fn get_repository(State(state): State<AppState>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.repo.to_json()).into_response()
}

#[derive(Deserialize)]
struct RecommendBody {
    weighted: bool,
    data_nature: DataNature,
}

async fn post_recommendation(body: Result<Json<RecommendBody>, JsonRejection>) -> ApiResult<Response> {
    let Json(b) = body?;
    Ok(Json(recommend_technique(b.weighted, b.data_nature)).into_response())
}

#[derive(Serialize)]
struct SessionView {
    id: String,
    stage: Stage,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<ProjectProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    criteria: Option<Vec<Criterion>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<WeightVector>,
}

fn view(id: &str, s: &Session) -> SessionView {
    SessionView {
        id: id.to_owned(),
        stage: s.stage(),
        profile: s.profile.clone(),
        criteria: s.criteria.clone(),
        weights: match &s.weights {
            Weights::Ready(w) => Some(w.clone()),
            Weights::Eliciting(e) => e.weights().cloned(),
            Weights::None => None,
        },
    }
}

async fn create_session(State(state): State<AppState>) -> (StatusCode, Json<SessionView>) {
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session {
        profile: None,
        criteria: None,
        weights: Weights::None,
        report: None,
    };
    let v = view(&id, &session);
    state
        .sessions
        .write()
        .expect("session map lock")
        .insert(id, Arc::new(Mutex::new(session)));
    (StatusCode::CREATED, Json(v))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    with_session(&state, &id, |s| Ok(Json(view(&id, s))))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    match state.sessions.write().expect("session map lock").remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::unknown_session(&id)),
    }
}

/// Allowed at any stage; later state is kept except the report.
async fn put_profile(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<ProjectProfile>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let session = state.session(&id)?;
    let Json(profile) = body?;
    state.repo.typology().validate_profile(&profile).into_result()?;
    let mut s = session.lock().expect("session lock");
    s.profile = Some(profile);
    s.report = None;
    Ok(Json(view(&id, &s)))
}

/// Requires a profile. Replacing criteria discards weights and report.
async fn put_criteria(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<Vec<Criterion>>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let session = state.session(&id)?;
    let Json(criteria) = body?;
    let mut s = session.lock().expect("session lock");
    if s.profile.is_none() {
        return Err(ApiError::transition(s.stage(), "profile", "set a profile first"));
    }
    // surfaces unknown or unscorable criteria now rather than at select
    let ids: Vec<&str> = state.repo.ids().collect();
    chunksel_core::decision::build_matrix(&state.repo, &ids, &criteria)?;
    s.criteria = Some(criteria);
    s.weights = Weights::None;
    s.report = None;
    Ok(Json(view(&id, &s)))
}

async fn put_weights(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<WeightVector>, JsonRejection>,
) -> ApiResult<Json<SessionView>> {
    let session = state.session(&id)?;
    let Json(weights) = body?;
    let mut s = session.lock().expect("session lock");
    weights.aligned(s.criteria()?.iter().map(|c| c.id.as_str()))?;
    s.weights = Weights::Ready(weights);
    s.report = None;
    Ok(Json(view(&id, &s)))
}

#[derive(Deserialize)]
struct ElicitationBody {
    technique: String,
    /// Replays a saved transcript instead of starting fresh.
    #[serde(default)]
    transcript: Option<Transcript>,
}

#[derive(Serialize)]
struct ElicitationView {
    technique: WeightingTechnique,
    complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pending: Option<Question>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prompt: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<WeightVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistency: Option<ConsistencyReport>,
    transcript: Transcript,
}

fn elicitation_view(e: &ElicitationSession) -> ElicitationView {
    ElicitationView {
        technique: e.technique(),
        complete: e.is_complete(),
        pending: e.pending().cloned(),
        prompt: e.pending().map(|q| q.to_string()),
        weights: e.weights().cloned(),
        consistency: e.consistency().cloned(),
        transcript: e.transcript().clone(),
    }
}

async fn start_elicitation(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<ElicitationBody>, JsonRejection>,
) -> ApiResult<Json<ElicitationView>> {
    let session = state.session(&id)?;
    let Json(body) = body?;
    let technique: WeightingTechnique = body.technique.parse()?;
    let mut s = session.lock().expect("session lock");
    let ids: Vec<String> = s.criteria()?.iter().map(|c| c.id.clone()).collect();
    let e = match body.transcript {
        Some(t) => {
            if t.technique != technique || t.criteria != ids {
                return Err(ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "transcript_mismatch",
                    "transcript was recorded for another technique or criteria list",
                    json!({ "criteria": ids, "technique": technique }),
                ));
            }
            ElicitationSession::replay(&t)?
        }
        None => ElicitationSession::start(technique, &ids)?,
    };
    let v = elicitation_view(&e);
    s.weights = Weights::Eliciting(e);
    s.report = None;
    Ok(Json(v))
}

#[derive(Deserialize)]
struct AnswerBody {
    answer: Answer,
}

async fn answer_elicitation(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<AnswerBody>, JsonRejection>,
) -> ApiResult<Json<ElicitationView>> {
    let session = state.session(&id)?;
    let Json(body) = body?;
    let mut s = session.lock().expect("session lock");
    let stage = s.stage();
    let Weights::Eliciting(e) = &s.weights else {
        return Err(ApiError::transition(stage, "eliciting", "no elicitation in progress"));
    };
    if e.is_complete() {
        return Err(ApiError::transition(
            stage,
            "eliciting",
            "elicitation is already complete",
        ));
    }
    let next = e.answer(body.answer)?;
    let v = elicitation_view(&next);
    s.weights = Weights::Eliciting(next);
    Ok(Json(v))
}

#[derive(Deserialize)]
struct SelectBody {
    technique: Technique,
    #[serde(default)]
    schedule: Option<ThresholdSchedule>,
    #[serde(default)]
    required_separation: Option<usize>,
}

async fn select(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SelectBody>, JsonRejection>,
) -> ApiResult<Response> {
    let session = state.session(&id)?;
    let Json(body) = body?;
    let mut s = session.lock().expect("session lock");
    let stage = s.stage();
    let weights = match &s.weights {
        Weights::None => None,
        Weights::Ready(w) => Some(w.clone()),
        Weights::Eliciting(e) => match e.weights() {
            Some(w) => Some(w.clone()),
            None => return Err(ApiError::transition(stage, "weighted", "finish the elicitation first")),
        },
    };
    let mut req = SelectionRequest::new(s.criteria()?.to_vec(), body.technique);
    req.weights = weights;
    req.schedule = body.schedule;
    req.profile = s.profile.clone();
    req.required_separation = body.required_separation.unwrap_or(DEFAULT_REQUIRED_SEPARATION);
    let report = run_selection(&state.repo, &req)?;
    let response = report_response(&report);
    s.report = Some(report);
    Ok(response)
}

async fn get_report(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    with_session(&state, &id, |s| match &s.report {
        Some(r) => Ok(report_response(r)),
        None => Err(ApiError::transition(s.stage(), "reported", "run a selection first")),
    })
}

async fn get_matrices(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    with_session(&state, &id, |s| {
        match s.report.as_ref().and_then(|r| r.outranking.as_ref().map(|o| (r, o))) {
            Some((r, o)) => Ok(Json(json!({
                "alternatives": r.alternatives,
                "concordance": o.concordance,
                "discordance": o.discordance,
                "max_discordance": o.max_discordance,
                "least_discordant": o.least_discordant,
            }))
            .into_response()),
            None => Err(ApiError::transition(
                s.stage(),
                "reported",
                "run an outranking selection first",
            )),
        }
    })
}
