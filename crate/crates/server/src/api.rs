//! HTTP review service over file-backed sessions.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use gen_core::annotation::{load_corpus, load_seeds_with};
use gen_core::feedback::{ReviewAction, ReviewDecision, SimKind, WeighingConfig, WeighingStrategy};
use gen_core::generation::MatchStrategy;
use gen_core::metrics::Reference;
use gen_core::orchestration::{session_report, BatchStats, Event, SessionConfig, SessionStatus};
use gen_core::persistence::{PersistentSession, SessionStore};
use gen_core::similarity::EquivFunction;
use gen_core::text;
use gen_core::Error;

pub const DEFAULT_WMA_TH: f64 = 0.8;
pub const DEFAULT_WMA_PENALTY: f64 = 0.2;
pub const DEFAULT_WMA_BONUS: f64 = 0.1;
pub const DEFAULT_EWAF_PENALTY: f64 = 0.1;
pub const DEFAULT_TOP: [usize; 3] = [5, 10, 20];

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: json!({ "error": message.into() }),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::NotFound(_) => ApiError::new(StatusCode::NOT_FOUND, message),
            Error::Conflict(_) | Error::Finished => ApiError::new(StatusCode::CONFLICT, message),
            Error::Undecided(ids) => ApiError {
                status: StatusCode::CONFLICT,
                body: json!({ "error": message, "undecided": ids }),
            },
            Error::Invalid { .. }
            | Error::Config(_)
            | Error::Json { .. }
            | Error::SchemaVersion { .. }
            | Error::Resource { .. }
            | Error::UnknownSynset(_)
            | Error::Empty(_) => ApiError::unprocessable(message),
            Error::Io { .. } => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Sessions are loaded lazily and each sits behind its own lock, so writes
/// to one session are serialized without blocking the others.
pub struct AppState {
    store: SessionStore,
    sessions: Mutex<HashMap<String, Arc<Mutex<PersistentSession>>>>,
}

impl AppState {
    pub fn new(data_dir: impl Into<PathBuf>) -> gen_core::Result<Arc<Self>> {
        Ok(Arc::new(AppState {
            store: SessionStore::open(data_dir)?,
            sessions: Mutex::new(HashMap::new()),
        }))
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<PersistentSession>>> {
        let mut map = self.sessions.lock().expect("session map lock");
        if let Some(s) = map.get(id) {
            return Ok(s.clone());
        }
        let loaded = Arc::new(Mutex::new(self.store.load(id)?));
        map.insert(id.to_string(), loaded.clone());
        Ok(loaded)
    }
}

/// Optional overrides of the session configuration.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRequest {
    pub batch_size: Option<usize>,
    pub shuffle_seed: Option<u64>,
    pub strategy: Option<WeighingStrategy>,
    pub sim: Option<SimKind>,
    pub th: Option<f64>,
    pub penalty: Option<f64>,
    pub bonus: Option<f64>,
    pub strategies: Option<Vec<MatchStrategy>>,
    pub equivalences: Option<Vec<EquivFunction>>,
    pub harvest: Option<bool>,
    pub prune: Option<bool>,
}

impl ConfigRequest {
    /// Builds the configuration plus warnings for ignored parameters.
    pub fn build(&self) -> gen_core::Result<(SessionConfig, Vec<String>)> {
        let mut warnings = Vec::new();
        let weighing = match self.strategy.unwrap_or(WeighingStrategy::Ewaf) {
            WeighingStrategy::Wma => WeighingConfig::wma(
                self.sim.unwrap_or(SimKind::Lev),
                self.th.unwrap_or(DEFAULT_WMA_TH),
                self.penalty.unwrap_or(DEFAULT_WMA_PENALTY),
                self.bonus.unwrap_or(DEFAULT_WMA_BONUS),
            ),
            WeighingStrategy::Ewaf => {
                for (name, v) in [("th", self.th), ("bonus", self.bonus)] {
                    if v.is_some() {
                        let w = format!("{name} is not used by EWAF and was ignored");
                        warn!("{w}");
                        warnings.push(w);
                    }
                }
                WeighingConfig::ewaf(self.sim.unwrap_or(SimKind::Overlap), self.penalty.unwrap_or(DEFAULT_EWAF_PENALTY))
            }
        };
        let mut cfg = SessionConfig {
            weighing,
            shuffle_seed: self.shuffle_seed,
            ..SessionConfig::default()
        };
        if let Some(n) = self.batch_size {
            cfg.batch_size = n;
        }
        if let Some(s) = &self.strategies {
            cfg.strategies = s.clone();
        }
        if let Some(e) = &self.equivalences {
            cfg.equiv.enabled = e.clone();
        }
        if let Some(h) = self.harvest {
            cfg.harvest = h;
        }
        if let Some(p) = self.prune {
            cfg.prune = p;
        }
        cfg.validate()?;
        Ok((cfg, warnings))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub corpus: PathBuf,
    pub seeds: PathBuf,
    #[serde(default)]
    pub resources: Option<PathBuf>,
    #[serde(default)]
    pub reference: Option<PathBuf>,
    #[serde(default)]
    pub config: ConfigRequest,
}

/// A correction given either as text or as a token list.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CorrectedText {
    Text(String),
    Tokens(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionRequest {
    pub action: ReviewAction,
    #[serde(default)]
    pub corrected_text: Option<CorrectedText>,
    #[serde(default)]
    pub type_changed: bool,
}

#[derive(Debug, Deserialize)]
pub struct ReportQuery {
    pub top: Option<String>,
}

#[derive(Debug, Serialize)]
struct QuestionView {
    id: String,
    text: String,
    answer: String,
    sentence_id: String,
    pattern_id: String,
    strategy: MatchStrategy,
    rank_score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decision: Option<ReviewDecision>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/batch", get(get_batch))
        .route("/sessions/{id}/questions/{qid}/decision", post(post_decision))
        .route("/sessions/{id}/advance", post(post_advance))
        .route("/sessions/{id}/patterns", get(get_patterns))
        .route("/sessions/{id}/report", get(get_report))
        .with_state(state)
}

fn read_input<T>(what: &str, path: &Path, f: impl FnOnce(&Path) -> gen_core::Result<T>) -> ApiResult<T> {
    if !path.is_file() {
        return Err(ApiError::unprocessable(format!("{what} file {} not found", path.display())));
    }
    f(path).map_err(ApiError::from)
}

async fn create_session(
    State(app): State<Arc<AppState>>,
    Json(req): Json<CreateSession>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let (cfg, warnings) = req.config.build()?;
    let corpus = read_input("corpus", &req.corpus, |p| load_corpus(p))?;
    let seeds = read_input("seeds", &req.seeds, |p| load_seeds_with(p, &corpus, &cfg.wh_words))?;
    let reference = match &req.reference {
        Some(p) => Some(read_input("reference", p, |p| Reference::load(p))?),
        None => None,
    };
    if let Some(d) = &req.resources {
        if !d.is_dir() {
            return Err(ApiError::unprocessable(format!("resource directory {} not found", d.display())));
        }
    }
    let app2 = app.clone();
    let ps = tokio::task::spawn_blocking(move || app2.store.create(corpus, seeds, reference, req.resources, cfg))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let id = ps.id().to_string();
    let questions = ps.session().current_batch().map_or(0, |b| b.questions.len());
    let batches = ps.session().context().plan.len();
    app.sessions
        .lock()
        .expect("session map lock")
        .insert(id.clone(), Arc::new(Mutex::new(ps)));
    Ok((
        StatusCode::CREATED,
        Json(json!({ "id": id, "batch": 1, "batches": batches, "questions": questions, "warnings": warnings })),
    ))
}

fn status_name(s: SessionStatus) -> &'static str {
    match s {
        SessionStatus::Reviewing => "reviewing",
        SessionStatus::Complete => "complete",
    }
}

fn summary(ps: &PersistentSession) -> Value {
    let s = ps.session();
    let st = s.state();
    let (pending, decided) = s
        .current_batch()
        .map_or((0, 0), |b| (b.undecided().len(), b.decisions.len()));
    json!({
        "id": ps.id(),
        "status": status_name(st.status),
        "batch": s.current_batch().map(|b| b.index + 1),
        "batches": s.context().plan.len(),
        "pending": pending,
        "decided": decided,
        "patterns": st.pool.len(),
        "config": ps.header.config,
        "stats": st.stats,
    })
}

async fn get_session(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let ps = s.lock().expect("session lock");
    Ok(Json(summary(&ps)))
}

async fn get_batch(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let ps = s.lock().expect("session lock");
    let session = ps.session();
    let status = status_name(session.state().status);
    let Some(b) = session.current_batch() else {
        return Ok(Json(json!({ "status": status, "batch": null, "sentences": [], "questions": [] })));
    };
    let by_id: HashMap<&str, String> = session
        .context()
        .corpus
        .iter()
        .map(|s| (s.id.as_str(), s.text()))
        .collect();
    let sentences: Vec<Value> = b
        .sentence_ids
        .iter()
        .map(|id| json!({ "id": id, "text": by_id.get(id.as_str()) }))
        .collect();
    let questions: Vec<QuestionView> = b
        .questions
        .iter()
        .map(|q| QuestionView {
            id: q.id.clone(),
            text: q.question_text(),
            answer: q.answer_text(),
            sentence_id: q.sentence_id.clone(),
            pattern_id: q.pattern_id.clone(),
            strategy: q.strategy,
            rank_score: q.rank_score,
            decision: b.decision(&q.id).cloned(),
        })
        .collect();
    Ok(Json(json!({
        "status": status,
        "batch": b.index + 1,
        "sentences": sentences,
        "questions": questions,
    })))
}

async fn post_decision(
    State(app): State<Arc<AppState>>,
    UrlPath((id, qid)): UrlPath<(String, String)>,
    Json(req): Json<DecisionRequest>,
) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let mut ps = s.lock().expect("session lock");
    let known = ps
        .session()
        .current_batch()
        .and_then(|b| b.questions.iter().find(|q| q.id == qid).cloned());
    let Some(q) = known else {
        return Err(ApiError::new(StatusCode::NOT_FOUND, format!("question `{qid}` is not pending")));
    };
    let corrected_text = match (req.action, req.corrected_text) {
        (ReviewAction::Discarded, Some(_)) => {
            return Err(ApiError::unprocessable("a discarded question takes no corrected_text"));
        }
        (ReviewAction::Discarded, None) => None,
        (_, Some(CorrectedText::Text(t))) => Some(text::tokenize(&t)),
        (_, Some(CorrectedText::Tokens(t))) => Some(t),
        (ReviewAction::Kept, None) => Some(q.text.clone()),
        (ReviewAction::Edited, None) => return Err(ApiError::unprocessable("an edit needs corrected_text")),
    };
    let decision = ReviewDecision {
        question_id: qid.clone(),
        action: req.action,
        corrected_text,
        type_changed: req.type_changed,
    };
    let recorded = ps.submit(decision)?.is_some();
    Ok(Json(json!({ "question_id": qid, "recorded": recorded })))
}

async fn post_advance(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let out = tokio::task::spawn_blocking(move || -> ApiResult<Value> {
        let mut ps = s.lock().expect("session lock");
        let Event::Advanced {
            batch,
            harvested,
            pruned,
            stats,
            next,
            ..
        } = ps.advance()?
        else {
            unreachable!("advance yields an Advanced event");
        };
        let mut body = json!({
            "batch": batch + 1,
            "columns": BatchStats::COLUMNS,
            "stats": stats,
            "harvested": harvested.len(),
            "pruned": pruned,
            "next_batch": next.as_ref().map(|n| n.batch + 1),
            "status": status_name(ps.session().state().status),
        });
        if next.is_none() {
            let reference = ps.reference()?;
            let report = session_report(
                ps.session().state(),
                reference.as_ref(),
                &DEFAULT_TOP,
                Some(&ps.session().context().resources.embeddings).filter(|t| !t.is_empty()),
            )?;
            body["report"] = serde_json::to_value(&report).expect("report serializes");
        }
        Ok(body)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(out))
}

async fn get_patterns(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let ps = s.lock().expect("session lock");
    let patterns: Vec<Value> = ps
        .session()
        .state()
        .pool
        .iter()
        .map(|p| {
            json!({
                "id": p.id,
                "seed_id": p.seed_id,
                "iteration": p.iteration,
                "question": p.question_text(),
                "predicate": p.pa.predicate.surface,
                "w": p.weight.w,
                "history": p.weight.history,
            })
        })
        .collect();
    Ok(Json(json!({ "patterns": patterns })))
}

pub fn parse_cuts(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("bad cut `{t}`"))
        })
        .collect()
}

async fn get_report(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<ReportQuery>,
) -> ApiResult<Json<Value>> {
    let cuts = match q.top.as_deref() {
        Some(t) => parse_cuts(t).map_err(ApiError::unprocessable)?,
        None => DEFAULT_TOP.to_vec(),
    };
    let s = app.session(&id)?;
    let ps = s.lock().expect("session lock");
    let reference = ps.reference()?;
    let table = Some(&ps.session().context().resources.embeddings).filter(|t| !t.is_empty());
    let report = session_report(ps.session().state(), reference.as_ref(), &cuts, table)?;
    Ok(Json(json!({
        "columns": BatchStats::COLUMNS,
        "report": report,
        "text": report.render(),
    })))
}
