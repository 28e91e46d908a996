//! JSON-over-HTTP API for the interactive explorer.
//!
//! Sessions live in memory. Each one sits behind its own lock, so mutations
//! of one session are applied in arrival order while different sessions
//! proceed concurrently. Enumerated classes are cached and shared read-only.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use qml_core::analysis::{zero_part, zero_part_cycles, zero_part_valency};
use qml_core::enumeration::{mutation_class, MutationClass};
use qml_core::json::{
    cycle_check_to_value, error_to_value, quiver_from_str, quiver_to_value, valency_check_to_value, verdict_to_value,
    zero_part_to_value,
};
use qml_core::mutation::MutationStep;
use qml_core::{is_member, linear_quiver, mutate_power, ColouredQuiver, QuiverError};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{class_value, vertex_index};
use crate::{CliError, CliResult, Report};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self { status, body: json!({"error": message.into()}) }
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session {id:?}"))
    }
}

impl From<QuiverError> for ApiError {
    fn from(e: QuiverError) -> Self {
        let status = match &e {
            QuiverError::Invalid(_)
            | QuiverError::Parse(_)
            | QuiverError::VertexOutOfRange { .. }
            | QuiverError::ColourOutOfRange { .. }
            | QuiverError::Precondition(_) => StatusCode::BAD_REQUEST,
            QuiverError::NotMember(_) | QuiverError::NotSimple | QuiverError::AlreadyLinear => StatusCode::CONFLICT,
            QuiverError::LimitExceeded { .. }
            | QuiverError::BudgetExceeded { .. }
            | QuiverError::MultiplicityOverflow => StatusCode::UNPROCESSABLE_ENTITY,
            QuiverError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        Self { status, body: error_to_value(&e) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Clone)]
pub struct Session {
    pub id: u64,
    pub initial: ColouredQuiver,
    pub current: ColouredQuiver,
    /// The quiver before each step, and the step.
    pub history: Vec<(ColouredQuiver, MutationStep)>,
}

impl Session {
    fn to_value(&self) -> ApiResult<Value> {
        let member = is_member(&self.current)?.member;
        let history: Vec<Value> =
            self.history.iter().map(|(_, s)| json!({"vertex": s.vertex + 1, "power": s.power})).collect();
        Ok(json!({
            "id": self.id.to_string(),
            "m": self.current.m(),
            "n": self.current.n(),
            "quiver": quiver_to_value(&self.current),
            "initial": quiver_to_value(&self.initial),
            "history": history,
            "member": member,
        }))
    }
}

pub struct AppState {
    sessions: RwLock<HashMap<u64, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    classes: RwLock<HashMap<(usize, u32), Arc<Value>>>,
    class_limit: usize,
}

impl AppState {
    pub fn new(class_limit: usize) -> Self {
        Self {
            sessions: RwLock::new(HashMap::new()),
            next_id: AtomicU64::new(1),
            classes: RwLock::new(HashMap::new()),
            class_limit,
        }
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        let key: u64 = id.parse().map_err(|_| ApiError::not_found(id))?;
        self.sessions.read().expect("session map poisoned").get(&key).cloned().ok_or_else(|| ApiError::not_found(id))
    }
}

type Shared = Arc<AppState>;

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}", get(get_session))
        .route("/session/{id}/mutate", post(mutate_session))
        .route("/session/{id}/undo", post(undo_session))
        .route("/session/{id}/classify", get(classify_session))
        .route("/session/{id}/zero-part", get(zero_part_session))
        .route("/class", get(class_representatives))
        .with_state(state)
}

async fn create_session(State(st): State<Shared>, body: String) -> ApiResult<(StatusCode, Json<Value>)> {
    let q = quiver_from_str(&body)?;
    q.ensure_valid()?;
    let id = st.next_id.fetch_add(1, Ordering::Relaxed);
    let session = Session { id, initial: q.clone(), current: q, history: Vec::new() };
    let body = session.to_value()?;
    st.sessions.write().expect("session map poisoned").insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(body)))
}

async fn get_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let s = s.lock().expect("session poisoned");
    Ok(Json(s.to_value()?))
}

#[derive(Debug, Deserialize)]
struct MutateBody {
    vertex: usize,
    #[serde(default = "one")]
    power: u32,
}

fn one() -> u32 {
    1
}

async fn mutate_session(State(st): State<Shared>, Path(id): Path<String>, body: String) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let req: MutateBody = serde_json::from_str(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("bad mutate body: {e}")))?;
    let mut s = s.lock().expect("session poisoned");
    let m = s.current.m();
    let v = vertex_index(req.vertex, s.current.n())?;
    if req.power == 0 || req.power > m + 1 {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("power {} is not in 1..={}", req.power, m + 1)));
    }
    let next = mutate_power(&s.current, v, u64::from(req.power))?;
    let prev = std::mem::replace(&mut s.current, next);
    s.history.push((prev, MutationStep::new(v, req.power)));
    Ok(Json(s.to_value()?))
}

/// Undoes the last step `mu^t` with `mu^(m+1-t)` when the step started from a
/// class member, where `mu^(m+1)` is the identity; otherwise restores the
/// snapshot. Membership of the result is not enough: mutation is not
/// injective outside the class, and a non-member can mutate into it.
async fn undo_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let mut s = s.lock().expect("session poisoned");
    let Some((prev, step)) = s.history.pop() else {
        return Err(ApiError::new(StatusCode::CONFLICT, "nothing to undo"));
    };
    let m = s.current.m();
    let (restored, how) = if is_member(&prev)?.member {
        (mutate_power(&s.current, step.vertex, u64::from(m + 1 - step.power))?, "inverse")
    } else {
        (prev, "snapshot")
    };
    s.current = restored;
    let mut body = s.to_value()?;
    body["undo"] = json!(how);
    Ok(Json(body))
}

async fn classify_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let q = s.lock().expect("session poisoned").current.clone();
    Ok(Json(verdict_to_value(&is_member(&q)?)))
}

/// Member-only: the 0-coloured part with its cycle and valency checks.
async fn zero_part_session(State(st): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = st.session(&id)?;
    let q = s.lock().expect("session poisoned").current.clone();
    let verdict = is_member(&q)?;
    if !verdict.member {
        return Err(ApiError {
            status: StatusCode::CONFLICT,
            body: json!({
                "error": "the 0-coloured part checks need a class member",
                "verdict": verdict_to_value(&verdict),
            }),
        });
    }
    let mut body = zero_part_to_value(&zero_part(&q)?);
    body["cycle_check"] = cycle_check_to_value(&zero_part_cycles(&q)?);
    body["valency_check"] = valency_check_to_value(&zero_part_valency(&q)?);
    Ok(Json(body))
}

#[derive(Debug, Deserialize)]
struct ClassQuery {
    n: usize,
    m: u32,
}

async fn class_representatives(
    State(st): State<Shared>,
    query: Result<Query<ClassQuery>, QueryRejection>,
) -> ApiResult<Json<Value>> {
    let Query(ClassQuery { n, m }) = query.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    if let Some(v) = st.classes.read().expect("class cache poisoned").get(&(n, m)) {
        return Ok(Json((**v).clone()));
    }
    let limit = st.class_limit;
    let class: MutationClass = tokio::task::spawn_blocking(move || {
        let seed = linear_quiver(n, m, None)?;
        mutation_class(&seed, limit)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let value = Arc::new(class_value(&class));
    st.classes.write().expect("class cache poisoned").insert((n, m), Arc::clone(&value));
    Ok(Json((*value).clone()))
}

/// Binds `host:port` and serves until the process is stopped.
pub fn serve_blocking(host: &str, port: u16, class_limit: usize) -> CliResult<Report> {
    let rt = tokio::runtime::Runtime::new().map_err(CliError::Service)?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port)).await.map_err(CliError::Service)?;
        let addr = listener.local_addr().map_err(CliError::Service)?;
        eprintln!("listening on http://{addr}");
        axum::serve(listener, router(Arc::new(AppState::new(class_limit)))).await.map_err(CliError::Service)?;
        Ok(Report::ok(json!({"stopped": true}), "service stopped"))
    })
}
