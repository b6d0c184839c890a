//! HTTP API over a generator backend.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `GET /api/health` | | `{"status":"ok"}` |
//! | `POST /api/instruction` | field map | `{"instruction"}` |
//! | `POST /api/generate` | field map + `config` | `{"instruction","irt","warnings"}` |
//! | `POST /api/validate` | `{"irt"}` | `{"violations"}` |
//!
//! A field map holds `name`, `about`, `title`, `labels`, `assignees`,
//! `headlines_type`, `headlines` and an optional `summary`. Each field is
//! a value, `"<|EMPTY|>"` or `"<|MASK|>"`; a missing or blank field is
//! masked. List fields take an array or a comma-separated string.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use girt_forge_core::generate::{check_output, DecodingConfig, GenerateError, GeneratorBackend};
use girt_forge_core::instruct::{serialize_instruction, FieldValue, Instruction, EMPTY_TOKEN, MASK_TOKEN};
use girt_forge_core::irt::{parse_irt, validate_irt};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub type SharedBackend = Arc<dyn GeneratorBackend + Send + Sync>;

#[derive(Clone)]
pub struct AppState {
    pub backend: SharedBackend,
    pub default_decoding: DecodingConfig,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.into() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<GenerateError> for ApiError {
    fn from(e: GenerateError) -> Self {
        let status = match e {
            GenerateError::BackendUnavailable(_) => StatusCode::BAD_GATEWAY,
            GenerateError::InvalidBackendOutput(_) => StatusCode::UNPROCESSABLE_ENTITY,
            GenerateError::InvalidConfig(_) => StatusCode::BAD_REQUEST,
        };
        ApiError { status, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ListInput {
    Text(String),
    Items(Vec<String>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldMap {
    pub name: Option<String>,
    pub about: Option<String>,
    pub title: Option<String>,
    pub labels: Option<ListInput>,
    pub assignees: Option<ListInput>,
    pub headlines_type: Option<String>,
    pub headlines: Option<ListInput>,
    pub summary: Option<String>,
    /// Only accepted by `/api/generate`.
    pub config: Option<ConfigOverride>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverride {
    pub max_length: Option<usize>,
    pub min_length: Option<usize>,
    pub top_p: Option<f64>,
    pub top_k: Option<usize>,
}

impl ConfigOverride {
    fn apply(self, base: DecodingConfig) -> DecodingConfig {
        DecodingConfig {
            max_length: self.max_length.unwrap_or(base.max_length),
            min_length: self.min_length.unwrap_or(base.min_length),
            top_p: self.top_p.unwrap_or(base.top_p),
            top_k: self.top_k.unwrap_or(base.top_k),
        }
    }
}

fn text_field(v: Option<&str>) -> FieldValue<String> {
    match v.map(str::trim) {
        None | Some("") => FieldValue::Masked,
        Some(EMPTY_TOKEN) => FieldValue::Empty,
        Some(t) => FieldValue::from_text(t),
    }
}

fn list_field(v: Option<&ListInput>) -> FieldValue<Vec<String>> {
    let items: Vec<String> = match v {
        None => Vec::new(),
        Some(ListInput::Text(t)) => t.split(',').map(str::to_string).collect(),
        Some(ListInput::Items(items)) => items.clone(),
    };
    match FieldValue::from_items(&items) {
        FieldValue::Empty if !items.iter().any(|i| i.trim() == EMPTY_TOKEN) => FieldValue::Masked,
        other => other,
    }
}

impl FieldMap {
    pub fn to_instruction(&self) -> Instruction {
        Instruction {
            name: text_field(self.name.as_deref()),
            about: text_field(self.about.as_deref()),
            title: text_field(self.title.as_deref()),
            labels: list_field(self.labels.as_ref()),
            assignees: list_field(self.assignees.as_ref()),
            headlines_type: text_field(self.headlines_type.as_deref()),
            headlines: list_field(self.headlines.as_ref()),
            summary: self.summary.as_deref().map(str::trim).filter(|s| !s.is_empty() && *s != MASK_TOKEN).map(str::to_string),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateRequest {
    irt: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct GenerateResponse {
    pub instruction: String,
    pub irt: String,
    pub warnings: Vec<String>,
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn instruction(body: Bytes) -> Result<Json<serde_json::Value>, ApiError> {
    let fields: FieldMap = parse_body(&body)?;
    if fields.config.is_some() {
        return Err(ApiError::bad_request("malformed body: unknown field `config`"));
    }
    Ok(Json(json!({ "instruction": serialize_instruction(&fields.to_instruction()) })))
}

async fn generate(State(state): State<AppState>, body: Bytes) -> Result<Json<GenerateResponse>, ApiError> {
    let fields: FieldMap = parse_body(&body)?;
    let config = fields.config.unwrap_or_default().apply(state.default_decoding);
    config.validate().map_err(GenerateError::from)?;
    let ins = fields.to_instruction();
    let backend = state.backend.clone();
    let query = ins.clone();
    let irt = tokio::task::spawn_blocking(move || backend.generate(&query, &config))
        .await
        .map_err(|e| ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, message: e.to_string() })??;
    let warnings = check_output(&irt)?.codes().map(str::to_string).collect();
    Ok(Json(GenerateResponse { instruction: serialize_instruction(&ins), irt, warnings }))
}

async fn validate(body: Bytes) -> Result<Json<serde_json::Value>, ApiError> {
    let req: ValidateRequest = parse_body(&body)?;
    let irt = parse_irt(&req.irt)
        .map_err(|e| ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, message: e.to_string() })?;
    let violations: Vec<&str> = validate_irt(&irt).codes().collect();
    Ok(Json(json!({ "violations": violations })))
}

pub fn router(state: AppState, cors_allowed_origins: &[String]) -> Router {
    let origins: Vec<HeaderValue> = cors_allowed_origins.iter().filter_map(|o| o.parse().ok()).collect();
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::list(origins))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/health", get(health))
        .route("/api/instruction", post(instruction))
        .route("/api/generate", post(generate))
        .route("/api/validate", post(validate))
        .layer(cors)
        .with_state(state)
}

/// Serves until ctrl-c, printing the bound address first.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    println!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
