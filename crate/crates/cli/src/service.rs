//! HTTP front end over a flat directory of scenario documents.
//!
//! | method | path | body |
//! |---|---|---|
//! | `PUT` | `/scenarios/{id}` | scenario document |
//! | `GET` | `/scenarios/{id}` | |
//! | `POST` | `/scenarios/{id}/solve?rule=&dominance=&period=` | |
//! | `POST` | `/scenarios/{id}/whatif` | what-if request |
//! | `GET` | `/scenarios/{id}/timeline?rule=&dominance=` | |
//!
//! Invalid documents get 400, unknown ids 404, and requests the stored
//! scenario cannot answer (such as the interval rule on binary profiles) 422.

use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::QueryRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::commands::{self, Options, WhatIfRequest};
use crate::document::{DocumentError, Loaded, ResultDocument, ScenarioDocument};

/// Scenario documents stored as `<id>.json` files.
#[derive(Debug, Clone)]
pub struct Store {
    dir: Arc<PathBuf>,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Store { dir: Arc::new(dir) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf, ApiError> {
        let valid = !id.is_empty()
            && id.len() <= 64
            && !id.starts_with('.')
            && id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if !valid {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "InvalidId",
                format!("scenario id {id:?} must be 1-64 letters, digits, '-', '_' or '.'"),
            ));
        }
        Ok(self.dir.join(format!("{id}.json")))
    }

    /// Replaces the document in one rename. Returns whether it is new.
    fn write(&self, path: &Path, text: &str) -> std::io::Result<bool> {
        let created = !path.exists();
        let mut tmp = tempfile::NamedTempFile::new_in(self.dir.as_path())?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(created)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.into(),
                message: message.into(),
                line: None,
                column: None,
            },
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "NotFound", format!("no scenario {id:?}"))
    }

    fn internal(err: impl std::fmt::Display) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", err.to_string())
    }
}

impl From<DocumentError> for ApiError {
    fn from(e: DocumentError) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: e.kind,
                message: e.message,
                line: Some(e.line),
                column: Some(e.column),
            },
        }
    }
}

impl From<strategem::Error> for ApiError {
    fn from(e: strategem::Error) -> Self {
        let status = match e {
            strategem::Error::Numerical(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.kind(), e.to_string())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "InvalidQuery", e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, serde_json::to_string(&self.body).expect("error bodies serialize"))
    }
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn result_response(result: &ResultDocument) -> Response {
    json_response(StatusCode::OK, result.to_json())
}

pub fn router(store: Store) -> Router {
    Router::new()
        .route("/scenarios/:id", get(get_scenario).put(put_scenario))
        .route("/scenarios/:id/solve", post(solve))
        .route("/scenarios/:id/whatif", post(whatif))
        .route("/scenarios/:id/timeline", get(timeline))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

pub async fn serve(addr: SocketAddr, store: Store) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!(
        "serving scenarios from {} on http://{}",
        store.dir().display(),
        listener.local_addr()?
    );
    axum::serve(listener, router(store)).await
}

async fn read(store: &Store, id: &str) -> Result<String, ApiError> {
    let path = store.path(id)?;
    match tokio::fs::read_to_string(&path).await {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(ApiError::not_found(id)),
        Err(e) => Err(ApiError::internal(e)),
    }
}

async fn load(store: &Store, id: &str) -> Result<Loaded, ApiError> {
    let text = read(store, id).await?;
    ScenarioDocument::load(&text).map_err(|e| ApiError::internal(format!("stored document {id}: {e}")))
}

async fn compute<F>(loaded: Loaded, f: F) -> Result<Response, ApiError>
where
    F: FnOnce(&Loaded) -> strategem::Result<ResultDocument> + Send + 'static,
{
    let result = tokio::task::spawn_blocking(move || f(&loaded))
        .await
        .map_err(ApiError::internal)??;
    Ok(result_response(&result))
}

async fn get_scenario(
    State(store): State<Store>,
    UrlPath(id): UrlPath<String>,
) -> Result<Response, ApiError> {
    Ok(json_response(StatusCode::OK, read(&store, &id).await?))
}

async fn put_scenario(
    State(store): State<Store>,
    UrlPath(id): UrlPath<String>,
    body: String,
) -> Result<Response, ApiError> {
    let path = store.path(&id)?;
    let loaded = ScenarioDocument::load(&body)?;
    let text = serde_json::to_string_pretty(&loaded.document).map_err(ApiError::internal)?;
    let stored = text.clone();
    let created = tokio::task::spawn_blocking(move || store.write(&path, &stored))
        .await
        .map_err(ApiError::internal)?
        .map_err(ApiError::internal)?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok(json_response(status, text))
}

async fn solve(
    State(store): State<Store>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<Options>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(options) = query?;
    let loaded = load(&store, &id).await?;
    compute(loaded, move |l| commands::solve(l, &options)).await
}

async fn timeline(
    State(store): State<Store>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<Options>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(options) = query?;
    let loaded = load(&store, &id).await?;
    compute(loaded, move |l| commands::timeline(l, &options)).await
}

async fn whatif(
    State(store): State<Store>,
    UrlPath(id): UrlPath<String>,
    body: String,
) -> Result<Response, ApiError> {
    let request: WhatIfRequest = if body.trim().is_empty() {
        WhatIfRequest::default()
    } else {
        serde_json::from_str(&body).map_err(|e| {
            let mut err = ApiError::new(StatusCode::BAD_REQUEST, "ParseError", e.to_string());
            err.body.line = Some(e.line());
            err.body.column = Some(e.column());
            err
        })?
    };
    let loaded = load(&store, &id).await?;
    compute(loaded, move |l| commands::whatif(l, &request)).await
}
