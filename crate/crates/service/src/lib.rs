//! HTTP facade over a registry [`Store`]: a SPARQL endpoint, the faceted
//! search API, validated ingestion and the vocabulary export.
//!
//! | Method | Path | Body / result |
//! |---|---|---|
//! | GET, POST | `/sparql` | query text; SPARQL JSON results |
//! | GET | `/api/facets` | facet listings with counts |
//! | GET | `/api/algorithms?filter=p=v&q=text` | matching records |
//! | GET | `/api/algorithms/{localname}` | one record |
//! | POST | `/api/algorithms` | Turtle; validation report (201 or 422) |
//! | GET | `/vocab.ttl` | the schema as Turtle |

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, RawQuery, State};
use axum::http::{header, HeaderMap, Method, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::json;
use thiserror::Error;
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

use amv_core::error::StoreError;
use amv_core::facet::{filters_to_sparql, get_record, list_facets, search, FacetFilter};
use amv_core::rdf::{ns, Iri};
use amv_core::schema::export_schema;
use amv_core::sparql::{eval_query, parse_query, results_to_json, SPARQL_RESULTS_JSON};
use amv_core::store::{IngestMode, Store};
use amv_core::syntax::{parse_turtle, write_turtle};

/// Request bodies above this size get 413.
pub const MAX_BODY_BYTES: usize = 64 * 1024;

pub const SPARQL_QUERY: &str = "application/sparql-query";
pub const TURTLE: &str = "text/turtle";

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("port must be between 1 and 65535")]
    InvalidPort,
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub port: u16,
    pub host: IpAddr,
    pub data_dir: PathBuf,
    /// Reject ingests whose report has errors.
    pub strict: bool,
    pub read_only: bool,
    /// Static files served at `/` instead of the built-in landing page.
    pub ui_dir: Option<PathBuf>,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            port: 8080,
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            data_dir: data_dir.into(),
            strict: true,
            read_only: false,
            ui_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), ServiceError> {
        if self.port == 0 {
            return Err(ServiceError::InvalidPort);
        }
        Ok(())
    }
}

#[derive(Clone)]
struct AppState {
    store: Arc<Store>,
    mode: IngestMode,
}

/// Routing options that do not depend on the listener.
#[derive(Clone, Debug, Default)]
pub struct RouterOptions {
    pub strict: bool,
    pub ui_dir: Option<PathBuf>,
}

pub fn router(store: Arc<Store>, options: RouterOptions) -> Router {
    let state = AppState {
        store,
        mode: if options.strict { IngestMode::Strict } else { IngestMode::Permissive },
    };
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    let mut api = Router::new()
        .route("/sparql", get(sparql_get).post(sparql_post))
        .route("/api/facets", get(facets))
        .route("/api/algorithms", get(algorithms).post(ingest))
        .route("/api/algorithms/:localname", get(algorithm))
        .route("/vocab.ttl", get(vocab));
    if options.ui_dir.is_none() {
        api = api.route("/", get(landing));
    }
    let api = api
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .layer(cors)
        .with_state(state);
    match options.ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Opens the store, binds and serves until Ctrl-C.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    config.validate()?;
    let store = Store::open(&config.data_dir)?.read_only(config.read_only);
    let app = router(
        Arc::new(store),
        RouterOptions {
            strict: config.strict,
            ui_dir: config.ui_dir.clone(),
        },
    );
    let addr = SocketAddr::new(config.host, config.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })?;
    tracing::info!(%addr, data_dir = %config.data_dir.display(), "registry listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn error_text(status: StatusCode, message: impl Into<String>) -> Response {
    (status, [(header::CONTENT_TYPE, "text/plain; charset=utf-8")], message.into()).into_response()
}

fn error_json(status: StatusCode, message: impl std::fmt::Display) -> Response {
    (status, Json(json!({ "error": message.to_string() }))).into_response()
}

fn run_sparql(state: &AppState, text: &str) -> Response {
    match parse_query(text) {
        Ok(q) => {
            let snapshot = state.store.snapshot();
            let body = results_to_json(&eval_query(snapshot.graph(), &q));
            ([(header::CONTENT_TYPE, SPARQL_RESULTS_JSON)], body).into_response()
        }
        Err(diagnostic) => error_text(StatusCode::BAD_REQUEST, diagnostic.to_string()),
    }
}

fn form_value(encoded: &[u8], key: &str) -> Option<String> {
    url::form_urlencoded::parse(encoded).find(|(k, _)| k == key).map(|(_, v)| v.into_owned())
}

async fn sparql_get(State(state): State<AppState>, RawQuery(query): RawQuery) -> Response {
    match query.as_deref().and_then(|q| form_value(q.as_bytes(), "query")) {
        Some(text) => run_sparql(&state, &text),
        None => error_text(StatusCode::BAD_REQUEST, "missing query parameter"),
    }
}

/// Accepts `application/sparql-query`, a urlencoded `query=` form, or a
/// bare body.
async fn sparql_post(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let is_form = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/x-www-form-urlencoded"));
    let text = if is_form {
        match form_value(&body, "query") {
            Some(t) => t,
            None => return error_text(StatusCode::BAD_REQUEST, "missing query parameter"),
        }
    } else {
        match String::from_utf8(body.to_vec()) {
            Ok(t) => t,
            Err(_) => return error_text(StatusCode::BAD_REQUEST, "query is not valid UTF-8"),
        }
    };
    run_sparql(&state, &text)
}

async fn facets(State(state): State<AppState>) -> Response {
    let snapshot = state.store.snapshot();
    let prefixes = snapshot.schema().prefixes();
    let listings: Vec<_> = list_facets(&snapshot).iter().map(|f| f.to_json(prefixes)).collect();
    Json(json!({ "revision": snapshot.revision(), "facets": listings })).into_response()
}

async fn algorithms(State(state): State<AppState>, RawQuery(query): RawQuery) -> Response {
    let snapshot = state.store.snapshot();
    let schema = snapshot.schema();
    let mut filters = Vec::new();
    let mut text = None;
    for (k, v) in url::form_urlencoded::parse(query.as_deref().unwrap_or("").as_bytes()) {
        match k.as_ref() {
            "filter" => match FacetFilter::parse(schema, &v) {
                Ok(f) => filters.push(f),
                Err(e) => return error_json(StatusCode::BAD_REQUEST, e),
            },
            "q" => text = Some(v.into_owned()),
            _ => {}
        }
    }
    match search(&snapshot, &filters, text.as_deref()) {
        Ok(records) => {
            let prefixes = schema.prefixes();
            Json(json!({
                "revision": snapshot.revision(),
                "count": records.len(),
                "filters": filters.iter().map(|f| f.encode(prefixes)).collect::<Vec<_>>(),
                "sparql": filters_to_sparql(schema, &filters),
                "records": records.iter().map(|r| r.to_json(prefixes)).collect::<Vec<_>>(),
            }))
            .into_response()
        }
        Err(e) => error_json(StatusCode::BAD_REQUEST, e),
    }
}

async fn algorithm(State(state): State<AppState>, Path(localname): Path<String>) -> Response {
    let snapshot = state.store.snapshot();
    let Ok(iri) = Iri::new(format!("{}{localname}", ns::AMV)) else {
        return error_json(StatusCode::NOT_FOUND, format!("no algorithm {localname}"));
    };
    match get_record(&snapshot, &iri) {
        Ok(record) => Json(record.to_json(snapshot.schema().prefixes())).into_response(),
        Err(e) => error_json(StatusCode::NOT_FOUND, e),
    }
}

async fn ingest(State(state): State<AppState>, body: Bytes) -> Response {
    if state.store.is_read_only() {
        return error_json(StatusCode::METHOD_NOT_ALLOWED, "the registry is read-only");
    }
    let Ok(text) = String::from_utf8(body.to_vec()) else {
        return error_json(StatusCode::BAD_REQUEST, "body is not valid UTF-8");
    };
    let graph = match parse_turtle(&text, None) {
        Ok(doc) => doc.graph,
        Err(diagnostic) => return error_json(StatusCode::BAD_REQUEST, diagnostic),
    };
    let store = state.store.clone();
    let mode = state.mode;
    let outcome = match tokio::task::spawn_blocking(move || store.ingest(&graph, mode)).await {
        Ok(Ok(outcome)) => outcome,
        Ok(Err(StoreError::ReadOnly)) => return error_json(StatusCode::METHOD_NOT_ALLOWED, StoreError::ReadOnly),
        Ok(Err(e)) => return error_json(StatusCode::INTERNAL_SERVER_ERROR, e),
        Err(e) => return error_json(StatusCode::INTERNAL_SERVER_ERROR, e),
    };
    let status = if outcome.applied || outcome.report.conforms {
        StatusCode::CREATED
    } else {
        StatusCode::UNPROCESSABLE_ENTITY
    };
    let mut body = serde_json::to_value(&outcome.report).expect("report serializes");
    body["applied"] = outcome.applied.into();
    body["revision"] = outcome.revision.into();
    (status, Json(body)).into_response()
}

async fn vocab(State(state): State<AppState>) -> Response {
    let snapshot = state.store.snapshot();
    let schema = snapshot.schema();
    let text = write_turtle(&export_schema(schema), &schema.export_prefixes());
    ([(header::CONTENT_TYPE, TURTLE)], text).into_response()
}

async fn landing(State(state): State<AppState>) -> Html<String> {
    let snapshot = state.store.snapshot();
    Html(format!(
        "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Algorithm metadata registry</title></head>\n<body>\n\
         <h1>Algorithm metadata registry</h1>\n<p>Revision {} with {} triples.</p>\n<ul>\n\
         <li><a href=\"/api/facets\">/api/facets</a></li>\n<li><a href=\"/api/algorithms\">/api/algorithms</a></li>\n\
         <li><a href=\"/vocab.ttl\">/vocab.ttl</a></li>\n<li>/sparql (GET <code>?query=</code> or POST)</li>\n</ul>\n</body></html>\n",
        snapshot.revision(),
        snapshot.graph().len()
    ))
}
