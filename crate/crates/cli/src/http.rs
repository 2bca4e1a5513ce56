//! HTTP endpoints over a swappable catalog snapshot.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{ConnectInfo, FromRequestParts, Path, Query as UrlQuery, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use seqdb_core::exec::Mode;
use seqdb_core::index::{search_keyword, search_text};
use seqdb_core::catalog::serialize_entry;
use seqdb_core::seeker::identify;
use seqdb_core::{ANumber, Query, TermList};

use crate::config::Config;
use crate::mail::answer_mail;
use crate::parse_terms;
use crate::rate::{rate_admit, Admission, Clock, RateLimiterState};
use crate::render::{LookupView, SeekView};
use crate::snapshot::{load_snapshot, SharedSnapshot};

/// Overrides the connection address as the rate-limit key.
pub const CLIENT_KEY_HEADER: &str = "x-client-key";

pub struct AppState {
    pub snapshot: SharedSnapshot,
    pub limiter: RateLimiterState,
    pub clock: Clock,
    pub config: Config,
    /// Reload source; `None` serves the seed catalog.
    pub catalog_path: Option<PathBuf>,
    pub mode: Mode,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    retry_after_seconds: Option<u64>,
}

fn error(status: StatusCode, code: &'static str, message: impl ToString) -> Response {
    let body = ErrorBody { error: code, message: message.to_string(), retry_after_seconds: None };
    (status, Json(body)).into_response()
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/lookup", get(lookup))
        .route("/seek", post(seek))
        .route("/entry/{anum}", get(entry))
        .route("/search", get(search))
        .route("/mail", post(mail))
        .route("/reload", post(reload))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
struct LookupParams {
    terms: String,
    #[serde(default)]
    sign_insensitive: bool,
    min_overlap: Option<usize>,
    limit: Option<usize>,
}

async fn lookup(State(st): State<Arc<AppState>>, UrlQuery(p): UrlQuery<LookupParams>) -> Response {
    let terms = match parse_terms(&p.terms) {
        Ok(t) => t,
        Err(e) => return error(StatusCode::BAD_REQUEST, "bad_terms", e),
    };
    let mut q = Query::new(terms.clone());
    if p.sign_insensitive {
        q = q.sign_insensitive();
    }
    if let Some(m) = p.min_overlap {
        q = q.with_min_overlap(m);
    }
    let snap = st.snapshot.current();
    match snap.lookup(&q, p.limit.unwrap_or(st.config.result_limit)) {
        Ok(ms) => Json(LookupView::new(&snap, &terms, &ms)).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, "bad_query", e),
    }
}

/// Rate-limit identity: the override header, else the peer address.
pub struct ClientKey(pub String);

impl<S: Send + Sync> FromRequestParts<S> for ClientKey {
    type Rejection = std::convert::Infallible;

    async fn from_request_parts(parts: &mut Parts, _: &S) -> Result<Self, Self::Rejection> {
        if let Some(v) = parts.headers.get(CLIENT_KEY_HEADER).and_then(|v| v.to_str().ok()) {
            return Ok(ClientKey(v.to_string()));
        }
        let peer = parts
            .extensions
            .get::<ConnectInfo<SocketAddr>>()
            .map_or_else(|| "unknown".to_string(), |c| c.0.ip().to_string());
        Ok(ClientKey(peer))
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TermToken {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TermsPayload {
    Text(String),
    List(Vec<TermToken>),
}

#[derive(Debug, Deserialize)]
struct SeekBody {
    terms: TermsPayload,
}

async fn seek(State(st): State<Arc<AppState>>, ClientKey(key): ClientKey, body: String) -> Response {
    let parsed: SeekBody = match serde_json::from_str(&body) {
        Ok(b) => b,
        Err(e) => return error(StatusCode::BAD_REQUEST, "bad_body", format!("expected {{\"terms\": ...}}: {e}")),
    };
    let text = match parsed.terms {
        TermsPayload::Text(s) => s,
        TermsPayload::List(items) => items
            .into_iter()
            .map(|t| match t {
                TermToken::Int(i) => i.to_string(),
                TermToken::Text(s) => s,
            })
            .collect::<Vec<_>>()
            .join(","),
    };
    let terms = match parse_terms(&text) {
        Ok(t) => t,
        Err(e) => return error(StatusCode::BAD_REQUEST, "bad_terms", e),
    };
    if let Admission::RetryAfter(wait) = rate_admit(&st.limiter, &key, (st.clock)()) {
        let secs = wait.as_secs() + u64::from(wait.subsec_nanos() > 0);
        let body = ErrorBody {
            error: "rate_limited",
            message: format!(
                "one seek per client per {} s; retry in {secs} s",
                st.limiter.window().as_secs()
            ),
            retry_after_seconds: Some(secs),
        };
        let mut resp = (StatusCode::TOO_MANY_REQUESTS, Json(body)).into_response();
        resp.headers_mut().insert(header::RETRY_AFTER, HeaderValue::from(secs));
        return resp;
    }
    let snap = st.snapshot.current();
    let cfg = st.config.seeker_config(st.mode);
    let worker = tokio::task::spawn_blocking(move || {
        let list = TermList::new(1, terms.clone());
        identify(&snap.index, &list, &cfg).map(|r| SeekView::new(&snap, &terms, &r))
    });
    match worker.await {
        Ok(Ok(view)) => Json(view).into_response(),
        Ok(Err(e)) => error(StatusCode::BAD_REQUEST, "bad_query", e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "internal", e),
    }
}

async fn entry(State(st): State<Arc<AppState>>, Path(anum): Path<String>) -> Response {
    let id: ANumber = match anum.parse() {
        Ok(id) => id,
        Err(e) => return error(StatusCode::BAD_REQUEST, "bad_anumber", e),
    };
    let snap = st.snapshot.current();
    match snap.catalog.get(id) {
        Some(e) => ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], serialize_entry(e)).into_response(),
        None => error(StatusCode::NOT_FOUND, "not_found", format!("{id} is not in the catalog")),
    }
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    text: Option<String>,
    keyword: Option<String>,
}

#[derive(Debug, Serialize)]
struct SearchView {
    ids: Vec<ANumber>,
}

async fn search(State(st): State<Arc<AppState>>, UrlQuery(p): UrlQuery<SearchParams>) -> Response {
    let snap = st.snapshot.current();
    let found = match (&p.text, &p.keyword) {
        (Some(t), None) => search_text(&snap.catalog, t),
        (None, Some(k)) => search_keyword(&snap.catalog, k),
        _ => return error(StatusCode::BAD_REQUEST, "bad_query", "give exactly one of text= or keyword="),
    };
    match found {
        Ok(ids) => Json(SearchView { ids }).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, "bad_query", e),
    }
}

async fn mail(State(st): State<Arc<AppState>>, body: String) -> Response {
    let snap = st.snapshot.current();
    ([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], answer_mail(&snap, &body, &st.config)).into_response()
}

#[derive(Debug, Serialize)]
struct ReloadView {
    entries: usize,
    digest: String,
    rejected_records: usize,
}

async fn reload(State(st): State<Arc<AppState>>) -> Response {
    let (path, mode) = (st.catalog_path.clone(), st.mode);
    let loaded = tokio::task::spawn_blocking(move || load_snapshot(path.as_deref(), mode)).await;
    match loaded {
        Ok(Ok((snap, rejected))) => {
            let view = ReloadView {
                entries: snap.catalog.len(),
                digest: snap.catalog.digest(),
                rejected_records: rejected.len(),
            };
            st.snapshot.replace(snap);
            Json(view).into_response()
        }
        Ok(Err(e)) => error(StatusCode::INTERNAL_SERVER_ERROR, "catalog", e),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, "internal", e),
    }
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let app = router(state).into_make_service_with_connect_info::<SocketAddr>();
    axum::serve(listener, app).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::monotonic_clock;
    use crate::snapshot::Snapshot;
    use axum::body::Body;
    use axum::http::Request;
    use http_body_util::BodyExt;
    use std::time::Duration;
    use tower::ServiceExt;

    fn state(clock: Clock) -> Arc<AppState> {
        Arc::new(AppState {
            snapshot: SharedSnapshot::new(Snapshot::seed(Mode::Sequential)),
            limiter: RateLimiterState::new(Duration::from_secs(3600)),
            clock,
            config: Config::default(),
            catalog_path: None,
            mode: Mode::Sequential,
        })
    }

    async fn send(app: Router, req: Request<Body>) -> (StatusCode, String, Option<String>) {
        let resp = app.oneshot(req).await.unwrap();
        let status = resp.status();
        let retry = resp.headers().get(header::RETRY_AFTER).map(|v| v.to_str().unwrap().to_string());
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        (status, String::from_utf8(bytes.to_vec()).unwrap(), retry)
    }

    fn seek_req(key: &str, body: &str) -> Request<Body> {
        Request::post("/seek").header(CLIENT_KEY_HEADER, key).body(Body::from(body.to_string())).unwrap()
    }

    #[tokio::test]
    async fn lookup_ranks_worked_example_first() {
        let app = router(state(monotonic_clock()));
        let (s, body, _) = send(app, Request::get("/lookup?terms=1,1,3,11,45").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::OK);
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["matches"][0]["id"], "A001003");
        assert_eq!(v["matches"][0]["window"][4], "45");
    }

    #[tokio::test]
    async fn malformed_terms_are_400() {
        let app = router(state(monotonic_clock()));
        let (s, body, _) = send(app.clone(), Request::get("/lookup?terms=1,x,3").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["error"], "bad_terms");
        assert!(v["message"].as_str().unwrap().contains("\"x\""));
        let (s, _, _) = send(app.clone(), Request::get("/lookup?terms=1,2").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        let (s, _, _) = send(app, seek_req("k", "{\"terms\": \"1 2 x\"}")).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
    }

    #[tokio::test]
    async fn second_seek_in_window_is_limited() {
        let now = Arc::new(std::sync::Mutex::new(Duration::ZERO));
        let t = now.clone();
        let app = router(state(Arc::new(move || *t.lock().unwrap())));
        let body = "{\"terms\": [1, 2, 4, 8, 16, 32]}";
        let (s, v, _) = send(app.clone(), seek_req("c", body)).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        *now.lock().unwrap() = Duration::from_secs(100);
        let (s, v, retry) = send(app.clone(), seek_req("c", body)).await;
        assert_eq!(s, StatusCode::TOO_MANY_REQUESTS);
        assert_eq!(retry.as_deref(), Some("3500"));
        assert!(v.contains("\"retry_after_seconds\":3500"));
        let (s, _, _) = send(app.clone(), seek_req("other", body)).await;
        assert_eq!(s, StatusCode::OK);
        *now.lock().unwrap() = Duration::from_secs(3600);
        let (s, _, _) = send(app, seek_req("c", body)).await;
        assert_eq!(s, StatusCode::OK);
    }

    #[tokio::test]
    async fn entry_search_mail_reload() {
        let app = router(state(monotonic_clock()));
        let (s, text, _) = send(app.clone(), Request::get("/entry/A001003").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::OK);
        let e = seqdb_core::catalog::parse_entry(&text).unwrap();
        assert_eq!(e.id, "A001003".parse::<ANumber>().unwrap());
        let (s, _, _) = send(app.clone(), Request::get("/entry/A999999").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::NOT_FOUND);
        let (s, _, _) = send(app.clone(), Request::get("/entry/B1").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        let (s, v, _) = send(app.clone(), Request::get("/search?text=riemann").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::OK);
        assert!(v.contains("A057641"));
        let (s, _, _) = send(app.clone(), Request::get("/search").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::BAD_REQUEST);
        let (s, v, _) = send(app.clone(), Request::post("/mail").body(Body::from("hi\nlookup 1 1 3 11 45\n")).unwrap()).await;
        assert_eq!(s, StatusCode::OK);
        assert!(v.contains("A001003"));
        let (s, v, _) = send(app, Request::post("/reload").body(Body::empty()).unwrap()).await;
        assert_eq!(s, StatusCode::OK);
        assert!(v.contains("\"rejected_records\":0"));
    }
}
