//! HTTP API over a catalog loaded once at startup.
//!
//! | Route | Body | Response |
//! | --- | --- | --- |
//! | `GET /api/health` | | `{"status":"ok"}` |
//! | `GET /api/catalog` | | count, as-of date, utility sources, records |
//! | `POST /api/rank` | [`RankRequest`] | [`RankResponse`] |
//! | `POST /api/evaluate` | [`EvaluateRequest`] | [`EvaluateResponse`] |
//!
//! Errors are `{"error": "<code>", "message": "<text>"}`; invalid input is
//! answered with 422, unparseable JSON with 400. Anything else is served
//! from the optional static directory.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderValue, Method as HttpMethod, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

use crate::catalog::{check_permutation, Catalog, DatasetRecord};
use crate::error::Error;
use crate::evaluation::{score_ranking, RelevanceVector, DEFAULT_K};
use crate::valuation::{
    rank, DimensionVector, NormalizedWeights, RankedList, UsageMode, ValuationConfig, WeightVector,
    DEFAULT_DECLINE_RATE,
};

#[derive(Debug, Clone)]
pub struct AppState {
    catalog: Arc<Catalog>,
}

impl AppState {
    pub fn new(catalog: Catalog) -> Self {
        AppState {
            catalog: Arc::new(catalog),
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogSummary {
    pub count: usize,
    pub as_of_date: NaiveDate,
    pub utility_sources: Vec<String>,
    pub datasets: Vec<DatasetRecord>,
}

impl CatalogSummary {
    pub fn of(catalog: &Catalog) -> Self {
        CatalogSummary {
            count: catalog.len(),
            as_of_date: catalog.as_of_date,
            utility_sources: catalog.utility_sources(),
            datasets: catalog.datasets.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRequest {
    pub weights: WeightVector,
    pub config: ValuationConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRankRequest {
    weights: serde_json::Value,
    #[serde(default)]
    usage_mode: Option<UsageMode>,
    #[serde(default)]
    utility_source: Option<String>,
    #[serde(default)]
    decline_rate: Option<f64>,
    #[serde(default)]
    as_of: Option<NaiveDate>,
}

impl RankRequest {
    pub fn from_json(value: serde_json::Value) -> Result<Self, ApiError> {
        let raw: RawRankRequest = serde_json::from_value(value).map_err(ApiError::invalid)?;
        raw.into_request()
    }
}

impl RawRankRequest {
    fn into_request(self) -> Result<RankRequest, ApiError> {
        Ok(RankRequest {
            weights: WeightVector::from_json(&self.weights)?,
            config: ValuationConfig {
                decline_rate: self.decline_rate.unwrap_or(DEFAULT_DECLINE_RATE),
                usage_mode: self.usage_mode.unwrap_or_default(),
                utility_source: self.utility_source,
                as_of: self.as_of,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDataset {
    pub rank: usize,
    pub dataset_id: String,
    pub name: String,
    pub data_value: f64,
    pub dimension_vector: DimensionVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResponse {
    pub ranked: Vec<RankedDataset>,
    pub weights: NormalizedWeights,
}

impl RankResponse {
    pub fn new(catalog: &Catalog, ranked: RankedList) -> Self {
        let ranked_rows = ranked
            .entries
            .into_iter()
            .enumerate()
            .map(|(i, e)| RankedDataset {
                rank: i + 1,
                name: catalog
                    .get(&e.dataset_id)
                    .map(|d| d.name.clone())
                    .unwrap_or_default(),
                dataset_id: e.dataset_id,
                data_value: e.value,
                dimension_vector: e.dimensions,
            })
            .collect();
        RankResponse {
            ranked: ranked_rows,
            weights: ranked.weights,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluateRequest {
    pub rank: RankRequest,
    pub ideal_ranking: Vec<String>,
    pub k: usize,
}

// serde cannot combine flatten with deny_unknown_fields, so the evaluate
// body is split by hand.
impl EvaluateRequest {
    pub fn from_json(value: serde_json::Value) -> Result<Self, ApiError> {
        let serde_json::Value::Object(mut obj) = value else {
            return Err(ApiError::invalid("request body must be a JSON object"));
        };
        let ideal = obj
            .remove("ideal_ranking")
            .ok_or_else(|| ApiError::invalid("missing field `ideal_ranking`"))?;
        let k = obj.remove("k");
        let rank: RawRankRequest =
            serde_json::from_value(serde_json::Value::Object(obj)).map_err(ApiError::invalid)?;
        let ideal_ranking = serde_json::from_value(ideal).map_err(ApiError::invalid)?;
        let k: Option<usize> = k
            .map(serde_json::from_value)
            .transpose()
            .map_err(ApiError::invalid)?;
        Ok(EvaluateRequest {
            rank: rank.into_request()?,
            ideal_ranking,
            k: k.unwrap_or(DEFAULT_K),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub ndcg: f64,
    pub ndcg_at_k: f64,
    pub k: usize,
}

/// Error response: an HTTP status plus a stable machine-readable code.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: &'a str,
}

impl ApiError {
    fn invalid(e: impl ToString) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: "invalid_request",
            message: e.to_string(),
        }
    }

    fn malformed(e: serde_json::Error) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "malformed_json",
            message: e.to_string(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::AllZeroWeights => "all_zero_weights",
            Error::InvalidWeight { .. } => "invalid_weight",
            Error::UnknownUtilitySource(_) => "unknown_utility_source",
            Error::MissingDimension { .. } => "missing_dimension",
            Error::InvalidDeclineRate(_) => "invalid_decline_rate",
            Error::NotPermutation(_) => "not_permutation",
            Error::InvalidK => "invalid_k",
            Error::UndefinedMetric => "undefined_metric",
            Error::UtilityOutOfRange(_) => "utility_out_of_range",
            _ => {
                return ApiError {
                    status: StatusCode::INTERNAL_SERVER_ERROR,
                    code: "internal",
                    message: e.to_string(),
                }
            }
        };
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: self.code,
            message: &self.message,
        };
        (self.status, Json(body)).into_response()
    }
}

fn parse_body(body: &Bytes) -> Result<serde_json::Value, ApiError> {
    serde_json::from_slice(body).map_err(ApiError::malformed)
}

/// Ranking exactly as [`crate::valuation::rank`] computes it.
pub fn rank_response(catalog: &Catalog, req: &RankRequest) -> Result<RankResponse, Error> {
    let ranked = rank(catalog, &req.weights, &req.config)?;
    Ok(RankResponse::new(catalog, ranked))
}

pub fn evaluate_response(
    catalog: &Catalog,
    req: &EvaluateRequest,
) -> Result<EvaluateResponse, Error> {
    if req.k == 0 {
        return Err(Error::InvalidK);
    }
    check_permutation(&req.ideal_ranking, catalog)?;
    let relevance = RelevanceVector::from_ranking(&req.ideal_ranking)?;
    let (ndcg, ndcg_at_k) = score_ranking(
        catalog,
        &req.rank.weights,
        &req.rank.config,
        &relevance,
        req.k,
    )?;
    Ok(EvaluateResponse {
        ndcg,
        ndcg_at_k,
        k: req.k,
    })
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({"status": "ok"}))
}

async fn catalog_summary(State(state): State<AppState>) -> Json<CatalogSummary> {
    Json(CatalogSummary::of(&state.catalog))
}

async fn rank_handler(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<Json<RankResponse>, ApiError> {
    let req = RankRequest::from_json(parse_body(&body)?)?;
    Ok(Json(rank_response(&state.catalog, &req)?))
}

async fn evaluate_handler(
    State(state): State<AppState>,
    body: Bytes,
) -> Result<Json<EvaluateResponse>, ApiError> {
    let req = EvaluateRequest::from_json(parse_body(&body)?)?;
    Ok(Json(evaluate_response(&state.catalog, &req)?))
}

fn is_local_origin(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else {
        return false;
    };
    let host = origin
        .strip_prefix("http://")
        .or_else(|| origin.strip_prefix("https://"))
        .unwrap_or("");
    let host = match host.rsplit_once(':') {
        Some((h, port)) if port.chars().all(|c| c.is_ascii_digit()) => h,
        _ => host,
    };
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

/// Builds the application. `static_dir`, when given, is served at `/`.
pub fn router(catalog: Catalog, static_dir: Option<PathBuf>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| is_local_origin(origin)))
        .allow_methods([HttpMethod::GET, HttpMethod::POST])
        .allow_headers([header::CONTENT_TYPE]);
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/catalog", get(catalog_summary))
        .route("/api/rank", post(rank_handler))
        .route("/api/evaluate", post(evaluate_handler))
        .with_state(AppState::new(catalog));
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(cors)
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<TcpListener> {
    TcpListener::bind(addr).await
}

/// Serves until `shutdown` resolves.
pub async fn serve<F>(listener: TcpListener, app: Router, shutdown: F) -> std::io::Result<()>
where
    F: std::future::Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await
}
