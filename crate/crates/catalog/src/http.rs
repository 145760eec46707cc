//! JSON API over a [`Store`].

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use serde::Deserialize;
use serde_json::{json, Value};
use usdl_trust_core::engine::{
    aggregate_trust, default_weight_profile, publishable_references, rank_order,
    TrustScoreReport, WeightProfile,
};

use crate::store::{Store, StoreError};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    /// Directory holding `NAME.json` weight profiles.
    pub profiles_dir: Option<PathBuf>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/providers", post(register))
        .route("/providers/{id}", get(fetch))
        .route("/providers/{id}/score", get(score).post(score_inline))
        .route("/providers/{id}/transactions", post(record_transaction))
        .route("/providers/{id}/references", get(references))
        .route("/providers/{id}/analytics", get(analytics))
        .route("/providers/{id}/verify-vat", post(verify_vat))
        .route("/transactions/{tx}/verify", post(verify_transaction))
        .route("/transactions/{tx}/rating", post(rating))
        .route("/rank", get(rank))
        .with_state(state)
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, message: impl ToString) -> Self {
        Self {
            status,
            body: json!({ "error": error, "message": message.to_string() }),
        }
    }

    fn bad_request(message: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let message = e.to_string();
        match e {
            StoreError::Parse(parse) => Self {
                status: StatusCode::BAD_REQUEST,
                body: json!({ "error": "parse_error", "message": message, "parse_error": parse }),
            },
            StoreError::Invalid(report) => Self {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({ "error": "validation_failed", "message": message, "report": report }),
            },
            StoreError::Profile(_) | StoreError::NoVat(_) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "unprocessable", message)
            }
            StoreError::UnknownProvider(_) | StoreError::UnknownTransaction(_) => {
                Self::new(StatusCode::NOT_FOUND, "not_found", message)
            }
            StoreError::BadRating(_) => Self::bad_request(message),
            StoreError::DuplicateRating { .. } => {
                Self::new(StatusCode::CONFLICT, "duplicate_rating", message)
            }
            StoreError::Io(_) | StoreError::Corrupt { .. } => {
                tracing::error!("{message}");
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
            }
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_json<T: for<'de> Deserialize<'de>>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

fn parse_date(text: &str) -> ApiResult<NaiveDate> {
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .map_err(|_| ApiError::bad_request(format!("invalid date {text:?}, expected YYYY-MM-DD")))
}

fn is_profile_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl AppState {
    /// `default` is built in; other names load `<profiles_dir>/<name>.json`.
    pub fn weight_profile(&self, name: Option<&str>) -> ApiResult<WeightProfile> {
        let name = name.unwrap_or("default");
        if !is_profile_name(name) {
            return Err(ApiError::bad_request(format!("invalid profile name {name:?}")));
        }
        let path = self.profiles_dir.as_ref().map(|d| d.join(format!("{name}.json")));
        match path {
            Some(path) if path.is_file() => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| ApiError::bad_request(format!("cannot read profile {name}: {e}")))?;
                WeightProfile::from_json(&text)
                    .map_err(|e| ApiError::bad_request(format!("invalid weight profile {name}: {e}")))
            }
            _ if name == "default" => Ok(default_weight_profile()),
            _ => Err(ApiError::new(
                StatusCode::NOT_FOUND,
                "not_found",
                format!("unknown weight profile {name}"),
            )),
        }
    }

    pub fn score(&self, id: &str, weights: &WeightProfile) -> ApiResult<TrustScoreReport> {
        let inputs = self.store.scoring_inputs(id)?;
        Ok(aggregate_trust(
            &inputs.profile,
            weights,
            Some(&inputs.analytics),
            &inputs.transactions,
        ))
    }
}

#[derive(Deserialize)]
struct DocumentBody {
    document: String,
}

async fn register(State(app): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult<Response> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let document = if is_json {
        parse_json::<DocumentBody>(&body)?.document
    } else {
        String::from_utf8(body.to_vec()).map_err(|_| ApiError::bad_request("document is not UTF-8"))?
    };
    let registration = app.store.register(&document)?;
    let status = if registration.created {
        StatusCode::CREATED
    } else {
        StatusCode::OK
    };
    let body = json!({ "id": registration.id, "report": registration.report });
    Ok((status, Json(body)).into_response())
}

async fn fetch(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.store.fetch(&id)?).into_response())
}

#[derive(Deserialize)]
struct ProfileQuery {
    profile: Option<String>,
}

async fn score(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ProfileQuery>,
) -> ApiResult<Response> {
    let weights = app.weight_profile(q.profile.as_deref())?;
    Ok(Json(app.score(&id, &weights)?).into_response())
}

async fn score_inline(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Response> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::bad_request("body is not UTF-8"))?;
    let weights = WeightProfile::from_json(text)
        .map_err(|e| ApiError::bad_request(format!("invalid weight profile: {e}")))?;
    Ok(Json(app.score(&id, &weights)?).into_response())
}

async fn rank(State(app): State<AppState>, Query(q): Query<ProfileQuery>) -> ApiResult<Response> {
    let weights = app.weight_profile(q.profile.as_deref())?;
    let ids = app.store.ids();
    let mut reports = Vec::with_capacity(ids.len());
    for id in &ids {
        reports.push(app.score(id, &weights)?);
    }
    let ranking: Vec<Value> = rank_order(&reports)
        .into_iter()
        .map(|i| {
            json!({
                "id": ids[i],
                "provider_id": reports[i].provider_id,
                "aggregate": serde_json::to_value(&reports[i]).expect("report serializes")["aggregate"],
            })
        })
        .collect();
    Ok(Json(json!({ "profile": weights.name(), "ranking": ranking })).into_response())
}

#[derive(Deserialize)]
struct TransactionBody {
    customer_id: String,
    date: String,
    #[serde(default)]
    confidential: bool,
    #[serde(default)]
    document_tx: Option<String>,
}

async fn record_transaction(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Response> {
    let req: TransactionBody = parse_json(&body)?;
    let date = parse_date(&req.date)?;
    let record = app
        .store
        .record_transaction(&id, &req.customer_id, date, req.confidential, req.document_tx)?;
    Ok((StatusCode::CREATED, Json(record)).into_response())
}

async fn verify_transaction(State(app): State<AppState>, Path(tx): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.store.verify_transaction(&tx)?).into_response())
}

#[derive(Deserialize)]
struct RatingBody {
    value: i64,
    rater_id: String,
    #[serde(default)]
    rater_verified: bool,
}

async fn rating(State(app): State<AppState>, Path(tx): Path<String>, body: Bytes) -> ApiResult<Response> {
    let req: RatingBody = parse_json(&body)?;
    let value = u8::try_from(req.value)
        .ok()
        .filter(|v| (1..=5).contains(v))
        .ok_or_else(|| ApiError::bad_request(format!("rating {} outside 1..=5", req.value)))?;
    let record = app
        .store
        .record_rating(&tx, value, &req.rater_id, req.rater_verified)?;
    Ok((StatusCode::CREATED, Json(record)).into_response())
}

async fn references(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let inputs = app.store.scoring_inputs(&id)?;
    let refs = publishable_references(&inputs.profile, &inputs.transactions);
    // marketplace transactions are listed without confidential ones
    let listed: Vec<Value> = app
        .store
        .transactions(&id)?
        .into_iter()
        .filter(|t| !t.confidential)
        .map(|t| {
            json!({
                "tx_id": t.tx_id,
                "customer_id": t.customer_id,
                "date": t.date,
                "verified": t.verified,
            })
        })
        .collect();
    Ok(Json(json!({ "id": id, "references": refs, "transactions": listed })).into_response())
}

async fn analytics(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.store.analytics(&id)?).into_response())
}

async fn verify_vat(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.store.verify_vat(&id)?).into_response())
}
