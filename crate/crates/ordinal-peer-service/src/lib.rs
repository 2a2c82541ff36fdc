//! JSON HTTP service over one in-memory region dataset.
//!
//! Endpoints:
//!
//! | method | path | body / query | response |
//! |---|---|---|---|
//! | GET | `/health` | | `{status, loaded}` |
//! | GET | `/regions` | | `[{id, population, li, hi, group}]` |
//! | GET | `/regions/{id}` | | full profile plus `bcf`, `cdf`, `lorenz`, `bcdfa` arrays |
//! | GET | `/compare` | `a`, `b` | `{profiles, distance_terms, total_distance}` |
//! | GET | `/distances` | `region`, `sort=asc\|desc`, `limit` | distance-database rows |
//! | GET | `/tables/{which}` | `which ∈ {2,3,4,5}` | classification table |
//! | POST | `/clusters` | `{k, seed?}` | clustering with silhouette and members |
//! | POST | `/dataset` | subunit CSV | `{fingerprint, regions, issues}` |
//!
//! Reads take a snapshot of the current dataset, so a concurrent reload is
//! observed either completely or not at all. The distance matrix is computed
//! lazily on a blocking thread the first time it is needed and cached for
//! the lifetime of the dataset; clusterings are cached per `(k, seed)`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ordinal_peer::classifier::{
    diversity_table, group_table, region_profile_with, skewed_table, symmetric_table, BenchmarkPartition,
    GroupLabel, RegionProfile,
};
use ordinal_peer::cluster::{distance_terms, pam, Clustering, DistanceMatrix, DistanceParams, DistanceTerms};
use ordinal_peer::divergence::bcdfa;
use ordinal_peer::ingest::{aggregate, parse_subunit_csv, pwavgs, Issue};
use ordinal_peer::location::bcf_vector;
use ordinal_peer::lorenz::lorenz_curve;
use ordinal_peer::OrdinalError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tokio::sync::{OnceCell, RwLock};
use tower_http::cors::{AllowOrigin, CorsLayer};

/// Default request-body cap for `POST /dataset` (16 MiB).
pub const DEFAULT_MAX_BODY_BYTES: usize = 16 * 1024 * 1024;

/// Service configuration.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Category count of the ingested data.
    pub n: usize,
    pub params: DistanceParams,
    pub partition: BenchmarkPartition,
    pub max_body_bytes: usize,
    /// Allowed CORS origin; `None` allows any origin.
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            n: 10,
            params: DistanceParams::default(),
            partition: BenchmarkPartition::thesis(10).expect("valid preset"),
            max_body_bytes: DEFAULT_MAX_BODY_BYTES,
            cors_origin: None,
        }
    }
}

impl ServiceConfig {
    /// Checks the settings that would otherwise fail when the router is built.
    pub fn validate(&self) -> Result<(), ServiceError> {
        if let Some(origin) = &self.cors_origin {
            origin
                .parse::<axum::http::HeaderValue>()
                .map_err(|_| ServiceError::BadRequest(format!("invalid CORS origin `{origin}`")))?;
        }
        self.partition.validate(self.n)?;
        Ok(())
    }
}

/// Failures surfaced by the service.
#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("no dataset loaded")]
    NoDataset,
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Data(#[from] OrdinalError),
}

impl ServiceError {
    fn status(&self) -> StatusCode {
        match self {
            ServiceError::NoDataset => StatusCode::CONFLICT,
            ServiceError::UnknownRegion(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest(_) | ServiceError::Data(_) => StatusCode::BAD_REQUEST,
            ServiceError::PortInUse(_) | ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = Json(ErrorBody { error: self.to_string() });
        (self.status(), body).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ServiceError>;

/// An immutable loaded dataset with its lazily computed artifacts.
pub struct Dataset {
    pub fingerprint: String,
    pub profiles: Vec<RegionProfile>,
    pub issues: Vec<Issue>,
    index: HashMap<String, usize>,
    params: DistanceParams,
    matrix: OnceCell<Arc<DistanceMatrix>>,
    clusterings: Mutex<HashMap<(usize, u64), Arc<Clustering>>>,
}

/// Hex SHA-256 of the dataset bytes.
pub fn fingerprint(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Dataset {
    /// Parses and profiles a subunit CSV.
    pub fn from_csv(bytes: &[u8], cfg: &ServiceConfig) -> Result<Self, ServiceError> {
        let parsed = parse_subunit_csv(bytes, cfg.n)?;
        let ds = aggregate(&parsed.records, cfg.n)?;
        let scores = match pwavgs(&ds, None) {
            Ok(s) => s,
            Err(OrdinalError::NoScores | OrdinalError::ZeroVariance) => Default::default(),
            Err(e) => return Err(e.into()),
        };
        let profiles = ds
            .regions
            .iter()
            .map(|(id, r)| {
                region_profile_with(
                    id,
                    &r.distribution()?,
                    r.total_population as f64,
                    r.excluded_fraction(),
                    scores.get(id).copied(),
                    &cfg.partition,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index = profiles.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        Ok(Self {
            fingerprint: fingerprint(bytes),
            profiles,
            issues: parsed.issues,
            index,
            params: cfg.params,
            matrix: OnceCell::new(),
            clusterings: Mutex::new(HashMap::new()),
        })
    }

    pub fn profile(&self, id: &str) -> Result<&RegionProfile, ServiceError> {
        self.index
            .get(id)
            .map(|&i| &self.profiles[i])
            .ok_or_else(|| ServiceError::UnknownRegion(id.to_string()))
    }

    /// The distance matrix, computed on a blocking thread on first use.
    pub async fn matrix(self: &Arc<Self>) -> Result<Arc<DistanceMatrix>, ServiceError> {
        let me = Arc::clone(self);
        self.matrix
            .get_or_try_init(|| async move {
                tokio::task::spawn_blocking(move || DistanceMatrix::from_profiles(&me.profiles, &me.params))
                    .await
                    .map_err(|e| ServiceError::BadRequest(format!("matrix task failed: {e}")))?
                    .map(Arc::new)
                    .map_err(ServiceError::from)
            })
            .await
            .cloned()
    }

    /// PAM clustering, cached per `(k, seed)`.
    pub async fn clustering(self: &Arc<Self>, k: usize, seed: u64) -> Result<Arc<Clustering>, ServiceError> {
        if let Some(c) = self.clusterings.lock().expect("cache lock").get(&(k, seed)) {
            return Ok(Arc::clone(c));
        }
        if k == 0 || k > self.profiles.len() {
            return Err(ServiceError::BadRequest(format!(
                "k = {k} must be between 1 and the region count {}",
                self.profiles.len()
            )));
        }
        let matrix = self.matrix().await?;
        let c = tokio::task::spawn_blocking(move || pam(&matrix, k, seed))
            .await
            .map_err(|e| ServiceError::BadRequest(format!("clustering task failed: {e}")))??;
        let c = Arc::new(c);
        self.clusterings
            .lock()
            .expect("cache lock")
            .entry((k, seed))
            .or_insert_with(|| Arc::clone(&c));
        Ok(c)
    }
}

/// Shared service state: configuration plus the current dataset snapshot.
#[derive(Clone)]
pub struct AppState {
    cfg: Arc<ServiceConfig>,
    current: Arc<RwLock<Option<Arc<Dataset>>>>,
}

impl AppState {
    pub fn new(cfg: ServiceConfig) -> Self {
        Self {
            cfg: Arc::new(cfg),
            current: Arc::new(RwLock::new(None)),
        }
    }

    /// Builds a state with a dataset already loaded.
    pub fn with_dataset(cfg: ServiceConfig, csv: &[u8]) -> Result<Self, ServiceError> {
        let ds = Dataset::from_csv(csv, &cfg)?;
        Ok(Self {
            cfg: Arc::new(cfg),
            current: Arc::new(RwLock::new(Some(Arc::new(ds)))),
        })
    }

    async fn snapshot(&self) -> Result<Arc<Dataset>, ServiceError> {
        self.current.read().await.clone().ok_or(ServiceError::NoDataset)
    }

    /// Parses `csv` outside the lock, then swaps it in atomically.
    pub async fn load(&self, csv: Vec<u8>) -> Result<Arc<Dataset>, ServiceError> {
        let cfg = Arc::clone(&self.cfg);
        let ds = tokio::task::spawn_blocking(move || Dataset::from_csv(&csv, &cfg))
            .await
            .map_err(|e| ServiceError::BadRequest(format!("load task failed: {e}")))??;
        let ds = Arc::new(ds);
        *self.current.write().await = Some(Arc::clone(&ds));
        Ok(ds)
    }
}

/// Row of `GET /regions`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct RegionSummary {
    pub id: String,
    pub population: f64,
    pub li: usize,
    pub hi: f64,
    pub group: Option<GroupLabel>,
}

/// Body of `GET /regions/{id}`.
#[derive(Debug, Serialize)]
pub struct RegionDetail<'a> {
    #[serde(flatten)]
    pub profile: &'a RegionProfile,
    pub bcf: Vec<f64>,
    pub cdf: Vec<f64>,
    /// Lorenz ordinates `y_0 = 0, …, y_n = 1`.
    pub lorenz: Vec<f64>,
    pub bcdfa: Vec<f64>,
}

/// Body of `GET /compare`.
#[derive(Debug, Serialize)]
pub struct Comparison<'a> {
    pub profiles: [&'a RegionProfile; 2],
    pub distance_terms: DistanceTerms,
    pub total_distance: f64,
}

/// One row of `GET /distances`, in the distance-database column layout.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DistanceRow {
    pub region_1: String,
    pub state_1: String,
    pub region_2: String,
    pub state_2: String,
    pub pop_1: f64,
    pub pop_2: f64,
    pub hi_1: f64,
    pub hi_2: f64,
    pub li_1: usize,
    pub li_2: usize,
    pub distance: f64,
}

#[derive(Debug, Deserialize)]
struct CompareQuery {
    a: String,
    b: String,
}

#[derive(Debug, Deserialize)]
struct DistanceQuery {
    region: String,
    sort: Option<String>,
    limit: Option<usize>,
}

/// Body of `POST /clusters`.
#[derive(Debug, Deserialize)]
pub struct ClusterRequest {
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Response of `POST /clusters`.
#[derive(Debug, Serialize)]
pub struct ClusterResponse {
    pub fingerprint: String,
    #[serde(flatten)]
    pub clustering: Clustering,
    /// Region ids per cluster, in cluster order.
    pub members: Vec<Vec<String>>,
}

/// Response of `POST /dataset`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LoadResponse {
    pub fingerprint: String,
    pub regions: usize,
    pub issues: Vec<String>,
}

async fn health(State(st): State<AppState>) -> Json<serde_json::Value> {
    let loaded = st.current.read().await.as_ref().map(|d| d.fingerprint.clone());
    Json(serde_json::json!({ "status": "ok", "fingerprint": loaded }))
}

async fn list_regions(State(st): State<AppState>) -> ApiResult<Vec<RegionSummary>> {
    let ds = st.snapshot().await?;
    Ok(Json(
        ds.profiles
            .iter()
            .map(|p| RegionSummary {
                id: p.id.clone(),
                population: p.population,
                li: p.li,
                hi: p.hi,
                group: p.group,
            })
            .collect(),
    ))
}

async fn region_detail(State(st): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let ds = st.snapshot().await?;
    let p = ds.profile(&id)?;
    let detail = RegionDetail {
        profile: p,
        bcf: bcf_vector(&p.distribution),
        cdf: p.distribution.cdf(),
        lorenz: lorenz_curve(&p.distribution).y,
        bcdfa: bcdfa(&p.distribution).r,
    };
    Ok(Json(detail).into_response())
}

async fn compare(State(st): State<AppState>, Query(q): Query<CompareQuery>) -> Result<Response, ServiceError> {
    let ds = st.snapshot().await?;
    let (a, b) = (ds.profile(&q.a)?, ds.profile(&q.b)?);
    let terms = distance_terms(a, b, &ds.params)?;
    Ok(Json(Comparison {
        profiles: [a, b],
        distance_terms: terms,
        total_distance: terms.total,
    })
    .into_response())
}

async fn distances(State(st): State<AppState>, Query(q): Query<DistanceQuery>) -> ApiResult<Vec<DistanceRow>> {
    let ds = st.snapshot().await?;
    let ascending = match q.sort.as_deref() {
        None | Some("asc") => true,
        Some("desc") => false,
        Some(other) => return Err(ServiceError::BadRequest(format!("sort must be asc or desc, got {other:?}"))),
    };
    let a = ds.profile(&q.region)?;
    let matrix = ds.matrix().await?;
    let rows = matrix
        .neighbours(&q.region, ascending, q.limit)?
        .into_iter()
        .map(|(other, distance)| {
            let b = ds.profile(&other).expect("matrix ids come from profiles");
            DistanceRow {
                region_1: a.id.clone(),
                state_1: String::new(),
                region_2: b.id.clone(),
                state_2: String::new(),
                pop_1: a.population,
                pop_2: b.population,
                hi_1: a.hi,
                hi_2: b.hi,
                li_1: a.li,
                li_2: b.li,
                distance,
            }
        })
        .collect();
    Ok(Json(rows))
}

async fn tables(State(st): State<AppState>, Path(which): Path<u8>) -> Result<Response, ServiceError> {
    let n = st.cfg.n;
    let body = match which {
        2 => serde_json::to_value(diversity_table(n)?),
        3 | 4 if n != 10 => return Err(OrdinalError::UnsupportedCategoryCount { n, expected: 10 }.into()),
        3 => serde_json::to_value(skewed_table()),
        4 => serde_json::to_value(symmetric_table()),
        5 => serde_json::to_value(group_table(n)?),
        other => return Err(ServiceError::BadRequest(format!("unknown table {other}; expected 2, 3, 4 or 5"))),
    }
    .map_err(|e| ServiceError::BadRequest(e.to_string()))?;
    Ok(Json(body).into_response())
}

async fn clusters(State(st): State<AppState>, Json(req): Json<ClusterRequest>) -> ApiResult<ClusterResponse> {
    let ds = st.snapshot().await?;
    let c = ds.clustering(req.k, req.seed).await?;
    let mut members = vec![Vec::new(); c.k];
    for (i, &a) in c.assignment.iter().enumerate() {
        members[a].push(ds.profiles[i].id.clone());
    }
    Ok(Json(ClusterResponse {
        fingerprint: ds.fingerprint.clone(),
        clustering: (*c).clone(),
        members,
    }))
}

async fn load_dataset(State(st): State<AppState>, body: axum::body::Bytes) -> ApiResult<LoadResponse> {
    let ds = st.load(body.to_vec()).await?;
    Ok(Json(LoadResponse {
        fingerprint: ds.fingerprint.clone(),
        regions: ds.profiles.len(),
        issues: ds.issues.iter().map(|i| i.to_string()).collect(),
    }))
}

/// Builds the router with CORS and the body-size cap applied.
pub fn router(state: AppState) -> Router {
    let cors = match &state.cfg.cors_origin {
        None => CorsLayer::permissive(),
        Some(origin) => CorsLayer::new()
            .allow_origin(AllowOrigin::exact(origin.parse().expect("valid origin header value")))
            .allow_methods(tower_http::cors::Any)
            .allow_headers(tower_http::cors::Any),
    };
    let limit = state.cfg.max_body_bytes;
    Router::new()
        .route("/health", get(health))
        .route("/regions", get(list_regions))
        .route("/regions/{id}", get(region_detail))
        .route("/compare", get(compare))
        .route("/distances", get(distances))
        .route("/tables/{which}", get(tables))
        .route("/clusters", post(clusters))
        .route("/dataset", post(load_dataset))
        .layer(DefaultBodyLimit::max(limit))
        .layer(cors)
        .with_state(state)
}

/// Binds `addr` and serves until the future is dropped.
pub async fn serve(addr: SocketAddr, state: AppState) -> Result<(), ServiceError> {
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| {
        if e.kind() == std::io::ErrorKind::AddrInUse {
            ServiceError::PortInUse(addr.port())
        } else {
            ServiceError::Io(e)
        }
    })?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(state)).await?;
    Ok(())
}
