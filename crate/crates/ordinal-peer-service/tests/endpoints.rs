//! Endpoint behaviour against the bundled fixture, driven in-process.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ordinal_peer_service::{router, AppState, ServiceConfig};
use serde_json::Value;
use tower::ServiceExt;

const FIXTURE: &[u8] = include_bytes!("../../ordinal-peer/data/regions_fixture.csv");

fn loaded() -> Router {
    router(AppState::with_dataset(ServiceConfig::default(), FIXTURE).unwrap())
}

async fn call(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (s, b) = call(app, Request::get(uri).body(Body::empty()).unwrap()).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn post(app: &Router, uri: &str, body: impl Into<Body>, json: bool) -> (StatusCode, Value) {
    let mut req = Request::post(uri);
    if json {
        req = req.header("content-type", "application/json");
    }
    let (s, b) = call(app, req.body(body.into()).unwrap()).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

#[tokio::test]
async fn regions_listing_and_detail() {
    let app = loaded();
    let (s, v) = get(&app, "/regions").await;
    assert_eq!(s, StatusCode::OK);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 9);
    for r in list {
        let hi = r["hi"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&hi));
        for key in ["id", "population", "li", "group"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    let (s, v) = get(&app, "/regions/Ku-ring-gai").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["li"], 10);
    assert_eq!(v["distribution"]["p"].as_array().unwrap().len(), 10);
    assert_eq!(v["bcf"].as_array().unwrap().len(), 10);
    assert_eq!(v["lorenz"].as_array().unwrap().len(), 11);
    assert_eq!(v["bcdfa"].as_array().unwrap().len(), 37);
    let (s, v) = get(&app, "/regions/Nowhere").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert!(v["error"].as_str().unwrap().contains("Nowhere"));
}

#[tokio::test]
async fn no_dataset_is_conflict() {
    let app = router(AppState::new(ServiceConfig::default()));
    for uri in ["/regions", "/regions/x", "/compare?a=x&b=y", "/distances?region=x"] {
        assert_eq!(get(&app, uri).await.0, StatusCode::CONFLICT, "{uri}");
    }
    let (s, _) = post(&app, "/clusters", r#"{"k":2}"#, true).await;
    assert_eq!(s, StatusCode::CONFLICT);
}

#[tokio::test]
async fn compare_endpoint() {
    let app = loaded();
    let (s, v) = get(&app, "/compare?a=Auburn&b=Auburn").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["total_distance"], 0.0);
    let (s, v) = get(&app, "/compare?a=Ku-ring-gai&b=Auburn").await;
    assert_eq!(s, StatusCode::OK);
    let hi_a = v["profiles"][0]["hi"].as_f64().unwrap();
    let hi_b = v["profiles"][1]["hi"].as_f64().unwrap();
    assert!((100.0 * hi_a - 91.8).abs() < 1.0);
    assert!((100.0 * hi_b - 57.9).abs() < 1.0);
    let total = v["total_distance"].as_f64().unwrap();
    assert!(total > 0.0 && total < 1.0);
    assert_eq!(get(&app, "/compare?a=Auburn&b=Nowhere").await.0, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/compare?a=Auburn").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn distances_endpoint() {
    let app = loaded();
    let (s, v) = get(&app, "/distances?region=Auburn").await;
    assert_eq!(s, StatusCode::OK);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["region_2"] != "Auburn"));
    let d: Vec<f64> = rows.iter().map(|r| r["distance"].as_f64().unwrap()).collect();
    assert!(d.windows(2).all(|w| w[0] <= w[1]));
    for key in ["region_1", "state_1", "region_2", "state_2", "pop_1", "pop_2", "hi_1", "hi_2", "li_1", "li_2", "distance"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    let (_, one) = get(&app, "/distances?region=Auburn&limit=1").await;
    assert_eq!(one.as_array().unwrap().len(), 1);
    assert_eq!(one[0], rows[0]);
    // Brute-force nearest neighbour via the compare endpoint.
    let mut best = (f64::INFINITY, String::new());
    for r in rows {
        let other = r["region_2"].as_str().unwrap();
        let (_, c) = get(&app, &format!("/compare?a=Auburn&b={}", other.replace(' ', "%20"))).await;
        let t = c["total_distance"].as_f64().unwrap();
        if t < best.0 || (t == best.0 && other < best.1.as_str()) {
            best = (t, other.to_string());
        }
    }
    assert_eq!(one[0]["region_2"], best.1);
    let (_, desc) = get(&app, "/distances?region=Auburn&sort=desc").await;
    assert_eq!(desc[0], rows[7]);
    assert_eq!(get(&app, "/distances?region=Auburn&sort=sideways").await.0, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/distances?region=Nowhere").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn clusters_endpoint() {
    let app = loaded();
    let (s, v) = post(&app, "/clusters", r#"{"k":3}"#, true).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["k"], 3);
    let members: usize = v["members"].as_array().unwrap().iter().map(|m| m.as_array().unwrap().len()).sum();
    assert_eq!(members, 9);
    let sil = v["silhouette"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&sil));
    let (_, again) = post(&app, "/clusters", r#"{"k":3}"#, true).await;
    assert_eq!(again, v);
    let (s, one) = post(&app, "/clusters", r#"{"k":1}"#, true).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(one["members"][0].as_array().unwrap().len(), 9);
    assert_eq!(post(&app, "/clusters", r#"{"k":10}"#, true).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(post(&app, "/clusters", r#"{"k":0}"#, true).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn dataset_reload_round_trip() {
    let app = router(AppState::new(ServiceConfig::default()));
    let csv = "subunit_id,region_id,population,category\na,R1,100,1\nb,R1,100,2\nc,R2,50,10\nd,R2,5,\n";
    let (s, v) = post(&app, "/dataset", csv, false).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["regions"], 2);
    assert_eq!(v["issues"].as_array().unwrap().len(), 1);
    let (_, list) = get(&app, "/regions").await;
    let ids: Vec<&str> = list.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, vec!["R1", "R2"]);
    let (s, _) = post(&app, "/dataset", FIXTURE.to_vec(), false).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(get(&app, "/regions").await.1.as_array().unwrap().len(), 9);
    let (s, _) = post(&app, "/dataset", "nonsense\n1\n", false).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    // A failed load leaves the previous dataset in place.
    assert_eq!(get(&app, "/regions").await.1.as_array().unwrap().len(), 9);
}

#[tokio::test]
async fn oversize_dataset_is_rejected() {
    let cfg = ServiceConfig {
        max_body_bytes: 64,
        ..ServiceConfig::default()
    };
    let app = router(AppState::new(cfg));
    let (s, _) = post(&app, "/dataset", FIXTURE.to_vec(), false).await;
    assert_eq!(s, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn tables_endpoint() {
    let app = loaded();
    let (s, v) = get(&app, "/tables/2").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v.as_array().unwrap().len(), 45);
    let (_, v) = get(&app, "/tables/3").await;
    assert_eq!(v["cells"].as_array().unwrap().len(), 81);
    let (_, v) = get(&app, "/tables/5").await;
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(get(&app, "/tables/7").await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn reads_are_pure() {
    let app = loaded();
    for uri in ["/regions", "/regions/Auburn", "/distances?region=Auburn", "/compare?a=Auburn&b=Ku-ring-gai"] {
        let (_, a) = call(&app, Request::get(uri).body(Body::empty()).unwrap()).await;
        let (_, b) = call(&app, Request::get(uri).body(Body::empty()).unwrap()).await;
        assert_eq!(a, b, "{uri}");
    }
}

#[tokio::test]
async fn cors_is_permissive_by_default() {
    let app = loaded();
    let req = Request::get("/regions").header("origin", "http://localhost:5173").body(Body::empty()).unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");
}

#[tokio::test]
async fn busy_port_reports_port_in_use() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let err = ordinal_peer_service::serve(addr, AppState::new(ServiceConfig::default())).await.unwrap_err();
    assert!(matches!(err, ordinal_peer_service::ServiceError::PortInUse(p) if p == addr.port()));
}
