use std::path::PathBuf;
use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use qml_cli::service::{router, AppState};
use qml_core::json::{quiver_from_value, sequence_to_value};
use qml_core::mutation::{MutationSequence, MutationStep};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn app() -> Router {
    router(Arc::new(AppState::new(10_000)))
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, Body::from))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    let value = serde_json::from_slice(&bytes).unwrap_or_else(|e| panic!("{uri}: body is not JSON ({e})"));
    (status, value)
}

async fn create(app: &Router, fixture: &str) -> Value {
    let (status, v) = send(app, "POST", "/session", Some(fixture_text(fixture))).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v
}

fn mutate_body(vertex: usize, power: u32) -> Option<String> {
    Some(json!({"vertex": vertex, "power": power}).to_string())
}

#[tokio::test]
async fn mutate_then_undo_restores_the_line_byte_for_byte() {
    let app = app();
    let s = create(&app, "a3_m2_members/line_00.json").await;
    let id = s["id"].as_str().unwrap().to_string();
    assert_eq!(s["quiver"].to_string(), fixture_text("a3_m2_members/line_00.json").trim_end());

    let (status, after) = send(&app, "POST", &format!("/session/{id}/mutate"), mutate_body(2, 1)).await;
    assert_eq!(status, StatusCode::OK);
    assert_ne!(after["quiver"], s["quiver"]);
    assert_eq!(after["history"], json!([{"vertex": 2, "power": 1}]));

    let (status, undone) = send(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(undone["undo"], "inverse");
    assert_eq!(undone["quiver"].to_string(), s["quiver"].to_string());
    let (_, fetched) = send(&app, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(fetched, s);
}

#[tokio::test]
async fn non_members_undo_from_snapshots() {
    let app = app();
    let s = create(&app, "triangle_non_member_m2.json").await;
    let id = s["id"].as_str().unwrap();
    assert_eq!(s["member"], false);
    let (_, after) = send(&app, "POST", &format!("/session/{id}/mutate"), mutate_body(2, 3)).await;
    // the triangle does not come back after m+1 steps, and lands in the class
    assert_ne!(after["quiver"], s["quiver"]);
    assert_eq!(after["member"], true);
    // so mutating back cannot recover it; the snapshot does
    let (_, undone) = send(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(undone["undo"], "snapshot");
    assert_eq!(undone["quiver"].to_string(), s["quiver"].to_string());

    let s = create(&app, "star_m2.json").await;
    let id = s["id"].as_str().unwrap();
    send(&app, "POST", &format!("/session/{id}/mutate"), mutate_body(1, 1)).await;
    let (_, undone) = send(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(undone["undo"], "snapshot");
    assert_eq!(undone["quiver"], s["quiver"]);
    let (status, v) = send(&app, "POST", &format!("/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(v["error"].as_str().unwrap().contains("nothing to undo"));
}

#[tokio::test]
async fn history_replays_to_the_current_quiver() {
    let app = app();
    let s = create(&app, "thirteen_vertex_m2.json").await;
    let id = s["id"].as_str().unwrap().to_string();
    let initial = quiver_from_value(&s["initial"]).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let mut last = s;
    for _ in 0..30 {
        let uri = if rng.random_bool(0.25) { format!("/session/{id}/undo") } else { format!("/session/{id}/mutate") };
        let body = uri.ends_with("mutate").then(|| mutate_body(rng.random_range(1..=13), rng.random_range(1..=3)));
        let (status, v) = send(&app, "POST", &uri, body.flatten()).await;
        if status == StatusCode::OK {
            last = v;
        }
    }
    let steps: Vec<MutationStep> = last["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| MutationStep::new(h["vertex"].as_u64().unwrap() as usize - 1, h["power"].as_u64().unwrap() as u32))
        .collect();
    let seq = MutationSequence { steps };
    assert_eq!(sequence_to_value(&seq)["steps"], last["history"]);
    assert_eq!(seq.apply(&initial).unwrap(), quiver_from_value(&last["quiver"]).unwrap());
    assert_eq!(last["member"], true);
}

#[tokio::test]
async fn class_endpoint_lists_representatives() {
    let app = app();
    let (status, v) = send(&app, "GET", "/class?n=3&m=2", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["count"], 7);
    assert_eq!(v["representatives"].as_array().unwrap().len(), 7);
    let (_, again) = send(&app, "GET", "/class?n=3&m=2", None).await;
    assert_eq!(again, v);
    assert_eq!(send(&app, "GET", "/class?n=3", None).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(send(&app, "GET", "/class?n=3&m=0", None).await.0, StatusCode::BAD_REQUEST);
    let small = router(Arc::new(AppState::new(5)));
    let (status, v) = send(&small, "GET", "/class?n=4&m=2", None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["limit"], 5);
}

#[tokio::test]
async fn bad_requests_get_400() {
    let app = app();
    let s = create(&app, "a3_m2_members/line_00.json").await;
    let id = s["id"].as_str().unwrap();
    let uri = format!("/session/{id}/mutate");
    let (status, v) = send(&app, "POST", &uri, mutate_body(99, 1)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("vertex 99"));
    assert_eq!(send(&app, "POST", &uri, mutate_body(0, 1)).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(send(&app, "POST", &uri, mutate_body(1, 0)).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(send(&app, "POST", &uri, mutate_body(1, 4)).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(send(&app, "POST", &uri, Some("{\"vertex\":".into())).await.0, StatusCode::BAD_REQUEST);
    let (_, unchanged) = send(&app, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(unchanged, s);

    let looped = r#"{"m":2,"n":2,"arrows":[{"from":1,"to":1,"colour":0}]}"#;
    assert_eq!(send(&app, "POST", "/session", Some(looped.into())).await.0, StatusCode::BAD_REQUEST);
    assert_eq!(send(&app, "POST", "/session", Some("not json".into())).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unknown_sessions_get_404() {
    let app = app();
    for (method, uri) in [
        ("GET", "/session/42"),
        ("GET", "/session/abc"),
        ("POST", "/session/42/undo"),
        ("GET", "/session/42/classify"),
        ("GET", "/session/42/zero-part"),
    ] {
        let (status, v) = send(&app, method, uri, None).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert!(v["error"].is_string());
    }
    assert_eq!(send(&app, "POST", "/session/42/mutate", mutate_body(1, 1)).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn classify_and_zero_part() {
    let app = app();
    let s = create(&app, "thirteen_vertex_m2.json").await;
    let id = s["id"].as_str().unwrap();
    let (status, verdict) = send(&app, "GET", &format!("/session/{id}/classify"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(verdict, json!({"member": true, "failures": []}));
    let (status, z) = send(&app, "GET", &format!("/session/{id}/zero-part"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(z["cycles"], json!([[1, 4, 2, 5], [5, 6, 10, 9]]));
    assert_eq!(z["cycle_check"]["pass"], true);
    assert_eq!(z["valency_check"]["pass"], true);

    let s = create(&app, "star_m2.json").await;
    let id = s["id"].as_str().unwrap();
    let (status, verdict) = send(&app, "GET", &format!("/session/{id}/classify"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(verdict["member"], false);
    let (status, v) = send(&app, "GET", &format!("/session/{id}/zero-part"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["verdict"]["member"], false);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn sessions_mutate_concurrently_in_order() {
    let app = app();
    let mut ids = Vec::new();
    for _ in 0..4 {
        ids.push(create(&app, "a3_m2_members/line_00.json").await["id"].as_str().unwrap().to_string());
    }
    let mut handles = Vec::new();
    for id in &ids {
        for v in [1, 2, 3, 2] {
            let app = app.clone();
            let uri = format!("/session/{id}/mutate");
            handles.push(tokio::spawn(async move { send(&app, "POST", &uri, mutate_body(v, 1)).await.0 }));
        }
    }
    for h in handles {
        assert_eq!(h.await.unwrap(), StatusCode::OK);
    }
    for id in &ids {
        let (_, s) = send(&app, "GET", &format!("/session/{id}"), None).await;
        assert_eq!(s["history"].as_array().unwrap().len(), 4);
        let initial = quiver_from_value(&s["initial"]).unwrap();
        let steps = s["history"]
            .as_array()
            .unwrap()
            .iter()
            .map(|h| MutationStep::new(h["vertex"].as_u64().unwrap() as usize - 1, 1))
            .collect();
        let replay = MutationSequence { steps }.apply(&initial).unwrap();
        assert_eq!(replay, quiver_from_value(&s["quiver"]).unwrap());
    }
}
