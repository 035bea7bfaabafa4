use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use amv_core::schema::{load_builtin_schema, VocabSchema};
use amv_core::sparql::{eval_query, parse_query, results_to_json};
use amv_core::store::Store;
use amv_core::syntax::parse_turtle;
use amv_service::{router, RouterOptions, MAX_BODY_BYTES};
use amv_testkit::fixtures::{FEW_STEPS_QUERY, KNAPSACK_QUERY};

struct Fixture {
    _dir: tempfile::TempDir,
    store: Arc<Store>,
    app: Router,
}

fn seeded(strict: bool, read_only: bool) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    Store::init_with_seed(dir.path()).unwrap();
    let store = Arc::new(Store::open(dir.path()).unwrap().read_only(read_only));
    let app = router(store.clone(), RouterOptions { strict, ui_dir: None });
    Fixture { _dir: dir, store, app }
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Option<String>, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string());
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, ctype, body)
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn post(uri: &str, ctype: &str, body: impl Into<Body>) -> Request<Body> {
    Request::post(uri).header(header::CONTENT_TYPE, ctype).body(body.into()).unwrap()
}

fn encode(q: &str) -> String {
    url::form_urlencoded::byte_serialize(q.as_bytes()).collect()
}

fn json(body: &[u8]) -> Value {
    serde_json::from_slice(body).unwrap()
}

#[tokio::test]
async fn sparql_get_is_byte_identical_to_module_output() {
    let f = seeded(true, false);
    let (status, ctype, body) = send(&f.app, get(&format!("/sparql?query={}", encode(KNAPSACK_QUERY)))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("application/sparql-results+json"));
    let expected = results_to_json(&eval_query(f.store.snapshot().graph(), &parse_query(KNAPSACK_QUERY).unwrap()));
    assert_eq!(body, expected);
    let v = json(&body);
    assert_eq!(v["results"]["bindings"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"]["bindings"][0]["Algorithm"]["type"], "uri");
}

#[tokio::test]
async fn sparql_post_variants() {
    let f = seeded(true, false);
    let (status, _, body) = send(&f.app, post("/sparql", "application/sparql-query", FEW_STEPS_QUERY)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(json(&body)["results"]["bindings"].as_array().unwrap().len(), 3);
    let form = format!("query={}", encode(FEW_STEPS_QUERY));
    let (status, _, form_body) = send(&f.app, post("/sparql", "application/x-www-form-urlencoded", form)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(form_body, body);
}

#[tokio::test]
async fn sparql_errors() {
    let f = seeded(true, false);
    let (status, _, body) = send(&f.app, post("/sparql", "application/sparql-query", "SELECT")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(String::from_utf8(body).unwrap().starts_with("line 1, column 7:"));
    let (status, _, _) = send(&f.app, get("/sparql")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let huge = format!("SELECT * WHERE {{ ?s ?p ?o }} #{}", "x".repeat(MAX_BODY_BYTES));
    let (status, _, _) = send(&f.app, post("/sparql", "application/sparql-query", huge)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn facet_listing() {
    let f = seeded(true, false);
    let (status, _, body) = send(&f.app, get("/api/facets")).await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    let facets = v["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 7);
    let coverage = facets.iter().find(|f| f["facet"] == "Coverage").unwrap();
    let combinatorial = coverage["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["filter"] == "amv:problemType=amv:Combinatorial")
        .unwrap();
    assert!(combinatorial["count"].as_u64().unwrap() >= 1);
}

#[tokio::test]
async fn algorithm_search() {
    let f = seeded(true, false);
    let (status, _, body) = send(&f.app, get("/api/algorithms")).await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert_eq!(v["count"], 11);
    assert_eq!(v["records"].as_array().unwrap().len(), 11);

    let uri = format!("/api/algorithms?filter={}", encode("amv:problemType=amv:Combinatorial"));
    let v = json(&send(&f.app, get(&uri)).await.2);
    let ids: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"KnapsackProblemAlgorithm"));

    let uri = format!(
        "/api/algorithms?filter={}&filter={}&q=sort",
        encode("amv:problemType=amv:Sorting"),
        encode("amv:formOfExpression=amv:Flowchart")
    );
    let v = json(&send(&f.app, get(&uri)).await.2);
    let ids: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["BubbleSortAlgorithm", "MergeSortAlgorithm"]);

    let (status, _, body) = send(&f.app, get(&format!("/api/algorithms?filter={}", encode("amv:colour=red")))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(json(&body)["error"].as_str().unwrap().contains("unknown property"));
}

#[tokio::test]
async fn single_record() {
    let f = seeded(true, false);
    let (status, _, body) = send(&f.app, get("/api/algorithms/KnapsackProblemAlgorithm")).await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert_eq!(v["properties"]["amv:problemType"][0]["label"], "amv:Combinatorial");
    assert_eq!(v["properties"]["dct:subject"][0]["label"], "amv:Mathematics");
    let (status, _, _) = send(&f.app, get("/api/algorithms/Knuth-Morris-PrattAlgorithm")).await;
    assert_eq!(status, StatusCode::OK);
    let (status, _, _) = send(&f.app, get("/api/algorithms/NoSuchThing")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

const NEW_RECORD: &str = "@prefix amv: <https://www.isibang.ac.in/ns/amv#> . @prefix dct: <http://purl.org/dc/terms/> .
amv:HeapSortAlgorithm a amv:Algorithm ; dct:title \"Heap Sort\" ; amv:problemType amv:Sorting ;
    amv:dataStructure amv:Array ; amv:numberOfSteps 6 ; amv:implementationInLanguage amv:Java .";

#[tokio::test]
async fn ingest_statuses() {
    let f = seeded(true, false);
    let before = f.store.snapshot().revision();
    let (status, _, body) = send(&f.app, post("/api/algorithms", "text/turtle", NEW_RECORD)).await;
    assert_eq!(status, StatusCode::CREATED);
    let v = json(&body);
    assert_eq!(v["conforms"], true);
    assert_eq!(v["revision"], before + 1);
    assert_eq!(json(&send(&f.app, get("/api/algorithms")).await.2)["count"], 12);

    let bad = NEW_RECORD.replace("HeapSort", "Broken").replace("numberOfSteps 6", "numberOfSteps \"six\"");
    let (status, _, body) = send(&f.app, post("/api/algorithms", "text/turtle", bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let v = json(&body);
    assert_eq!(v["conforms"], false);
    assert_eq!(v["violations"][0]["kind"], "datatype");
    assert_eq!(v["violations"][0]["severity"], "error");

    let (status, _, _) = send(&f.app, post("/api/algorithms", "text/turtle", "amv:X a")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn permissive_and_read_only() {
    let f = seeded(false, false);
    let bad = NEW_RECORD.replace("numberOfSteps 6", "numberOfSteps \"six\"");
    let (status, _, body) = send(&f.app, post("/api/algorithms", "text/turtle", bad)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(json(&body)["applied"], true);

    let f = seeded(true, true);
    let (status, _, _) = send(&f.app, post("/api/algorithms", "text/turtle", NEW_RECORD)).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    let (status, _, _) = send(&f.app, get("/api/algorithms")).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn vocabulary_export_reloads() {
    let f = seeded(true, false);
    let (status, ctype, body) = send(&f.app, get("/vocab.ttl")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("text/turtle"));
    let doc = parse_turtle(std::str::from_utf8(&body).unwrap(), None).unwrap();
    let reloaded = VocabSchema::from_graph(&doc.graph, doc.prefixes).unwrap();
    let builtin = load_builtin_schema();
    assert_eq!(reloaded.classes(), builtin.classes());
    assert_eq!(reloaded.properties(), builtin.properties());
}

#[tokio::test]
async fn cors_and_landing() {
    let f = seeded(true, false);
    let req = Request::get("/api/facets").header(header::ORIGIN, "http://localhost:5173").body(Body::empty()).unwrap();
    let resp = f.app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN).unwrap(), "*");
    let (status, ctype, body) = send(&f.app, get("/")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(ctype.unwrap().starts_with("text/html"));
    assert!(String::from_utf8(body).unwrap().contains("/api/facets"));
}

#[tokio::test]
async fn static_ui_directory() {
    let dir = tempfile::tempdir().unwrap();
    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<p>ui</p>").unwrap();
    let store = Arc::new(Store::open(dir.path()).unwrap());
    let app = router(store, RouterOptions { strict: true, ui_dir: Some(ui.path().to_path_buf()) });
    let (status, _, body) = send(&app, get("/")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<p>ui</p>");
    let (status, _, _) = send(&app, get("/api/facets")).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn readers_never_see_partial_writes() {
    let f = seeded(true, false);
    let start = f.store.snapshot().revision();
    let mut readers = Vec::new();
    for _ in 0..8 {
        let app = f.app.clone();
        readers.push(tokio::spawn(async move {
            let mut seen = Vec::new();
            for _ in 0..20 {
                let v = json(&send(&app, get("/api/algorithms")).await.2);
                seen.push(v["count"].as_u64().unwrap());
            }
            seen
        }));
    }
    let writer = {
        let app = f.app.clone();
        tokio::spawn(async move {
            for i in 0..5 {
                let record = NEW_RECORD.replace("HeapSortAlgorithm", &format!("Generated{i}"));
                let (status, _, _) = send(&app, post("/api/algorithms", "text/turtle", record)).await;
                assert_eq!(status, StatusCode::CREATED);
            }
        })
    };
    writer.await.unwrap();
    for r in readers {
        for count in r.await.unwrap() {
            assert!((11..=16).contains(&count), "{count}");
        }
    }
    assert_eq!(f.store.snapshot().revision(), start + 5);
}

#[test]
fn config_rejects_port_zero() {
    let mut c = amv_service::ServiceConfig::new("/tmp/x");
    assert!(c.validate().is_ok());
    c.port = 0;
    assert!(c.validate().is_err());
}
