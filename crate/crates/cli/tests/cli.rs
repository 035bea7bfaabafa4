use std::path::Path;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use tower::ServiceExt;

use amv_cli::dispatch;
use amv_core::store::Store;
use amv_service::{router, RouterOptions};
use amv_testkit::fixtures::{FEW_STEPS_QUERY, KNAPSACK_QUERY};

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn amv(dir: &Path, args: &[&str]) -> Run {
    let mut argv = vec!["amv".to_string(), "--data-dir".into(), dir.display().to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = dispatch(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn seeded() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let run = amv(dir.path(), &["init", "--seed"]);
    assert_eq!(run.code, 0, "{}", run.err);
    dir
}

const BAD: &str = "@prefix amv: <https://www.isibang.ac.in/ns/amv#> .
@prefix dct: <http://purl.org/dc/terms/> .
amv:CountingSort a amv:Algorithm ; dct:title \"Counting sort\" ; amv:numberOfSteps \"seven\" .
";

const GOOD: &str = "@prefix amv: <https://www.isibang.ac.in/ns/amv#> .
@prefix dct: <http://purl.org/dc/terms/> .
amv:CountingSort a amv:Algorithm ; dct:title \"Counting sort\" ; amv:numberOfSteps 6 ;
    amv:implementationInLanguage amv:Python .
";

#[test]
fn knapsack_query_from_file_prints_a_table() {
    let dir = seeded();
    let rq = dir.path().join("cq2.rq");
    std::fs::write(&rq, KNAPSACK_QUERY).unwrap();
    let run = amv(dir.path(), &["query", "-f", rq.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.err);
    let lines: Vec<&str> = run.out.lines().collect();
    assert_eq!(lines[0], "?Algorithm");
    assert_eq!(lines[2], "amv:KnapsackProblemAlgorithm");
    assert_eq!(lines.last(), Some(&"(1 row)"));
}

#[test]
fn one_liner_uses_predeclared_prefixes() {
    let dir = seeded();
    let run = amv(dir.path(), &["query", "-e", "SELECT ?a WHERE {?a a amv:Algorithm}"]);
    assert_eq!(run.code, 0, "{}", run.err);
    assert!(run.out.ends_with("(11 rows)\n"), "{}", run.out);
}

#[test]
fn json_output_matches_the_endpoint_body() {
    let dir = seeded();
    let store = std::sync::Arc::new(Store::open(dir.path()).unwrap());
    let app = router(store, RouterOptions::default());
    let rt = tokio::runtime::Runtime::new().unwrap();
    for query in [KNAPSACK_QUERY, FEW_STEPS_QUERY] {
        let cli = amv(dir.path(), &["query", "--json", "-e", query]);
        assert_eq!(cli.code, 0);
        let body = rt.block_on(async {
            let req = Request::post("/sparql")
                .header("content-type", "application/sparql-query")
                .body(Body::from(query))
                .unwrap();
            let resp = app.clone().oneshot(req).await.unwrap();
            resp.into_body().collect().await.unwrap().to_bytes()
        });
        assert_eq!(cli.out.as_bytes(), body.as_ref());
    }
}

#[test]
fn query_errors_exit_one_with_position() {
    let dir = seeded();
    let run = amv(dir.path(), &["query", "-e", "SELECT ?a WHERE { ?a amv:x/amv:y ?b }"]);
    assert_eq!(run.code, 1);
    assert!(run.err.contains("line 1, column"), "{}", run.err);
}

#[test]
fn validate_reports_one_datatype_violation() {
    let dir = seeded();
    let file = dir.path().join("bad.ttl");
    std::fs::write(&file, BAD).unwrap();
    let run = amv(dir.path(), &["validate", file.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    let errors: Vec<&str> = run.out.lines().filter(|l| l.starts_with("error\t")).collect();
    assert_eq!(errors.len(), 1, "{}", run.out);
    assert!(errors[0].starts_with("error\tdatatype\tamv:CountingSort\t"), "{}", errors[0]);
}

#[test]
fn validate_does_not_create_the_data_dir() {
    let root = tempfile::tempdir().unwrap();
    let file = root.path().join("good.ttl");
    std::fs::write(&file, GOOD).unwrap();
    let missing = root.path().join("nowhere");
    let run = amv(&missing, &["validate", file.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.out);
    assert!(!missing.exists());
}

#[test]
fn strict_ingest_rejects_then_accepts() {
    let dir = seeded();
    let bad = dir.path().join("bad.ttl");
    let good = dir.path().join("good.ttl");
    std::fs::write(&bad, BAD).unwrap();
    std::fs::write(&good, GOOD).unwrap();

    let run = amv(dir.path(), &["ingest", bad.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    assert!(run.out.contains("rejected"));

    let run = amv(dir.path(), &["ingest", good.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.out);
    let run = amv(dir.path(), &["query", "-e", "SELECT ?a WHERE {?a a amv:Algorithm}"]);
    assert!(run.out.ends_with("(12 rows)\n"));

    let run = amv(dir.path(), &["ingest", "--permissive", bad.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    assert!(run.out.contains("error\tdatatype"));
}

#[test]
fn search_prints_summaries() {
    let dir = seeded();
    let run = amv(
        dir.path(),
        &["search", "--filter", "amv:problemType=amv:Sorting", "--filter", "amv:formOfExpression=Flowchart"],
    );
    assert_eq!(run.code, 0, "{}", run.err);
    let ids: Vec<&str> = run.out.lines().map(|l| l.split("  ").next().unwrap()).collect();
    assert_eq!(ids, ["amv:BubbleSortAlgorithm", "amv:MergeSortAlgorithm"]);

    let run = amv(dir.path(), &["search", "--filter", "amv:noSuchThing=1"]);
    assert_eq!(run.code, 1);
}

#[test]
fn export_round_trips_through_init() {
    let dir = seeded();
    for format in ["turtle", "ntriples"] {
        let run = amv(dir.path(), &["export", "--format", format]);
        assert_eq!(run.code, 0);
        let parsed = match format {
            "turtle" => amv_core::syntax::parse_turtle(&run.out, None).unwrap(),
            _ => amv_core::syntax::parse_ntriples(&run.out).unwrap(),
        };
        assert_eq!(&parsed.graph, Store::open(dir.path()).unwrap().snapshot().graph());
    }
    let schema = amv(dir.path(), &["export", "--schema"]);
    assert!(schema.out.contains("amv:Algorithm"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[][..],
        &["frobnicate"][..],
        &["query"][..],
        &["query", "-f", "a.rq", "-e", "SELECT * WHERE {}"][..],
        &["export", "--format", "rdfxml"][..],
        &["serve", "--port", "0"][..],
    ] {
        let run = amv(dir.path(), args);
        assert_eq!(run.code, 2, "{args:?}: {}", run.out);
        assert!(!run.err.is_empty());
    }
    let run = amv(dir.path(), &["validate", "/no/such/file.ttl"]);
    assert_eq!(run.code, 2);
}

#[test]
fn help_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let run = amv(dir.path(), &["--help"]);
    assert_eq!(run.code, 0);
    assert!(run.out.contains("Usage"));
}
