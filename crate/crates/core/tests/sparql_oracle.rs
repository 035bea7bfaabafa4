use amv_core::sparql::{eval_query, parse_query, Element, GroupPattern, QueryAst};
use amv_testkit::gen::{random_graph, random_query, render_query};
use amv_testkit::oracle::brute_force;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn case(seed: u64) -> (amv_core::rdf::Graph, QueryAst, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_graph(&mut rng, 50);
    let ast = random_query(&mut rng);
    let text = render_query(&ast);
    (graph, ast, text)
}

fn reversed_triples(g: &GroupPattern) -> GroupPattern {
    let mut elements: Vec<Element> = g
        .elements
        .iter()
        .map(|e| match e {
            Element::Union(a, b) => Element::Union(reversed_triples(a), reversed_triples(b)),
            Element::Group(inner) => Element::Group(reversed_triples(inner)),
            other => other.clone(),
        })
        .collect();
    elements.reverse();
    GroupPattern { elements }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engine_matches_brute_force(seed in any::<u64>()) {
        let (graph, ast, text) = case(seed);
        let parsed = parse_query(&text).map_err(|e| TestCaseError::fail(format!("{text}\n{e}")))?;
        prop_assert_eq!(&parsed.pattern, &ast.pattern);
        let engine = eval_query(&graph, &parsed);
        prop_assert_eq!(engine.rows, brute_force(&graph, &ast), "{}", text);
    }

    #[test]
    fn pattern_order_does_not_change_solutions(seed in any::<u64>()) {
        let (graph, ast, _) = case(seed);
        let mut reordered = ast.clone();
        reordered.pattern = reversed_triples(&ast.pattern);
        // Same columns, so only the join order differs.
        reordered.projection = amv_core::sparql::Projection::Vars(ast.result_vars());
        if ast.result_vars().is_empty() {
            return Ok(());
        }
        prop_assert_eq!(eval_query(&graph, &ast).rows, eval_query(&graph, &reordered).rows);
    }

    #[test]
    fn distinct_is_idempotent(seed in any::<u64>()) {
        let (graph, mut ast, _) = case(seed);
        ast.distinct = false;
        let once = eval_query(&graph, &ast).distinct();
        prop_assert_eq!(once.clone().distinct(), once);
    }

    #[test]
    fn filter_on_unbound_variable_drops_every_row(seed in any::<u64>()) {
        let (graph, _, _) = case(seed);
        let q = parse_query("SELECT * WHERE { ?x ?p ?o FILTER (?never = ?never || true) }").unwrap();
        prop_assert!(eval_query(&graph, &q).is_empty());
    }
}
