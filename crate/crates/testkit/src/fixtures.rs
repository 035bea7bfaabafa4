//! Golden query texts and their expected answers.

use std::collections::BTreeSet;

use amv_core::rdf::{ns, Graph, Iri, Term};

/// Language-independent mathematics algorithms solving combinatorial
/// problems, as published (one line, whitespace preserved).
pub const KNAPSACK_QUERY: &str = " PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> PREFIX owl: <http://www.w3.org/2002/07/owl#> PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> PREFIX amv: <https://www.isibang.ac.in/ns/amv#> PREFIX dct: <http://purl.org/dc/terms/> PREFIX foaf: <http://xmlns.com/foaf/0.1/> PREFIX skos: <http://www.w3.org/2004/02/skos/core#> SELECT DISTINCT ?Algorithm WHERE { ?Algorithm dct:subject amv:Mathematics. ?Algorithm amv:languageIndependent true. ?Algorithm amv:problemType amv:Combinatorial. } ";
pub const KNAPSACK_EXPECTED: &[&str] = &["KnapsackProblemAlgorithm"];

/// Java or Python implementations with fewer than seven steps, as published.
pub const FEW_STEPS_QUERY: &str = " PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> PREFIX xsd: <http://www.w3.org/2001/XMLSchema#> PREFIX amv: <https://www.isibang.ac.in/ns/amv#> PREFIX dct: <http://purl.org/dc/terms/> PREFIX foaf: <http://xmlns.com/foaf/0.1/> PREFIX skos: <http://www.w3.org/2004/02/skos/core#> SELECT DISTINCT ?Algorithm WHERE { {?Algorithm amv:implementationInLanguage amv:Java.} UNION {?Algorithm amv:implementationInLanguage amv:Python} ?Algorithm amv:numberOfSteps ?steps FILTER (?steps < 7) } ";
pub const FEW_STEPS_EXPECTED: &[&str] = &["InsertionSortAlgorithm", "Knuth-Morris-PrattAlgorithm", "BinarySearchAlgorithm"];

/// A competency question phrased as a conjunction of `(property, value)`
/// constraints on an algorithm, plus its query text.
pub struct Competency {
    pub label: &'static str,
    pub question: &'static str,
    pub query: &'static str,
    pub constraints: &'static [(&'static str, &'static str)],
}

const AMV_PROBLEM_TYPE: &str = "https://www.isibang.ac.in/ns/amv#problemType";
const AMV_DATA_STRUCTURE: &str = "https://www.isibang.ac.in/ns/amv#dataStructure";
const AMV_ALGORITHM_TYPE: &str = "https://www.isibang.ac.in/ns/amv#algorithmType";
const AMV_LOOP: &str = "https://www.isibang.ac.in/ns/amv#loopConstruct";
const AMV_FORM: &str = "https://www.isibang.ac.in/ns/amv#formOfExpression";

pub const COMPETENCY: &[Competency] = &[
    Competency {
        label: "CQ1",
        question: "Which sorting algorithms use data structure array?",
        query: "SELECT DISTINCT ?Algorithm WHERE { ?Algorithm a amv:Algorithm ; amv:problemType amv:Sorting ; amv:dataStructure amv:Array . }",
        constraints: &[(AMV_PROBLEM_TYPE, "Sorting"), (AMV_DATA_STRUCTURE, "Array")],
    },
    Competency {
        label: "CQ4",
        question: "List the greedy algorithms for which 'while loop' is the best suited loop type?",
        query: "SELECT DISTINCT ?Algorithm WHERE { ?Algorithm a amv:Algorithm . ?Algorithm amv:algorithmType amv:Greedy . ?Algorithm amv:loopConstruct amv:WhileLoop . }",
        constraints: &[(AMV_ALGORITHM_TYPE, "Greedy"), (AMV_LOOP, "WhileLoop")],
    },
    Competency {
        label: "CQ5",
        question: "Retrieve all the sorting algorithms which are expressed in the form of flowchart?",
        query: "SELECT DISTINCT ?Algorithm WHERE { ?Algorithm a amv:Algorithm ; amv:problemType amv:Sorting ; amv:formOfExpression amv:Flowchart }",
        constraints: &[(AMV_PROBLEM_TYPE, "Sorting"), (AMV_FORM, "Flowchart")],
    },
];

/// Answers a competency question by scanning every triple, without indexes
/// or the query engine.
pub fn scan_answer(graph: &Graph, constraints: &[(&str, &str)]) -> BTreeSet<Term> {
    let triples: Vec<_> = graph.iter().collect();
    let algorithm = Term::Iri(Iri::new(format!("{}Algorithm", ns::AMV)).unwrap());
    let has = |s: &Term, p: &str, o: &Term| {
        triples
            .iter()
            .any(|t| t.subject() == s && t.predicate().as_str() == p && t.object() == o)
    };
    triples
        .iter()
        .map(|t| t.subject().clone())
        .filter(|s| has(s, ns::rdf::TYPE, &algorithm))
        .filter(|s| {
            constraints.iter().all(|(p, local)| {
                let o = Term::Iri(Iri::new(format!("{}{local}", ns::AMV)).unwrap());
                has(s, p, &o)
            })
        })
        .collect()
}
