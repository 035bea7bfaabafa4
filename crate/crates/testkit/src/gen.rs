//! Seeded generators for random graphs, queries and algorithm records.

use amv_core::rdf::{amv, iri, ns, Graph, Iri, Literal, Term, Triple};
use amv_core::sparql::{CmpOp, Element, Expr, GroupPattern, PredicatePattern, Projection, QueryAst, TermPattern, TriplePattern};
use rand::seq::SliceRandom;
use rand::Rng;

fn ex(local: &str) -> Iri {
    Iri::new(format!("http://example.org/{local}")).unwrap()
}

fn subject_pool() -> Vec<Term> {
    (0..5).map(|i| ex(&format!("s{i}")).into()).collect()
}

fn predicate_pool() -> Vec<Iri> {
    (0..3).map(|i| ex(&format!("p{i}"))).collect()
}

fn literal_pool() -> Vec<Term> {
    let dec = |s: &str| Term::from(Literal::typed(s, iri(ns::xsd::DECIMAL)).unwrap());
    vec![
        Literal::integer(0).into(),
        Literal::integer(3).into(),
        Literal::integer(7).into(),
        Literal::integer(-2).into(),
        dec("3.0"),
        dec("6.50"),
        Literal::string("a").into(),
        Literal::string("").into(),
        Literal::lang_string("a", "en").unwrap().into(),
        Literal::boolean(true).into(),
        Literal::boolean(false).into(),
    ]
}

fn object_pool() -> Vec<Term> {
    subject_pool().into_iter().chain(literal_pool()).collect()
}

/// Half resources, half literals, so object-to-subject joins are common.
fn random_object(rng: &mut impl Rng) -> Term {
    if rng.gen_bool(0.5) {
        subject_pool().choose(rng).unwrap().clone()
    } else {
        literal_pool().choose(rng).unwrap().clone()
    }
}

/// Up to `max_triples` triples over a small vocabulary, so joins and
/// filters actually find matches.
pub fn random_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let (subjects, predicates) = (subject_pool(), predicate_pool());
    // Mostly dense graphs; occasionally tiny or empty ones.
    let n = if rng.gen_bool(0.1) { rng.gen_range(0..=3.min(max_triples)) } else { rng.gen_range(max_triples / 2..=max_triples) };
    (0..n)
        .map(|_| {
            Triple::new(
                subjects.choose(rng).unwrap().clone(),
                predicates.choose(rng).unwrap().clone(),
                random_object(rng),
            )
            .unwrap()
        })
        .collect()
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_pattern(rng: &mut impl Rng) -> TriplePattern {
    let var = |rng: &mut _| TermPattern::Var(VARS.choose(rng).unwrap().to_string());
    let subject = if rng.gen_bool(0.85) { var(rng) } else { TermPattern::Term(subject_pool().choose(rng).unwrap().clone()) };
    let predicate = if rng.gen_bool(0.8) {
        PredicatePattern::Iri(predicate_pool().choose(rng).unwrap().clone())
    } else {
        // Usually its own variable: subjects and predicates rarely coincide.
        let name = if rng.gen_bool(0.8) { "p" } else { VARS.choose(rng).unwrap() };
        PredicatePattern::Var(name.to_string())
    };
    let object = if rng.gen_bool(0.7) { var(rng) } else { TermPattern::Term(random_object(rng)) };
    TriplePattern { subject, predicate, object }
}

/// Operands are mostly variables the pattern binds and mostly numeric
/// constants, so filters keep some rows and drop others.
fn random_expr(rng: &mut impl Rng, depth: u32, bound: &[String]) -> Expr {
    let operand = |rng: &mut _| {
        if Rng::gen_bool(rng, 0.6) {
            let var = match bound.choose(rng) {
                Some(v) if Rng::gen_bool(rng, 0.9) => v.clone(),
                _ => VARS.choose(rng).unwrap().to_string(),
            };
            Expr::Var(var)
        } else if Rng::gen_bool(rng, 0.7) {
            let numbers: Vec<Term> = literal_pool().into_iter().filter(|t| amv_core::sparql::numeric_value(t).is_some()).collect();
            Expr::Const(numbers.choose(rng).unwrap().clone())
        } else {
            Expr::Const(object_pool().choose(rng).unwrap().clone())
        }
    };
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..5) };
    match choice {
        0 | 1 => {
            let op = *[CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne].choose(rng).unwrap();
            Expr::Compare(op, Box::new(operand(rng)), Box::new(operand(rng)))
        }
        2 => Expr::And(Box::new(random_expr(rng, depth - 1, bound)), Box::new(random_expr(rng, depth - 1, bound))),
        3 => Expr::Or(Box::new(random_expr(rng, depth - 1, bound)), Box::new(random_expr(rng, depth - 1, bound))),
        _ => Expr::Not(Box::new(random_expr(rng, depth - 1, bound))),
    }
}

/// A query of at most four triple patterns, sometimes with a union and
/// sometimes with filters (possibly inside a union branch).
pub fn random_query(rng: &mut impl Rng) -> QueryAst {
    let mut budget = rng.gen_range(1..=4usize);
    let mut elements = Vec::new();
    if budget >= 2 && rng.gen_bool(0.4) {
        let branch = |rng: &mut _| {
            let tp = random_pattern(rng);
            let bound: Vec<String> = tp.vars().map(str::to_string).collect();
            let mut els = vec![Element::Triple(tp)];
            if Rng::gen_bool(rng, 0.2) {
                els.push(Element::Filter(random_expr(rng, 1, &bound)));
            }
            GroupPattern { elements: els }
        };
        let (a, b) = (branch(rng), branch(rng));
        elements.push(Element::Union(a, b));
        budget -= 2;
    }
    for _ in 0..budget {
        elements.push(Element::Triple(random_pattern(rng)));
    }
    if rng.gen_bool(0.5) {
        let bound = GroupPattern { elements: elements.clone() }.vars();
        let at = rng.gen_range(0..=elements.len());
        elements.insert(at, Element::Filter(random_expr(rng, 2, &bound)));
    }
    let pattern = GroupPattern { elements };
    let projection = if rng.gen_bool(0.3) {
        Projection::Star
    } else {
        let mut vars: Vec<String> = pattern
            .vars()
            .into_iter()
            .filter(|_| rng.gen_bool(0.7))
            .collect();
        if vars.is_empty() {
            vars.push(VARS.choose(rng).unwrap().to_string());
        }
        Projection::Vars(vars)
    };
    QueryAst {
        prefixes: amv_core::rdf::PrefixMap::standard(),
        projection,
        distinct: rng.gen_bool(0.5),
        pattern,
    }
}

/// Query text for `ast` using full IRIs, so no prefixes are needed.
pub fn render_query(ast: &QueryAst) -> String {
    let projection = match &ast.projection {
        Projection::Star => "*".to_string(),
        Projection::Vars(vs) => vs.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(" "),
    };
    let distinct = if ast.distinct { "DISTINCT " } else { "" };
    format!("SELECT {distinct}{projection} WHERE {}", render_group(&ast.pattern))
}

fn render_group(g: &GroupPattern) -> String {
    let mut out = String::from("{ ");
    for e in &g.elements {
        match e {
            Element::Triple(tp) => {
                out.push_str(&format!("{} {} {} . ", render_term(&tp.subject), render_predicate(&tp.predicate), render_term(&tp.object)));
            }
            Element::Union(a, b) => out.push_str(&format!("{} UNION {} ", render_group(a), render_group(b))),
            Element::Group(inner) => out.push_str(&format!("{} ", render_group(inner))),
            Element::Filter(expr) => out.push_str(&format!("FILTER ({expr}) ")),
        }
    }
    out.push('}');
    out
}

fn render_term(p: &TermPattern) -> String {
    match p {
        TermPattern::Var(v) => format!("?{v}"),
        TermPattern::Term(t) => t.to_string(),
    }
}

fn render_predicate(p: &PredicatePattern) -> String {
    match p {
        PredicatePattern::Var(v) => format!("?{v}"),
        PredicatePattern::Iri(i) => format!("<{}>", i.as_str()),
    }
}

const LANGUAGES: &[&str] = &["Java", "Python", "C", "CPlusPlus"];
const PROBLEMS: &[&str] = &["Combinatorial", "Sorting", "StringMatching", "Searching", "ShortestPath", "MinimumSpanningTree"];
const ALGORITHM_TYPES: &[&str] = &["Dynamic", "Recursive", "DivideAndConquer", "Greedy", "Incremental", "BruteForce"];
const DATA_STRUCTURES: &[&str] = &["Array", "PriorityQueue", "DisjointSet", "BinaryTree"];
const LOOPS: &[&str] = &["ForLoop", "WhileLoop"];
const FORMS: &[&str] = &["Flowchart", "Pseudocode"];
const DISCIPLINES: &[&str] = &["Mathematics", "ComputerScience"];

fn dct(local: &str) -> Iri {
    Iri::new(format!("{}{local}", ns::DCT)).unwrap()
}

/// A record that conforms to the schema when validated against the seed
/// (which types every individual it references).
pub fn random_record(rng: &mut impl Rng, n: usize) -> (Iri, Graph) {
    let subject = amv(&format!("GeneratedAlgorithm{n}"));
    let s = || Term::from(subject.clone());
    let mut g = Graph::new();
    let mut add = |p: Iri, o: Term| {
        g.insert(Triple::new(s(), p, o).unwrap());
    };
    add(iri(ns::rdf::TYPE), amv("Algorithm").into());
    add(dct("title"), Literal::string(format!("Generated algorithm {n}")).into());
    add(amv("numberOfSteps"), Literal::integer(rng.gen_range(1..30)).into());
    if rng.gen_bool(0.7) {
        add(amv("languageIndependent"), Literal::boolean(rng.gen()).into());
    }
    for _ in 0..rng.gen_range(1..=2) {
        add(amv("implementationInLanguage"), amv(LANGUAGES.choose(rng).unwrap()).into());
    }
    let pick = |rng: &mut _, pool: &[&str]| Term::from(amv(pool.choose(rng).unwrap()));
    add(amv("problemType"), pick(rng, PROBLEMS));
    add(amv("algorithmType"), pick(rng, ALGORITHM_TYPES));
    if rng.gen_bool(0.8) {
        add(amv("dataStructure"), pick(rng, DATA_STRUCTURES));
    }
    if rng.gen_bool(0.5) {
        add(amv("loopConstruct"), pick(rng, LOOPS));
    }
    if rng.gen_bool(0.5) {
        add(amv("formOfExpression"), pick(rng, FORMS));
    }
    add(dct("subject"), pick(rng, DISCIPLINES));
    if rng.gen_bool(0.5) {
        add(amv("timeComplexity"), Literal::string(format!("O(n^{})", rng.gen_range(1..4))).into());
    }
    if rng.gen_bool(0.5) {
        add(amv("input"), Literal::string("a list of numbers").into());
    }
    (subject, g)
}

/// A single injected defect and the violation kind that must report it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    Domain,
    Range,
    Datatype,
    CardinalityMax,
}

impl Fault {
    pub const ALL: [Fault; 4] = [Fault::Domain, Fault::Range, Fault::Datatype, Fault::CardinalityMax];

    /// The validation report code for this fault.
    pub fn code(self) -> &'static str {
        match self {
            Fault::Domain => "domain",
            Fault::Range => "range",
            Fault::Datatype => "datatype",
            Fault::CardinalityMax => "cardinality-max",
        }
    }
}

pub fn inject(record: &Graph, subject: &Iri, fault: Fault) -> Graph {
    let mut g = record.clone();
    let s = Term::from(subject.clone());
    let steps = amv("numberOfSteps");
    match fault {
        // foaf:name belongs to agents, not algorithms.
        Fault::Domain => {
            let name = Iri::new(format!("{}name", ns::FOAF)).unwrap();
            g.insert(Triple::new(s, name, Literal::string("Not an agent")).unwrap());
        }
        // Linux is an operating system, not a programming language.
        Fault::Range => {
            g.insert(Triple::new(s, amv("implementationInLanguage"), amv("Linux")).unwrap());
        }
        Fault::Datatype => {
            let old = g.matching(Some(&s), Some(&steps), None);
            for t in &old {
                g.remove(t);
            }
            g.insert(Triple::new(s, steps, Literal::string("seven")).unwrap());
        }
        Fault::CardinalityMax => {
            let current = g.objects(&s, &steps).next().and_then(|o| o.as_literal().map(|l| l.lexical().to_string()));
            let other = if current.as_deref() == Some("99") { 98 } else { 99 };
            g.insert(Triple::new(s, steps, Literal::integer(other)).unwrap());
        }
    }
    g
}
