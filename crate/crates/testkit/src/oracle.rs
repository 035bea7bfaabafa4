//! A brute-force SPARQL evaluator. It enumerates every assignment of graph
//! terms to a group's variables and keeps those whose instantiated patterns
//! are all in the graph. Exponential, and deliberately naive.

use std::collections::BTreeMap;

use amv_core::rdf::{ns, Graph, Term, Triple};
use amv_core::sparql::{CmpOp, Element, Expr, GroupPattern, PredicatePattern, QueryAst, TermPattern, TriplePattern};

type Solution = BTreeMap<String, Term>;

/// Result rows aligned with `ast.result_vars()`, in the engine's documented
/// order (sorted by the N-Triples forms of the bindings).
pub fn brute_force(graph: &Graph, ast: &QueryAst) -> Vec<Vec<Option<Term>>> {
    let universe = universe(graph);
    let solutions = group(graph, &universe, &ast.pattern);
    let vars = ast.result_vars();
    let mut rows: Vec<Vec<Option<Term>>> = solutions
        .into_iter()
        .map(|s| vars.iter().map(|v| s.get(v).cloned()).collect())
        .collect();
    let key = |row: &Vec<Option<Term>>| row.iter().map(|c| c.as_ref().map(|t| t.to_string())).collect::<Vec<_>>();
    rows.sort_by_key(key);
    if ast.distinct {
        rows.dedup();
    }
    rows
}

fn universe(graph: &Graph) -> Vec<Term> {
    let mut terms: Vec<Term> = Vec::new();
    for t in graph.iter() {
        for term in [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()] {
            if !terms.contains(&term) {
                terms.push(term);
            }
        }
    }
    terms
}

fn group(graph: &Graph, universe: &[Term], g: &GroupPattern) -> Vec<Solution> {
    let patterns: Vec<&TriplePattern> = g
        .elements
        .iter()
        .filter_map(|e| match e {
            Element::Triple(tp) => Some(tp),
            _ => None,
        })
        .collect();
    let mut own_vars: Vec<String> = Vec::new();
    for tp in &patterns {
        for v in tp.vars() {
            if !own_vars.iter().any(|o| o == v) {
                own_vars.push(v.to_string());
            }
        }
    }

    let mut solutions = Vec::new();
    let mut counter = vec![0usize; own_vars.len()];
    let total = if own_vars.is_empty() { 1 } else { universe.len().pow(own_vars.len() as u32) };
    for _ in 0..total {
        let assignment: Solution = own_vars.iter().cloned().zip(counter.iter().map(|&i| universe[i].clone())).collect();
        if patterns.iter().all(|tp| holds(graph, tp, &assignment)) {
            solutions.push(assignment);
        }
        // Odometer increment.
        for digit in counter.iter_mut() {
            *digit += 1;
            if *digit < universe.len() {
                break;
            }
            *digit = 0;
        }
    }

    for e in &g.elements {
        let child = match e {
            Element::Union(a, b) => {
                let mut both = group(graph, universe, a);
                both.extend(group(graph, universe, b));
                both
            }
            Element::Group(inner) => group(graph, universe, inner),
            _ => continue,
        };
        let mut joined = Vec::new();
        for s in &solutions {
            for c in &child {
                if c.iter().all(|(k, v)| s.get(k).is_none_or(|x| x == v)) {
                    let mut merged = s.clone();
                    merged.extend(c.iter().map(|(k, v)| (k.clone(), v.clone())));
                    joined.push(merged);
                }
            }
        }
        solutions = joined;
    }

    for e in &g.elements {
        if let Element::Filter(expr) = e {
            solutions.retain(|s| filter(expr, s));
        }
    }
    solutions
}

fn holds(graph: &Graph, tp: &TriplePattern, a: &Solution) -> bool {
    let term = |p: &TermPattern| match p {
        TermPattern::Var(v) => a[v].clone(),
        TermPattern::Term(t) => t.clone(),
    };
    let predicate = match &tp.predicate {
        PredicatePattern::Var(v) => a[v].clone(),
        PredicatePattern::Iri(i) => Term::Iri(i.clone()),
    };
    let Term::Iri(predicate) = predicate else {
        return false;
    };
    match Triple::new(term(&tp.subject), predicate, term(&tp.object)) {
        Ok(t) => graph.contains(&t),
        Err(_) => false,
    }
}

fn filter(expr: &Expr, s: &Solution) -> bool {
    let mut vars = Vec::new();
    expr.vars(&mut vars);
    if vars.iter().any(|v| !s.contains_key(v)) {
        return false;
    }
    truth(&value(expr, s)) == Some(true)
}

#[derive(Clone, Debug)]
enum Val {
    Term(Term),
    Bool(bool),
}

/// `None` is an evaluation error.
fn value(expr: &Expr, s: &Solution) -> Option<Val> {
    match expr {
        Expr::Var(v) => s.get(v).cloned().map(Val::Term),
        Expr::Const(t) => Some(Val::Term(t.clone())),
        Expr::Not(a) => truth(&value(a, s)).map(|b| Val::Bool(!b)),
        Expr::And(a, b) => match (truth(&value(a, s)), truth(&value(b, s))) {
            (Some(false), _) | (_, Some(false)) => Some(Val::Bool(false)),
            (Some(true), Some(true)) => Some(Val::Bool(true)),
            _ => None,
        },
        Expr::Or(a, b) => match (truth(&value(a, s)), truth(&value(b, s))) {
            (Some(true), _) | (_, Some(true)) => Some(Val::Bool(true)),
            (Some(false), Some(false)) => Some(Val::Bool(false)),
            _ => None,
        },
        Expr::Compare(op, a, b) => {
            let a = value(a, s)?;
            let b = value(b, s)?;
            compare(*op, &a, &b).map(Val::Bool)
        }
    }
}

fn compare(op: CmpOp, a: &Val, b: &Val) -> Option<bool> {
    if let (Some(x), Some(y)) = (number(a), number(b)) {
        return Some(match op {
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
        });
    }
    let same = match (boolean(a), boolean(b)) {
        (Some(x), Some(y)) => x == y,
        _ => match (a, b) {
            (Val::Term(x), Val::Term(y)) => x == y,
            _ => false,
        },
    };
    match op {
        CmpOp::Eq => Some(same),
        CmpOp::Ne => Some(!same),
        _ => None,
    }
}

fn truth(v: &Option<Val>) -> Option<bool> {
    let v = v.as_ref()?;
    if let Some(b) = boolean(v) {
        return Some(b);
    }
    if let Some(n) = number(v) {
        return Some(n != 0);
    }
    match v {
        Val::Term(Term::Literal(l)) if l.datatype().as_str() == ns::xsd::STRING || l.lang().is_some() => Some(!l.lexical().is_empty()),
        _ => None,
    }
}

fn boolean(v: &Val) -> Option<bool> {
    match v {
        Val::Bool(b) => Some(*b),
        Val::Term(Term::Literal(l)) if l.datatype().as_str() == ns::xsd::BOOLEAN => match l.lexical() {
            "true" | "1" => Some(true),
            "false" | "0" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

const SCALE_DIGITS: usize = 18;

/// Integers and decimals scaled by 10^18; enough for generated values.
fn number(v: &Val) -> Option<i128> {
    let Val::Term(Term::Literal(l)) = v else {
        return None;
    };
    let dt = l.datatype().as_str();
    if dt != ns::xsd::INTEGER && dt != ns::xsd::DECIMAL {
        return None;
    }
    let text = l.lexical();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    assert!(frac.len() <= SCALE_DIGITS && whole.len() <= 18, "oracle cannot represent {text}");
    let padded = format!("{whole}{frac:0<SCALE_DIGITS$}");
    let magnitude: i128 = if padded.is_empty() { 0 } else { padded.parse().ok()? };
    Some(if negative { -magnitude } else { magnitude })
}
