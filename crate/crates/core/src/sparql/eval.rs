use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::*;
use super::SolutionTable;
use crate::rdf::{ns, Graph, Literal, Term};

type Row = Vec<Option<Term>>;

/// Evaluates `q` over one graph revision.
pub fn eval_query(graph: &Graph, q: &QueryAst) -> SolutionTable {
    let all_vars = q.pattern.vars();
    let ev = Evaluator { graph, vars: &all_vars };
    let rows = ev.group(&q.pattern);

    let vars = q.result_vars();
    let columns: Vec<Option<usize>> = vars.iter().map(|v| all_vars.iter().position(|a| a == v)).collect();
    let rows = rows
        .into_iter()
        .map(|row| columns.iter().map(|c| c.and_then(|i| row[i].clone())).collect())
        .collect();
    let table = SolutionTable::new(vars, rows);
    if q.distinct {
        table.distinct()
    } else {
        table
    }
}

struct Evaluator<'a> {
    graph: &'a Graph,
    vars: &'a [String],
}

impl Evaluator<'_> {
    fn index(&self, var: &str) -> usize {
        self.vars.iter().position(|v| v == var).expect("variable collected from the pattern")
    }

    /// Children first (joined in order), then the group's own basic graph
    /// pattern, then its filters.
    fn group(&self, group: &GroupPattern) -> Vec<Row> {
        let mut rows: Vec<Row> = vec![vec![None; self.vars.len()]];
        for element in &group.elements {
            match element {
                Element::Union(a, b) => {
                    let mut branch = self.group(a);
                    branch.extend(self.group(b));
                    rows = join(&rows, &branch);
                }
                Element::Group(inner) => {
                    let inner = self.group(inner);
                    rows = join(&rows, &inner);
                }
                Element::Triple(_) | Element::Filter(_) => {}
            }
        }
        let patterns: Vec<&TriplePattern> = group.triple_patterns().collect();
        for tp in self.join_order(&rows, patterns) {
            rows = self.extend(rows, tp);
            if rows.is_empty() {
                break;
            }
        }
        for element in &group.elements {
            if let Element::Filter(expr) = element {
                rows.retain(|row| self.filter_holds(expr, row));
            }
        }
        rows
    }

    /// Most bound positions first; ties keep the written order.
    fn join_order<'p>(&self, rows: &[Row], mut pending: Vec<&'p TriplePattern>) -> Vec<&'p TriplePattern> {
        let mut bound: BTreeSet<&str> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| !rows.is_empty() && rows.iter().all(|r| r[*i].is_some()))
            .map(|(_, v)| v.as_str())
            .collect();
        let mut order = Vec::with_capacity(pending.len());
        while !pending.is_empty() {
            let score = |tp: &TriplePattern| {
                let s = match &tp.subject {
                    TermPattern::Term(_) => 1,
                    TermPattern::Var(v) => usize::from(bound.contains(v.as_str())),
                };
                let p = match &tp.predicate {
                    PredicatePattern::Iri(_) => 1,
                    PredicatePattern::Var(v) => usize::from(bound.contains(v.as_str())),
                };
                let o = match &tp.object {
                    TermPattern::Term(_) => 1,
                    TermPattern::Var(v) => usize::from(bound.contains(v.as_str())),
                };
                s + p + o
            };
            let mut best = 0;
            for (i, tp) in pending.iter().enumerate() {
                if score(tp) > score(pending[best]) {
                    best = i;
                }
            }
            let tp = pending.remove(best);
            bound.extend(tp.vars());
            order.push(tp);
        }
        order
    }

    fn extend(&self, rows: Vec<Row>, tp: &TriplePattern) -> Vec<Row> {
        let mut out = Vec::new();
        for row in rows {
            let s = self.resolve(&tp.subject, &row);
            let p = match &tp.predicate {
                PredicatePattern::Iri(iri) => Some(iri.clone()),
                PredicatePattern::Var(v) => match &row[self.index(v)] {
                    Some(Term::Iri(iri)) => Some(iri.clone()),
                    // Only IRIs can be predicates.
                    Some(_) => continue,
                    None => None,
                },
            };
            for triple in self.graph.matching(s.as_ref(), p.as_ref(), self.resolve(&tp.object, &row).as_ref()) {
                let mut next = row.clone();
                let ok = self.bind(&mut next, &tp.subject, triple.subject())
                    && self.bind_predicate(&mut next, &tp.predicate, triple.predicate())
                    && self.bind(&mut next, &tp.object, triple.object());
                if ok {
                    out.push(next);
                }
            }
        }
        out
    }

    fn resolve(&self, pattern: &TermPattern, row: &Row) -> Option<Term> {
        match pattern {
            TermPattern::Term(t) => Some(t.clone()),
            TermPattern::Var(v) => row[self.index(v)].clone(),
        }
    }

    fn bind(&self, row: &mut Row, pattern: &TermPattern, value: &Term) -> bool {
        match pattern {
            TermPattern::Term(_) => true,
            TermPattern::Var(v) => {
                let slot = &mut row[self.index(v)];
                match slot {
                    Some(existing) => existing == value,
                    None => {
                        *slot = Some(value.clone());
                        true
                    }
                }
            }
        }
    }

    fn bind_predicate(&self, row: &mut Row, pattern: &PredicatePattern, value: &crate::rdf::Iri) -> bool {
        match pattern {
            PredicatePattern::Iri(_) => true,
            PredicatePattern::Var(v) => self.bind(row, &TermPattern::Var(v.clone()), &Term::Iri(value.clone())),
        }
    }

    fn filter_holds(&self, expr: &Expr, row: &Row) -> bool {
        let mut referenced = Vec::new();
        expr.vars(&mut referenced);
        if referenced.iter().any(|v| row[self.index(v)].is_none()) {
            return false;
        }
        let lookup = |v: &str| row[self.index(v)].clone();
        matches!(effective_boolean(&evaluate(expr, &lookup)), Ok(true))
    }
}

fn join(left: &[Row], right: &[Row]) -> Vec<Row> {
    let mut out = Vec::new();
    for l in left {
        'pairs: for r in right {
            let mut merged = l.clone();
            for (slot, value) in merged.iter_mut().zip(r) {
                match (slot.as_ref(), value) {
                    (Some(a), Some(b)) if a != b => continue 'pairs,
                    (None, Some(b)) => *slot = Some(b.clone()),
                    _ => {}
                }
            }
            out.push(merged);
        }
    }
    out
}

/// A filter value; `Err` is the SPARQL type-error outcome.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Value {
    Term(Term),
    Bool(bool),
}

type EvalResult = Result<Value, ()>;

pub(crate) fn evaluate(expr: &Expr, lookup: &dyn Fn(&str) -> Option<Term>) -> EvalResult {
    match expr {
        Expr::Var(v) => lookup(v).map(Value::Term).ok_or(()),
        Expr::Const(t) => Ok(Value::Term(t.clone())),
        Expr::Not(a) => Ok(Value::Bool(!effective_boolean(&evaluate(a, lookup))?)),
        Expr::And(a, b) => {
            match (effective_boolean(&evaluate(a, lookup)), effective_boolean(&evaluate(b, lookup))) {
                (Ok(false), _) | (_, Ok(false)) => Ok(Value::Bool(false)),
                (Ok(true), Ok(true)) => Ok(Value::Bool(true)),
                _ => Err(()),
            }
        }
        Expr::Or(a, b) => {
            match (effective_boolean(&evaluate(a, lookup)), effective_boolean(&evaluate(b, lookup))) {
                (Ok(true), _) | (_, Ok(true)) => Ok(Value::Bool(true)),
                (Ok(false), Ok(false)) => Ok(Value::Bool(false)),
                _ => Err(()),
            }
        }
        Expr::Compare(op, a, b) => {
            let a = as_term(evaluate(a, lookup)?);
            let b = as_term(evaluate(b, lookup)?);
            compare(*op, &a, &b).map(Value::Bool)
        }
    }
}

fn as_term(v: Value) -> Term {
    match v {
        Value::Term(t) => t,
        Value::Bool(b) => Literal::boolean(b).into(),
    }
}

fn compare(op: CmpOp, a: &Term, b: &Term) -> Result<bool, ()> {
    if let (Some(x), Some(y)) = (numeric_value(a), numeric_value(b)) {
        let ord = x.cmp(&y);
        return Ok(match op {
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
        });
    }
    let equal = match (boolean_value(a), boolean_value(b)) {
        (Some(x), Some(y)) => x == y,
        _ => a == b,
    };
    match op {
        CmpOp::Eq => Ok(equal),
        CmpOp::Ne => Ok(!equal),
        // Ordering is defined for numerics only.
        _ => Err(()),
    }
}

fn effective_boolean(v: &EvalResult) -> Result<bool, ()> {
    match v {
        Err(()) => Err(()),
        Ok(Value::Bool(b)) => Ok(*b),
        Ok(Value::Term(t)) => {
            if let Some(b) = boolean_value(t) {
                return Ok(b);
            }
            if let Some(n) = numeric_value(t) {
                return Ok(!n.is_zero());
            }
            match t {
                Term::Literal(lit) if lit.is_plain_string() || lit.lang().is_some() => Ok(!lit.lexical().is_empty()),
                _ => Err(()),
            }
        }
    }
}

fn boolean_value(t: &Term) -> Option<bool> {
    let lit = t.as_literal()?;
    if lit.datatype().as_str() != ns::xsd::BOOLEAN {
        return None;
    }
    match lit.lexical() {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

/// Exact value of a valid `xsd:integer` or `xsd:decimal` literal.
pub fn numeric_value(t: &Term) -> Option<BigRational> {
    let lit = t.as_literal()?;
    let datatype = lit.datatype().as_str();
    if datatype != ns::xsd::INTEGER && datatype != ns::xsd::DECIMAL {
        return None;
    }
    let text = lit.lexical();
    let (negative, digits) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer = BigInt::from_str(&format!("{whole}{frac}")).ok()?;
    let denom = (0..frac.len()).fold(BigInt::one(), |acc, _| acc * 10);
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}
