use std::fmt;

use crate::rdf::{Iri, PrefixMap, Term};

/// A term position in a pattern: a constant or a variable name (without `?`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TermPattern {
    Var(String),
    Term(Term),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PredicatePattern {
    Var(String),
    Iri(Iri),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: PredicatePattern,
    pub object: TermPattern,
}

impl TriplePattern {
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        let s = match &self.subject {
            TermPattern::Var(v) => Some(v.as_str()),
            TermPattern::Term(_) => None,
        };
        let p = match &self.predicate {
            PredicatePattern::Var(v) => Some(v.as_str()),
            PredicatePattern::Iri(_) => None,
        };
        let o = match &self.object {
            TermPattern::Var(v) => Some(v.as_str()),
            TermPattern::Term(_) => None,
        };
        [s, p, o].into_iter().flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

/// A filter expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Const(Term),
    Compare(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Const(_) => {}
            Expr::Compare(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Not(a) => a.vars(out),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "?{v}"),
            Expr::Const(t) => write!(f, "{t}"),
            Expr::Compare(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::Not(a) => write!(f, "!{a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Triple(TriplePattern),
    /// `{ left } UNION { right }`; longer chains nest on the left.
    Union(GroupPattern, GroupPattern),
    Filter(Expr),
    /// A nested `{ ... }` that is not part of a union.
    Group(GroupPattern),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupPattern {
    pub elements: Vec<Element>,
}

impl GroupPattern {
    /// Variables in order of first appearance, including nested groups
    /// and filters.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        for element in &self.elements {
            match element {
                Element::Triple(tp) => {
                    for v in tp.vars() {
                        if !out.iter().any(|o| o == v) {
                            out.push(v.to_string());
                        }
                    }
                }
                Element::Union(a, b) => {
                    a.collect_vars(out);
                    b.collect_vars(out);
                }
                Element::Filter(e) => e.vars(out),
                Element::Group(g) => g.collect_vars(out),
            }
        }
    }

    pub fn triple_patterns(&self) -> impl Iterator<Item = &TriplePattern> {
        self.elements.iter().filter_map(|e| match e {
            Element::Triple(tp) => Some(tp),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Star,
    Vars(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryAst {
    /// The standard prefixes overlaid with the query's own declarations.
    pub prefixes: PrefixMap,
    pub projection: Projection,
    pub distinct: bool,
    pub pattern: GroupPattern,
}

impl QueryAst {
    /// The result columns, in order.
    pub fn result_vars(&self) -> Vec<String> {
        match &self.projection {
            Projection::Vars(vars) => vars.clone(),
            Projection::Star => self
                .pattern
                .vars()
                .into_iter()
                .filter(|v| self.pattern_binds(v))
                .collect(),
        }
    }

    // Variables that only occur in filters are never bound, so `*` skips them.
    fn pattern_binds(&self, var: &str) -> bool {
        fn binds(g: &GroupPattern, var: &str) -> bool {
            g.elements.iter().any(|e| match e {
                Element::Triple(tp) => tp.vars().any(|v| v == var),
                Element::Union(a, b) => binds(a, var) || binds(b, var),
                Element::Group(inner) => binds(inner, var),
                Element::Filter(_) => false,
            })
        }
        binds(&self.pattern, var)
    }
}
