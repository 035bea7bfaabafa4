//! A SPARQL subset: `PREFIX`, `SELECT [DISTINCT]`, basic graph patterns,
//! two-branch `UNION` and `FILTER` comparisons. Anything outside the subset
//! is a parse error rather than an approximation.

mod ast;
mod eval;
mod parse;
mod results;

pub use ast::{CmpOp, Element, Expr, GroupPattern, PredicatePattern, Projection, QueryAst, TermPattern, TriplePattern};
pub use eval::{eval_query, numeric_value};
pub use parse::parse_query;
pub use results::{results_to_json, results_to_text, SPARQL_RESULTS_JSON};

use crate::error::ParseDiagnostic;
use crate::rdf::{Graph, Term};

/// Query results: one column per variable, one row per solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionTable {
    pub vars: Vec<String>,
    /// Aligned with `vars`; `None` is an unbound cell.
    pub rows: Vec<Vec<Option<Term>>>,
}

impl SolutionTable {
    /// Builds a table with rows sorted by the N-Triples forms of their
    /// bindings (unbound first).
    pub fn new(vars: Vec<String>, mut rows: Vec<Vec<Option<Term>>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == vars.len()));
        rows.sort_by_cached_key(|row| row.iter().map(|v| v.as_ref().map(Term::to_string)).collect::<Vec<_>>());
        SolutionTable { vars, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Drops duplicate rows.
    pub fn distinct(mut self) -> Self {
        // `new` sorted the rows, so duplicates are adjacent.
        self.rows.dedup();
        self
    }

    /// Every binding of `var`, in row order.
    pub fn column(&self, var: &str) -> Vec<&Term> {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return Vec::new();
        };
        self.rows.iter().filter_map(|r| r[i].as_ref()).collect()
    }
}

/// Parses and evaluates in one step.
pub fn run_query(graph: &Graph, text: &str) -> Result<SolutionTable, ParseDiagnostic> {
    Ok(eval_query(graph, &parse_query(text)?))
}
