use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::SolutionTable;
use crate::rdf::{ns, PrefixMap, Term};
use crate::syntax::format_term;

/// Media type of [`results_to_json`] output.
pub const SPARQL_RESULTS_JSON: &str = "application/sparql-results+json";

#[derive(Serialize)]
struct Document<'a> {
    head: Head<'a>,
    results: Results<'a>,
}

#[derive(Serialize)]
struct Head<'a> {
    vars: &'a [String],
}

#[derive(Serialize)]
struct Results<'a> {
    bindings: Vec<Binding<'a>>,
}

struct Binding<'a> {
    vars: &'a [String],
    row: &'a [Option<Term>],
}

impl Serialize for Binding<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for (var, value) in self.vars.iter().zip(self.row) {
            if let Some(term) = value {
                map.serialize_entry(var, &JsonTerm(term))?;
            }
        }
        map.end()
    }
}

struct JsonTerm<'a>(&'a Term);

impl Serialize for JsonTerm<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self.0 {
            Term::Iri(iri) => {
                map.serialize_entry("type", "uri")?;
                map.serialize_entry("value", iri.as_str())?;
            }
            Term::BlankNode(b) => {
                map.serialize_entry("type", "bnode")?;
                map.serialize_entry("value", b.label())?;
            }
            Term::Literal(lit) => {
                map.serialize_entry("type", "literal")?;
                map.serialize_entry("value", lit.lexical())?;
                if let Some(lang) = lit.lang() {
                    map.serialize_entry("xml:lang", lang)?;
                } else if lit.datatype().as_str() != ns::xsd::STRING {
                    map.serialize_entry("datatype", lit.datatype().as_str())?;
                }
            }
        }
        map.end()
    }
}

/// The table in the W3C SPARQL 1.1 Query Results JSON format (compact, no
/// trailing newline). Unbound variables are omitted from their binding.
pub fn results_to_json(t: &SolutionTable) -> Vec<u8> {
    let doc = Document {
        head: Head { vars: &t.vars },
        results: Results {
            bindings: t.rows.iter().map(|row| Binding { vars: &t.vars, row }).collect(),
        },
    };
    serde_json::to_vec(&doc).expect("results serialize")
}

/// Aligned plain-text columns with compact names; unbound cells are empty.
pub fn results_to_text(t: &SolutionTable, prefixes: &PrefixMap) -> String {
    let cells: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|row| row.iter().map(|v| v.as_ref().map(|term| format_term(term, prefixes)).unwrap_or_default()).collect())
        .collect();
    let headers: Vec<String> = t.vars.iter().map(|v| format!("?{v}")).collect();
    let widths: Vec<usize> = (0..headers.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([headers[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |fields: &[String]| {
        let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&headers);
    out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
    for row in &cells {
        out.push_str(&line(row));
    }
    out.push_str(&format!("({} row{})\n", t.rows.len(), if t.rows.len() == 1 { "" } else { "s" }));
    out
}
