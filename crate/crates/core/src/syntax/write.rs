use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::lex::{is_pn_chars, is_pn_chars_base, is_pn_chars_u};
use crate::rdf::{escape_string, ns, Graph, Iri, Literal, PrefixMap, Term, Triple};

/// Deterministic blank node relabelling: `b0`, `b1`, ... in first-occurrence
/// order over the sorted triples.
fn blank_labels(g: &Graph) -> BTreeMap<Term, String> {
    let mut labels = BTreeMap::new();
    for t in g.iter() {
        for term in [t.subject(), t.object()] {
            if term.is_blank_node() && !labels.contains_key(term) {
                let next = labels.len();
                labels.insert(term.clone(), format!("b{next}"));
            }
        }
    }
    labels
}

fn nt_term(term: &Term, labels: &BTreeMap<Term, String>) -> String {
    match term {
        Term::BlankNode(_) => format!("_:{}", labels[term]),
        other => other.to_string(),
    }
}

/// Canonical N-Triples: one triple per line, lines sorted, LF endings.
pub fn write_ntriples(g: &Graph) -> String {
    let labels = blank_labels(g);
    let mut lines: Vec<String> = g
        .iter()
        .map(|t| {
            format!(
                "{} {} {} .",
                nt_term(t.subject(), &labels),
                t.predicate(),
                nt_term(t.object(), &labels)
            )
        })
        .collect();
    lines.sort();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn is_plain_prefix(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if is_pn_chars_base(c) => {
            !label.ends_with('.') && chars.all(|c| is_pn_chars(c) || c == '.')
        }
        _ => false,
    }
}

fn is_plain_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() => {
            !local.ends_with('.') && chars.all(|c| is_pn_chars(c) || c == '.' || c == ':')
        }
        _ => false,
    }
}

fn turtle_iri(iri: &Iri, pm: &PrefixMap) -> String {
    if let Some((label, local)) = pm.compact(iri) {
        if is_plain_prefix(label) && is_plain_local(local) {
            return format!("{label}:{local}");
        }
    }
    iri.to_string()
}

fn turtle_literal(lit: &Literal, pm: &PrefixMap) -> String {
    let quoted = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(lang) = lit.lang() {
        format!("{quoted}@{lang}")
    } else if lit.is_plain_string() {
        quoted
    } else {
        format!("{quoted}^^{}", turtle_iri(lit.datatype(), pm))
    }
}

fn turtle_term(term: &Term, pm: &PrefixMap, labels: &BTreeMap<Term, String>) -> String {
    match term {
        Term::Iri(iri) => turtle_iri(iri, pm),
        Term::BlankNode(_) => format!("_:{}", labels[term]),
        Term::Literal(lit) => turtle_literal(lit, pm),
    }
}

/// Turtle grouped by subject, with `rdf:type` written first as `a`.
pub fn write_turtle(g: &Graph, pm: &PrefixMap) -> String {
    let labels = blank_labels(g);
    let mut out = String::new();
    for (label, namespace) in pm.iter() {
        if is_plain_prefix(label) {
            let _ = writeln!(out, "@prefix {label}: {namespace} .");
        }
    }
    let rdf_type = crate::rdf::iri(ns::rdf::TYPE);
    let mut by_subject: BTreeMap<&Term, Vec<Triple>> = BTreeMap::new();
    let triples: Vec<Triple> = g.iter().collect();
    for t in &triples {
        by_subject.entry(t.subject()).or_default().push(t.clone());
    }
    for (subject, mut ts) in by_subject {
        ts.sort_by_key(|t| (t.predicate() != &rdf_type, t.predicate().clone(), t.object().clone()));
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&turtle_term(subject, pm, &labels));
        let mut i = 0;
        while i < ts.len() {
            let predicate = ts[i].predicate().clone();
            let verb = if predicate == rdf_type {
                "a".to_string()
            } else {
                turtle_iri(&predicate, pm)
            };
            let mut objects = Vec::new();
            while i < ts.len() && ts[i].predicate() == &predicate {
                objects.push(turtle_term(ts[i].object(), pm, &labels));
                i += 1;
            }
            let sep = if i < ts.len() { " ;" } else { " ." };
            let _ = write!(out, "\n    {verb} {}{sep}", objects.join(", "));
        }
        out.push('\n');
    }
    out
}

/// One term in compact Turtle notation, for human-facing output. Numbers
/// and booleans whose lexical form Turtle can write bare are written bare.
pub fn format_term(term: &Term, pm: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => turtle_iri(iri, pm),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(lit) if has_bare_form(lit) => lit.lexical().to_string(),
        Term::Literal(lit) => turtle_literal(lit, pm),
    }
}

fn has_bare_form(lit: &Literal) -> bool {
    let digits = lit.lexical().trim_start_matches(['+', '-']);
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    match lit.datatype().as_str() {
        ns::xsd::INTEGER => all_digits(digits),
        ns::xsd::DECIMAL => digits.split_once('.').is_some_and(|(w, f)| all_digits(f) && (w.is_empty() || all_digits(w))),
        ns::xsd::BOOLEAN => matches!(lit.lexical(), "true" | "false"),
        _ => false,
    }
}
