use std::collections::HashMap;

use super::lex::{Cursor, PResult};
use super::ParsedDocument;
use crate::error::ParseDiagnostic;
use crate::rdf::{BlankNode, Graph, Iri, Literal, PrefixMap, Term, Triple};

/// Parses line-oriented N-Triples. Only absolute IRIs are accepted.
pub fn parse_ntriples(text: &str) -> Result<ParsedDocument, ParseDiagnostic> {
    let mut cur = Cursor::new(text);
    let mut graph = Graph::new();
    let mut bnodes: HashMap<String, BlankNode> = HashMap::new();
    loop {
        skip_inline_ws(&mut cur);
        match cur.peek() {
            None => break,
            Some('\n' | '\r') => {
                cur.bump();
                continue;
            }
            Some('#') => {
                skip_comment(&mut cur);
                continue;
            }
            _ => {}
        }
        let subject = match cur.peek() {
            Some('<') => iri(&mut cur)?.into(),
            Some('_') => blank(&mut cur, &mut bnodes)?,
            _ => return Err(cur.error(format!("expected a subject, found {}", cur.describe_next()))),
        };
        skip_inline_ws(&mut cur);
        if cur.peek() != Some('<') {
            return Err(cur.error(format!("expected a predicate IRI, found {}", cur.describe_next())));
        }
        let predicate = iri(&mut cur)?;
        skip_inline_ws(&mut cur);
        let object = match cur.peek() {
            Some('<') => iri(&mut cur)?.into(),
            Some('_') => blank(&mut cur, &mut bnodes)?,
            Some('"') => literal(&mut cur)?,
            _ => return Err(cur.error(format!("expected an object, found {}", cur.describe_next()))),
        };
        skip_inline_ws(&mut cur);
        cur.expect('.', "to end the triple")?;
        skip_inline_ws(&mut cur);
        match cur.peek() {
            None | Some('\n' | '\r') => {}
            Some('#') => skip_comment(&mut cur),
            _ => return Err(cur.error(format!("expected end of line, found {}", cur.describe_next()))),
        }
        let triple = Triple::new(subject, predicate, object).map_err(|e| cur.error(e.to_string()))?;
        graph.insert(triple);
    }
    Ok(ParsedDocument {
        graph,
        prefixes: PrefixMap::new(),
    })
}

fn skip_inline_ws(cur: &mut Cursor<'_>) {
    while matches!(cur.peek(), Some(' ' | '\t')) {
        cur.bump();
    }
}

fn skip_comment(cur: &mut Cursor<'_>) {
    while !matches!(cur.peek(), None | Some('\n')) {
        cur.bump();
    }
}

fn iri(cur: &mut Cursor<'_>) -> PResult<Iri> {
    let at = cur.pos();
    let raw = cur.read_iriref()?;
    Iri::new(raw).map_err(|e| cur.error_at(at, e.to_string()))
}

fn blank(cur: &mut Cursor<'_>, bnodes: &mut HashMap<String, BlankNode>) -> PResult<Term> {
    if !cur.starts_with("_:") {
        return Err(cur.error("expected '_:'"));
    }
    cur.reset(cur.pos() + 2);
    let label = cur.read_blank_label()?;
    let next = bnodes.len();
    let node = bnodes
        .entry(label)
        .or_insert_with(|| BlankNode::new(format!("b{next}")).expect("generated label"));
    Ok(node.clone().into())
}

fn literal(cur: &mut Cursor<'_>) -> PResult<Term> {
    let at = cur.pos();
    if cur.starts_with("\"\"\"") {
        return Err(cur.error("long strings are not allowed in N-Triples"));
    }
    let lexical = cur.read_string()?;
    let lit = if cur.eat('@') {
        let tag = cur.read_lang_tag()?;
        Literal::lang_string(lexical, &tag)
    } else if cur.starts_with("^^") {
        cur.reset(cur.pos() + 2);
        let datatype = iri(cur)?;
        Literal::typed(lexical, datatype)
    } else {
        Ok(Literal::string(lexical))
    };
    lit.map(Term::from).map_err(|e| cur.error_at(at, e.to_string()))
}
