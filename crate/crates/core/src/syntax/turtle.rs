use std::collections::HashMap;

use super::lex::{is_pn_chars, resolve_iri, Cursor, PResult};
use super::ParsedDocument;
use crate::error::ParseDiagnostic;
use crate::rdf::{ns, BlankNode, Graph, Iri, Literal, PrefixMap, Term, Triple};

/// Parses a Turtle document.
///
/// Collections `( ... )` are rejected with a diagnostic. Blank node labels
/// are renamed to `b0`, `b1`, ... in order of first occurrence.
pub fn parse_turtle(text: &str, base: Option<&Iri>) -> Result<ParsedDocument, ParseDiagnostic> {
    let mut parser = TurtleParser {
        cur: Cursor::new(text),
        prefixes: PrefixMap::new(),
        base: base.map(|b| b.as_str().to_string()),
        graph: Graph::new(),
        bnodes: HashMap::new(),
        next_bnode: 0,
    };
    parser.document()?;
    Ok(ParsedDocument {
        graph: parser.graph,
        prefixes: parser.prefixes,
    })
}

struct TurtleParser<'a> {
    cur: Cursor<'a>,
    prefixes: PrefixMap,
    base: Option<String>,
    graph: Graph,
    bnodes: HashMap<String, BlankNode>,
    next_bnode: usize,
}

impl TurtleParser<'_> {
    fn document(&mut self) -> PResult<()> {
        loop {
            self.cur.skip_ws();
            if self.cur.at_end() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> PResult<()> {
        if self.cur.starts_with("@prefix") {
            self.cur.reset(self.cur.pos() + "@prefix".len());
            self.prefix_decl()?;
            self.cur.skip_ws();
            return self.cur.expect('.', "after @prefix directive");
        }
        if self.cur.starts_with("@base") {
            self.cur.reset(self.cur.pos() + "@base".len());
            self.base_decl()?;
            self.cur.skip_ws();
            return self.cur.expect('.', "after @base directive");
        }
        if self.cur.eat_keyword("PREFIX") {
            return self.prefix_decl();
        }
        if self.cur.eat_keyword("BASE") {
            return self.base_decl();
        }
        self.triples()?;
        self.cur.skip_ws();
        self.cur.expect('.', "to end the statement")
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        self.cur.skip_ws();
        let at = self.cur.pos();
        let (label, local) = self.cur.read_pname()?;
        if !local.is_empty() {
            return Err(self.cur.error_at(at, "expected a prefix label ending in ':'"));
        }
        self.cur.skip_ws();
        let namespace = self.iriref()?;
        self.prefixes.insert(&label, namespace);
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        self.cur.skip_ws();
        let base = self.iriref()?;
        self.base = Some(base.into_string());
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        if self.cur.peek() == Some('[') {
            let (node, had_properties) = self.blank_node_property_list()?;
            self.cur.skip_ws();
            if had_properties && self.cur.peek() == Some('.') {
                return Ok(());
            }
            return self.predicate_object_list(&node);
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        match self.cur.peek() {
            Some('<') => Ok(self.iriref()?.into()),
            Some('_') if self.cur.starts_with("_:") => self.blank_node_label(),
            Some('(') => Err(self.cur.error("RDF collections are not supported")),
            Some(c) if c == ':' || c.is_alphabetic() => Ok(self.prefixed_name()?.into()),
            _ => Err(self.cur.error(format!("expected a subject, found {}", self.cur.describe_next()))),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        self.cur.skip_ws();
        let predicate = self.verb()?;
        self.object_list(subject, &predicate)?;
        loop {
            self.cur.skip_ws();
            if !self.cur.eat(';') {
                return Ok(());
            }
            self.cur.skip_ws();
            match self.cur.peek() {
                Some('.' | ']' | ';') | None => continue,
                _ => {
                    let predicate = self.verb()?;
                    self.object_list(subject, &predicate)?;
                }
            }
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        if self.cur.peek() == Some('a') && !self.cur.peek_nth(1).is_some_and(|c| is_pn_chars(c) || c == ':') {
            self.cur.bump();
            return Ok(crate::rdf::iri(ns::rdf::TYPE));
        }
        match self.cur.peek() {
            Some('<') => self.iriref(),
            Some(c) if c == ':' || c.is_alphabetic() => self.prefixed_name(),
            _ => Err(self.cur.error(format!("expected a predicate, found {}", self.cur.describe_next()))),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> PResult<()> {
        loop {
            self.cur.skip_ws();
            let object = self.object()?;
            let triple = Triple::new(subject.clone(), predicate.clone(), object).map_err(|e| self.cur.error(e.to_string()))?;
            self.graph.insert(triple);
            self.cur.skip_ws();
            if !self.cur.eat(',') {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> PResult<Term> {
        match self.cur.peek() {
            Some('<') => Ok(self.iriref()?.into()),
            Some('_') if self.cur.starts_with("_:") => self.blank_node_label(),
            Some('[') => Ok(self.blank_node_property_list()?.0),
            Some('(') => Err(self.cur.error("RDF collections are not supported")),
            Some('"' | '\'') => self.quoted_literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                let at = self.cur.pos();
                let (lexical, datatype) = self.cur.read_number()?;
                let lit = Literal::typed(lexical, crate::rdf::iri(datatype)).map_err(|e| self.cur.error_at(at, e.to_string()))?;
                Ok(lit.into())
            }
            Some(_) if self.cur.at_keyword("true") && self.cur.starts_with("true") => {
                self.cur.reset(self.cur.pos() + 4);
                Ok(Literal::boolean(true).into())
            }
            Some(_) if self.cur.at_keyword("false") && self.cur.starts_with("false") => {
                self.cur.reset(self.cur.pos() + 5);
                Ok(Literal::boolean(false).into())
            }
            Some(c) if c == ':' || c.is_alphabetic() => Ok(self.prefixed_name()?.into()),
            _ => Err(self.cur.error(format!("expected an object, found {}", self.cur.describe_next()))),
        }
    }

    fn quoted_literal(&mut self) -> PResult<Term> {
        let at = self.cur.pos();
        let lexical = self.cur.read_string()?;
        if self.cur.eat('@') {
            let tag = self.cur.read_lang_tag()?;
            let lit = Literal::lang_string(lexical, &tag).map_err(|e| self.cur.error_at(at, e.to_string()))?;
            return Ok(lit.into());
        }
        if self.cur.starts_with("^^") {
            self.cur.reset(self.cur.pos() + 2);
            let datatype = match self.cur.peek() {
                Some('<') => self.iriref()?,
                _ => self.prefixed_name()?,
            };
            let lit = Literal::typed(lexical, datatype).map_err(|e| self.cur.error_at(at, e.to_string()))?;
            return Ok(lit.into());
        }
        Ok(Literal::string(lexical).into())
    }

    /// Returns the node and whether the list had any properties.
    fn blank_node_property_list(&mut self) -> PResult<(Term, bool)> {
        self.cur.expect('[', "to open a blank node")?;
        let node: Term = self.fresh_bnode().into();
        self.cur.skip_ws();
        if self.cur.eat(']') {
            return Ok((node, false));
        }
        self.predicate_object_list(&node)?;
        self.cur.skip_ws();
        self.cur.expect(']', "to close the blank node property list")?;
        Ok((node, true))
    }

    fn blank_node_label(&mut self) -> PResult<Term> {
        self.cur.reset(self.cur.pos() + 2);
        let label = self.cur.read_blank_label()?;
        if let Some(b) = self.bnodes.get(&label) {
            return Ok(b.clone().into());
        }
        let b = self.fresh_bnode();
        self.bnodes.insert(label, b.clone());
        Ok(b.into())
    }

    fn fresh_bnode(&mut self) -> BlankNode {
        let b = BlankNode::new(format!("b{}", self.next_bnode)).expect("generated label");
        self.next_bnode += 1;
        b
    }

    fn iriref(&mut self) -> PResult<Iri> {
        let at = self.cur.pos();
        let raw = self.cur.read_iriref()?;
        let resolved = match &self.base {
            Some(base) => resolve_iri(base, &raw),
            None => raw,
        };
        Iri::new(resolved).map_err(|e| self.cur.error_at(at, e.to_string()))
    }

    fn prefixed_name(&mut self) -> PResult<Iri> {
        let at = self.cur.pos();
        let (label, local) = self.cur.read_pname()?;
        let namespace = self
            .prefixes
            .get(&label)
            .ok_or_else(|| self.cur.error_at(at, format!("undefined prefix '{label}:'")))?;
        Iri::new(format!("{}{local}", namespace.as_str())).map_err(|e| self.cur.error_at(at, e.to_string()))
    }
}
