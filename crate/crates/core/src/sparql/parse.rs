use super::ast::*;
use crate::error::ParseDiagnostic;
use crate::rdf::{ns, Iri, Literal, PrefixMap, Term};
use crate::syntax::{resolve_iri, Cursor, PResult};

/// Keywords outside the supported subset, reported by name.
const UNSUPPORTED: &[&str] = &[
    "OPTIONAL", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES", "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING",
    "CONSTRUCT", "ASK", "DESCRIBE", "REDUCED", "FROM", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP", "CREATE",
    "EXISTS", "NOT", "IN",
];

pub fn parse_query(text: &str) -> Result<QueryAst, ParseDiagnostic> {
    let mut p = QueryParser {
        cur: Cursor::new(text),
        prefixes: PrefixMap::standard(),
        base: None,
    };
    p.query()
}

struct QueryParser<'a> {
    cur: Cursor<'a>,
    prefixes: PrefixMap,
    base: Option<String>,
}

impl QueryParser<'_> {
    fn query(&mut self) -> PResult<QueryAst> {
        self.prologue()?;
        self.cur.skip_ws();
        self.reject_unsupported()?;
        if !self.cur.eat_keyword("SELECT") {
            return Err(self.cur.error(format!("expected SELECT, found {}", self.cur.describe_next())));
        }
        self.cur.skip_ws();
        self.reject_unsupported()?;
        let distinct = self.cur.eat_keyword("DISTINCT");
        self.cur.skip_ws();
        let projection = self.projection()?;
        self.cur.skip_ws();
        self.reject_unsupported()?;
        self.cur.eat_keyword("WHERE");
        self.cur.skip_ws();
        let pattern = self.group()?;
        self.cur.skip_ws();
        if !self.cur.at_end() {
            self.reject_unsupported()?;
            return Err(self.cur.error(format!("unexpected {} after the query pattern", self.cur.describe_next())));
        }
        Ok(QueryAst {
            prefixes: self.prefixes.clone(),
            projection,
            distinct,
            pattern,
        })
    }

    fn reject_unsupported(&self) -> PResult<()> {
        for kw in UNSUPPORTED {
            if self.cur.at_keyword(kw) {
                return Err(self.cur.error(format!("unsupported SPARQL feature: {kw}")));
            }
        }
        Ok(())
    }

    fn prologue(&mut self) -> PResult<()> {
        loop {
            self.cur.skip_ws();
            if self.cur.eat_keyword("PREFIX") {
                self.cur.skip_ws();
                let at = self.cur.pos();
                let (label, local) = self.cur.read_pname()?;
                if !local.is_empty() {
                    return Err(self.cur.error_at(at, "expected a prefix label ending in ':'"));
                }
                self.cur.skip_ws();
                let namespace = self.iriref()?;
                self.prefixes.insert(&label, namespace);
            } else if self.cur.eat_keyword("BASE") {
                self.cur.skip_ws();
                self.base = Some(self.iriref()?.into_string());
            } else {
                return Ok(());
            }
        }
    }

    fn projection(&mut self) -> PResult<Projection> {
        if self.cur.eat('*') {
            return Ok(Projection::Star);
        }
        let mut vars: Vec<String> = Vec::new();
        loop {
            match self.cur.peek() {
                Some('?' | '$') => {
                    let at = self.cur.pos();
                    let v = self.var()?;
                    if vars.contains(&v) {
                        return Err(self.cur.error_at(at, format!("variable ?{v} is selected twice")));
                    }
                    vars.push(v);
                }
                Some('(') => return Err(self.cur.error("unsupported SPARQL feature: projection expressions")),
                _ => break,
            }
            self.cur.skip_ws();
        }
        if vars.is_empty() {
            return Err(self.cur.error(format!("expected '*' or variables after SELECT, found {}", self.cur.describe_next())));
        }
        Ok(Projection::Vars(vars))
    }

    fn var(&mut self) -> PResult<String> {
        let at = self.cur.pos();
        self.cur.bump();
        let mut name = String::new();
        while let Some(c) = self.cur.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.cur.bump();
                name.push(c);
            } else {
                break;
            }
        }
        if name.is_empty() {
            return Err(self.cur.error_at(at, "expected a variable name"));
        }
        Ok(name)
    }

    fn group(&mut self) -> PResult<GroupPattern> {
        self.cur.expect('{', "to open a group pattern")?;
        let mut elements = Vec::new();
        // A '.' is allowed once after a triples block or a nested pattern.
        let mut dot_allowed = false;
        loop {
            self.cur.skip_ws();
            match self.cur.peek() {
                None => return Err(self.cur.error("unterminated group pattern, expected '}'")),
                Some('}') => {
                    self.cur.bump();
                    return Ok(GroupPattern { elements });
                }
                Some('.') if dot_allowed => {
                    self.cur.bump();
                    dot_allowed = false;
                }
                Some('.') => return Err(self.cur.error("unexpected '.'")),
                Some('{') => {
                    let mut left = self.group()?;
                    let mut is_union = false;
                    loop {
                        self.cur.skip_ws();
                        if !self.cur.eat_keyword("UNION") {
                            break;
                        }
                        self.cur.skip_ws();
                        let right = self.group()?;
                        left = GroupPattern {
                            elements: vec![Element::Union(left, right)],
                        };
                        is_union = true;
                    }
                    if is_union {
                        // Unwrap the outermost union into this group.
                        elements.extend(left.elements);
                    } else {
                        elements.push(Element::Group(left));
                    }
                    dot_allowed = true;
                }
                Some(_) if self.cur.at_keyword("FILTER") => {
                    self.cur.eat_keyword("FILTER");
                    self.cur.skip_ws();
                    if self.cur.peek() != Some('(') {
                        return Err(self.unsupported_call_or(format!(
                            "expected '(' after FILTER, found {}",
                            self.cur.describe_next()
                        )));
                    }
                    elements.push(Element::Filter(self.bracketed()?));
                    dot_allowed = true;
                }
                Some(_) => {
                    self.reject_unsupported()?;
                    if dot_allowed && !matches!(elements.last(), Some(Element::Union(..) | Element::Group(_) | Element::Filter(_))) {
                        return Err(self.cur.error(format!("expected '.' or '}}', found {}", self.cur.describe_next())));
                    }
                    self.triples_same_subject(&mut elements)?;
                    dot_allowed = true;
                }
            }
        }
    }

    fn unsupported_call_or(&self, fallback: String) -> ParseDiagnostic {
        if self.cur.peek().is_some_and(|c| c.is_alphabetic()) {
            self.cur.error("unsupported SPARQL feature: function calls in FILTER")
        } else {
            self.cur.error(fallback)
        }
    }

    fn triples_same_subject(&mut self, out: &mut Vec<Element>) -> PResult<()> {
        let subject = self.term_pattern("subject")?;
        loop {
            self.cur.skip_ws();
            let predicate = self.predicate()?;
            loop {
                self.cur.skip_ws();
                let object = self.term_pattern("object")?;
                out.push(Element::Triple(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                }));
                self.cur.skip_ws();
                if !self.cur.eat(',') {
                    break;
                }
            }
            self.cur.skip_ws();
            if !self.cur.eat(';') {
                return Ok(());
            }
            self.cur.skip_ws();
            while self.cur.eat(';') {
                self.cur.skip_ws();
            }
            if matches!(self.cur.peek(), Some('.' | '}')) || self.cur.at_keyword("FILTER") {
                return Ok(());
            }
        }
    }

    fn predicate(&mut self) -> PResult<PredicatePattern> {
        let p = if self.cur.peek() == Some('a') && !self.cur.peek_nth(1).is_some_and(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '.')) {
            self.cur.bump();
            PredicatePattern::Iri(crate::rdf::iri(ns::rdf::TYPE))
        } else {
            match self.cur.peek() {
                Some('?' | '$') => PredicatePattern::Var(self.var()?),
                Some('<') => PredicatePattern::Iri(self.iriref()?),
                Some('^' | '!' | '(') => return Err(self.cur.error("unsupported SPARQL feature: property paths")),
                Some(c) if c == ':' || c.is_alphabetic() => PredicatePattern::Iri(self.prefixed_name()?),
                _ => return Err(self.cur.error(format!("expected a predicate, found {}", self.cur.describe_next()))),
            }
        };
        if matches!(self.cur.peek(), Some('/' | '|' | '*' | '+')) || (self.cur.peek() == Some('?') && !self.cur.peek_nth(1).is_some_and(|c| c.is_alphanumeric() || c == '_')) {
            return Err(self.cur.error("unsupported SPARQL feature: property paths"));
        }
        Ok(p)
    }

    fn term_pattern(&mut self, role: &str) -> PResult<TermPattern> {
        match self.cur.peek() {
            Some('?' | '$') => Ok(TermPattern::Var(self.var()?)),
            Some('_') if self.cur.starts_with("_:") => Err(self.cur.error("blank nodes are not supported in queries; use a variable")),
            Some('[') => Err(self.cur.error("blank nodes are not supported in queries; use a variable")),
            Some('(') => Err(self.cur.error("unsupported SPARQL feature: collections")),
            _ => match self.constant()? {
                Some(term) => Ok(TermPattern::Term(term)),
                None => Err(self.cur.error(format!("expected a {role}, found {}", self.cur.describe_next()))),
            },
        }
    }

    /// An IRI or literal constant; `None` if the input does not start one.
    fn constant(&mut self) -> PResult<Option<Term>> {
        let at = self.cur.pos();
        let term: Term = match self.cur.peek() {
            Some('<') => self.iriref()?.into(),
            Some('"' | '\'') => {
                let lexical = self.cur.read_string()?;
                if self.cur.eat('@') {
                    let tag = self.cur.read_lang_tag()?;
                    Literal::lang_string(lexical, &tag).map_err(|e| self.cur.error_at(at, e.to_string()))?.into()
                } else if self.cur.starts_with("^^") {
                    self.cur.reset(self.cur.pos() + 2);
                    let datatype = match self.cur.peek() {
                        Some('<') => self.iriref()?,
                        _ => self.prefixed_name()?,
                    };
                    Literal::typed(lexical, datatype).map_err(|e| self.cur.error_at(at, e.to_string()))?.into()
                } else {
                    Literal::string(lexical).into()
                }
            }
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                let (lexical, datatype) = self.cur.read_number()?;
                if datatype == ns::xsd::DOUBLE {
                    return Err(self.cur.error_at(at, "unsupported SPARQL feature: floating-point literals"));
                }
                Literal::typed(lexical, crate::rdf::iri(datatype))
                    .map_err(|e| self.cur.error_at(at, e.to_string()))?
                    .into()
            }
            Some(_) if self.cur.eat_keyword("true") => Literal::boolean(true).into(),
            Some(_) if self.cur.eat_keyword("false") => Literal::boolean(false).into(),
            Some(c) if c == ':' || c.is_alphabetic() => {
                self.reject_unsupported()?;
                self.prefixed_name()?.into()
            }
            _ => return Ok(None),
        };
        Ok(Some(term))
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
            .ok_or_else(|| self.cur.error_at(at, format!("undefined prefix {label:?}")))?;
        Iri::new(format!("{}{local}", namespace.as_str())).map_err(|e| self.cur.error_at(at, e.to_string()))
    }

    // Expressions, loosest binding first.

    fn bracketed(&mut self) -> PResult<Expr> {
        self.cur.expect('(', "to open an expression")?;
        self.cur.skip_ws();
        let e = self.or_expr()?;
        self.cur.skip_ws();
        self.cur.expect(')', "to close the expression")?;
        Ok(e)
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut left = self.and_expr()?;
        loop {
            self.cur.skip_ws();
            if !self.cur.starts_with("||") {
                return Ok(left);
            }
            self.cur.reset(self.cur.pos() + 2);
            self.cur.skip_ws();
            let right = self.and_expr()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut left = self.relational()?;
        loop {
            self.cur.skip_ws();
            if !self.cur.starts_with("&&") {
                return Ok(left);
            }
            self.cur.reset(self.cur.pos() + 2);
            self.cur.skip_ws();
            let right = self.relational()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
    }

    fn relational(&mut self) -> PResult<Expr> {
        let left = self.unary()?;
        self.cur.skip_ws();
        let op = if self.cur.starts_with("<=") {
            Some((CmpOp::Le, 2))
        } else if self.cur.starts_with(">=") {
            Some((CmpOp::Ge, 2))
        } else if self.cur.starts_with("!=") {
            Some((CmpOp::Ne, 2))
        } else if self.cur.starts_with("<") {
            Some((CmpOp::Lt, 1))
        } else if self.cur.starts_with(">") {
            Some((CmpOp::Gt, 1))
        } else if self.cur.starts_with("=") {
            Some((CmpOp::Eq, 1))
        } else {
            None
        };
        let Some((op, len)) = op else {
            if matches!(self.cur.peek(), Some('+' | '-' | '*' | '/')) {
                return Err(self.cur.error("unsupported SPARQL feature: arithmetic"));
            }
            return Ok(left);
        };
        self.cur.reset(self.cur.pos() + len);
        self.cur.skip_ws();
        let right = self.unary()?;
        Ok(Expr::Compare(op, Box::new(left), Box::new(right)))
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.cur.peek() {
            Some('!') => {
                self.cur.bump();
                self.cur.skip_ws();
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Some('(') => self.bracketed(),
            Some('?' | '$') => Ok(Expr::Var(self.var()?)),
            _ => {
                if self.cur.peek().is_some_and(|c| c.is_alphabetic())
                    && !self.cur.at_keyword("true")
                    && !self.cur.at_keyword("false")
                {
                    // A name followed by '(' is a function call.
                    let save = self.cur.pos();
                    while self.cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                        self.cur.bump();
                    }
                    let is_call = self.cur.peek() == Some('(');
                    self.cur.reset(save);
                    if is_call {
                        return Err(self.cur.error("unsupported SPARQL feature: function calls in FILTER"));
                    }
                }
                match self.constant()? {
                    Some(term) => Ok(Expr::Const(term)),
                    None => Err(self.cur.error(format!("expected an expression, found {}", self.cur.describe_next()))),
                }
            }
        }
    }
}
