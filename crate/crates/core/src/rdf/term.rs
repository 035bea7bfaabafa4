use std::fmt;

use super::ns;
use crate::error::RdfError;

/// Schemes whose IRIs legitimately have no `//` authority part.
const OPAQUE_SCHEMES: &[&str] = &["urn", "mailto", "tag", "data", "tel", "did", "geo", "news", "file"];

/// An absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    /// Validates `text` as an absolute IRI.
    ///
    /// A scheme alone is not enough: `amv:Algorithm` has the shape of an
    /// absolute IRI but is almost always an unexpanded prefixed name, so
    /// hierarchical IRIs must carry `//` after the scheme unless the scheme
    /// is a known opaque one (`urn:`, `mailto:`, ...).
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        let malformed = |reason: &str| RdfError::MalformedIri {
            iri: text.clone(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(malformed("empty"));
        }
        if let Some(c) = text.chars().find(|c| is_forbidden_iri_char(*c)) {
            return Err(malformed(&format!("forbidden character {c:?}")));
        }
        let Some(colon) = text.find(':') else {
            return Err(malformed("relative reference (no scheme)"));
        };
        let scheme = &text[..colon];
        let mut chars = scheme.chars();
        let scheme_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
        if !scheme_ok {
            return Err(malformed("relative reference (no scheme)"));
        }
        let rest = &text[colon + 1..];
        let opaque = OPAQUE_SCHEMES.iter().any(|s| s.eq_ignore_ascii_case(scheme));
        if !opaque && !rest.starts_with("//") {
            return Err(malformed("no authority after scheme; unexpanded prefixed name?"));
        }
        if opaque && rest.is_empty() {
            return Err(malformed("empty path"));
        }
        Ok(Iri(text))
    }

    /// For compile-time constants that are known to be valid.
    pub(crate) fn from_static(text: &'static str) -> Self {
        debug_assert!(Iri::new(text).is_ok(), "invalid builtin IRI {text}");
        Iri(text.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let cut = self.0.rfind(['#', '/']).map(|i| i + 1).unwrap_or(0);
        &self.0[cut..]
    }

    pub fn is_in_namespace(&self, namespace: &str) -> bool {
        self.0.starts_with(namespace) && self.0.len() > namespace.len()
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c.is_whitespace()
        || c.is_control()
        || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

/// Shorthand for [`Iri::new`].
pub fn make_iri(text: &str) -> Result<Iri, RdfError> {
    Iri::new(text)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        let valid = !label.is_empty()
            && label.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !label.ends_with('.');
        if valid {
            Ok(BlankNode(label))
        } else {
            Err(RdfError::MalformedBlankNode(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal value. Field order gives the deterministic sort order
/// (lexical form, then datatype, then language).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    lang: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(ns::xsd::STRING),
            lang: None,
        }
    }

    pub fn lang_string(lexical: impl Into<String>, lang: &str) -> Result<Self, RdfError> {
        if !is_valid_lang_tag(lang) {
            return Err(RdfError::MalformedLanguageTag(lang.to_string()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(ns::rdf::LANG_STRING),
            lang: Some(lang.to_ascii_lowercase()),
        })
    }

    /// A typed literal. Integer and boolean lexical forms are checked.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, RdfError> {
        let lexical = lexical.into();
        if datatype.as_str() == ns::rdf::LANG_STRING {
            return Err(RdfError::IllTypedLiteral {
                lexical,
                datatype: datatype.into_string(),
            });
        }
        let checked = match datatype.as_str() {
            ns::xsd::INTEGER => is_valid_integer(&lexical),
            ns::xsd::BOOLEAN => is_valid_boolean(&lexical),
            _ => true,
        };
        if !checked {
            return Err(RdfError::IllTypedLiteral {
                lexical,
                datatype: datatype.into_string(),
            });
        }
        Ok(Literal {
            lexical,
            datatype,
            lang: None,
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Iri::from_static(ns::xsd::INTEGER),
            lang: None,
        }
    }

    pub fn boolean(value: bool) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Iri::from_static(ns::xsd::BOOLEAN),
            lang: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    pub fn is_plain_string(&self) -> bool {
        self.datatype.as_str() == ns::xsd::STRING
    }

    /// True when the lexical form belongs to the datatype's lexical space.
    /// Datatypes outside the supported set are accepted as-is.
    pub fn has_valid_lexical_form(&self) -> bool {
        lexical_is_valid(self.datatype.as_str(), &self.lexical)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        if let Some(lang) = &self.lang {
            write!(f, "@{lang}")
        } else if self.is_plain_string() {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

pub(crate) fn lexical_is_valid(datatype: &str, lexical: &str) -> bool {
    match datatype {
        ns::xsd::INTEGER => is_valid_integer(lexical),
        ns::xsd::BOOLEAN => is_valid_boolean(lexical),
        ns::xsd::DECIMAL => is_valid_decimal(lexical),
        ns::xsd::DATE_TIME => is_valid_date_time(lexical),
        _ => true,
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

pub(crate) fn is_valid_integer(s: &str) -> bool {
    let digits = strip_sign(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_valid_decimal(s: &str) -> bool {
    let body = strip_sign(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    (!int.is_empty() || !frac.is_empty())
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_valid_boolean(s: &str) -> bool {
    matches!(s, "true" | "false" | "1" | "0")
}

/// `YYYY-MM-DDThh:mm:ss(.s+)?(Z|(+|-)hh:mm)?`
fn is_valid_date_time(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let Some((date, time)) = s.split_once('T') else {
        return false;
    };
    let date_parts: Vec<&str> = date.split('-').collect();
    if date_parts.len() != 3
        || date_parts[0].len() < 4
        || date_parts[1].len() != 2
        || date_parts[2].len() != 2
        || !date_parts.iter().all(|p| p.bytes().all(|b| b.is_ascii_digit()))
    {
        return false;
    }
    let month: u32 = date_parts[1].parse().unwrap_or(0);
    let day: u32 = date_parts[2].parse().unwrap_or(0);
    if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
        return false;
    }
    let (clock, zone) = if let Some(t) = time.strip_suffix('Z') {
        (t, None)
    } else if time.len() > 6 && matches!(&time.as_bytes()[time.len() - 6], b'+' | b'-') {
        (&time[..time.len() - 6], Some(&time[time.len() - 5..]))
    } else {
        (time, None)
    };
    if let Some(zone) = zone {
        let ok = zone.len() == 5
            && zone.as_bytes()[2] == b':'
            && zone[..2].bytes().all(|b| b.is_ascii_digit())
            && zone[3..].bytes().all(|b| b.is_ascii_digit());
        if !ok {
            return false;
        }
    }
    let (hms, frac) = match clock.split_once('.') {
        Some((h, f)) => (h, Some(f)),
        None => (clock, None),
    };
    if frac.is_some_and(|f| f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit())) {
        return false;
    }
    let parts: Vec<&str> = hms.split(':').collect();
    parts.len() == 3
        && parts.iter().all(|p| p.len() == 2 && p.bytes().all(|b| b.is_ascii_digit()))
        && parts[0].parse::<u32>().is_ok_and(|h| h <= 24)
        && parts[1].parse::<u32>().is_ok_and(|m| m < 60)
        && parts[2].parse::<u32>().is_ok_and(|s| s < 60)
}

pub(crate) fn is_valid_lang_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let first_ok = parts
        .next()
        .is_some_and(|p| !p.is_empty() && p.len() <= 8 && p.bytes().all(|b| b.is_ascii_alphabetic()));
    first_ok && parts.all(|p| !p.is_empty() && p.len() <= 8 && p.bytes().all(|b| b.is_ascii_alphanumeric()))
}

/// Escapes a lexical form for a double-quoted N-Triples/Turtle string.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Any RDF term. Variant order is part of the deterministic sort order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank_node(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(t) => t.fmt(f),
            Term::BlankNode(t) => t.fmt(f),
            Term::Literal(t) => t.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

/// A statement. The subject is never a literal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>) -> Result<Self, RdfError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object: object.into(),
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
