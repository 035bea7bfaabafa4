//! Turtle and N-Triples concrete syntaxes.
//!
//! Each syntax is an [`RdfFormat`] registered by name in a
//! [`FormatRegistry`]; callers pick one at runtime by name (`--format`) or
//! by file extension.

mod lex;
mod ntriples;
mod turtle;
mod write;

use std::collections::BTreeMap;
use std::sync::Arc;

pub(crate) use lex::{resolve_iri, Cursor, PResult};
pub use ntriples::parse_ntriples;
pub use turtle::parse_turtle;
pub use write::{format_term, write_ntriples, write_turtle};

use crate::error::ParseDiagnostic;
use crate::rdf::{Graph, Iri, PrefixMap};

/// A parsed document: its triples and the prefixes it declared.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedDocument {
    pub graph: Graph,
    pub prefixes: PrefixMap,
}

pub trait RdfFormat: Send + Sync {
    fn name(&self) -> &'static str;

    fn media_type(&self) -> &'static str;

    fn extensions(&self) -> &'static [&'static str];

    fn parse(&self, text: &str, base: Option<&Iri>) -> Result<ParsedDocument, ParseDiagnostic>;

    fn serialize(&self, graph: &Graph, prefixes: &PrefixMap) -> String;
}

pub struct TurtleFormat;

impl RdfFormat for TurtleFormat {
    fn name(&self) -> &'static str {
        "turtle"
    }

    fn media_type(&self) -> &'static str {
        "text/turtle"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["ttl"]
    }

    fn parse(&self, text: &str, base: Option<&Iri>) -> Result<ParsedDocument, ParseDiagnostic> {
        parse_turtle(text, base)
    }

    fn serialize(&self, graph: &Graph, prefixes: &PrefixMap) -> String {
        write_turtle(graph, prefixes)
    }
}

pub struct NTriplesFormat;

impl RdfFormat for NTriplesFormat {
    fn name(&self) -> &'static str {
        "ntriples"
    }

    fn media_type(&self) -> &'static str {
        "application/n-triples"
    }

    fn extensions(&self) -> &'static [&'static str] {
        &["nt"]
    }

    fn parse(&self, text: &str, _base: Option<&Iri>) -> Result<ParsedDocument, ParseDiagnostic> {
        parse_ntriples(text)
    }

    fn serialize(&self, graph: &Graph, _prefixes: &PrefixMap) -> String {
        write_ntriples(graph)
    }
}

/// Formats by name.
#[derive(Clone)]
pub struct FormatRegistry {
    formats: BTreeMap<&'static str, Arc<dyn RdfFormat>>,
}

impl Default for FormatRegistry {
    fn default() -> Self {
        let mut registry = FormatRegistry::empty();
        registry.register(Arc::new(TurtleFormat));
        registry.register(Arc::new(NTriplesFormat));
        registry
    }
}

impl FormatRegistry {
    pub fn empty() -> Self {
        FormatRegistry {
            formats: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, format: Arc<dyn RdfFormat>) {
        self.formats.insert(format.name(), format);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn RdfFormat>> {
        self.formats.get(name).cloned()
    }

    pub fn for_extension(&self, ext: &str) -> Option<Arc<dyn RdfFormat>> {
        self.formats
            .values()
            .find(|f| f.extensions().iter().any(|e| e.eq_ignore_ascii_case(ext)))
            .cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.formats.keys().copied()
    }
}

/// Serialization target for [`serialize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Turtle,
    NTriples,
}

pub fn serialize(graph: &Graph, prefixes: &PrefixMap, format: Format) -> String {
    match format {
        Format::Turtle => write_turtle(graph, prefixes),
        Format::NTriples => write_ntriples(graph),
    }
}
