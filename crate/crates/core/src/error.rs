use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("malformed IRI {iri:?}: {reason}")]
    MalformedIri { iri: String, reason: String },
    #[error("malformed blank node label {0:?}")]
    MalformedBlankNode(String),
    #[error("malformed language tag {0:?}")]
    MalformedLanguageTag(String),
    #[error("lexical form {lexical:?} is not valid for datatype <{datatype}>")]
    IllTypedLiteral { lexical: String, datatype: String },
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
}

/// A syntax error with a 1-based position in the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("schema manifest syntax error: {0}")]
    Syntax(#[from] ParseDiagnostic),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error("invalid schema: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt snapshot {path}: {diagnostic}")]
    CorruptSnapshot { path: PathBuf, diagnostic: ParseDiagnostic },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("store is read-only")]
    ReadOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("unknown property {0}")]
    UnknownProperty(String),
    #[error("unparseable filter {0:?}: {1}")]
    BadFilter(String, String),
    #[error("no algorithm {0}")]
    NotFound(String),
}
