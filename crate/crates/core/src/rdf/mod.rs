//! RDF data model: terms, triples, indexed graphs and prefix maps.

mod graph;
pub mod ns;
mod prefix;
mod term;

pub use graph::{graph_match, Graph};
pub use prefix::PrefixMap;
pub use term::{escape_string, make_iri, BlankNode, Iri, Literal, Term, Triple};
pub(crate) use term::{is_forbidden_iri_char, is_valid_lang_tag};

/// Builds an IRI from one of the namespace constants in [`ns`].
pub fn iri(text: &'static str) -> Iri {
    Iri::from_static(text)
}

/// Builds an IRI in the AMV namespace; panics if `local` makes it invalid.
pub fn amv(local: &str) -> Iri {
    Iri::new(format!("{}{local}", ns::AMV)).expect("valid amv local name")
}
