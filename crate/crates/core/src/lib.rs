//! Algorithm metadata registry core.

pub mod error;
pub mod rdf;
pub mod syntax;
pub mod schema;
pub mod validation;
pub mod store;
pub mod sparql;
pub mod facet;
