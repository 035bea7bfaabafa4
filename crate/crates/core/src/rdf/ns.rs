//! Namespace IRIs and a few frequently used terms.

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";
pub const SCHEMA: &str = "https://schema.org/";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DCAT: &str = "http://www.w3.org/ns/dcat#";
pub const DOAP: &str = "http://usefulinc.com/ns/doap#";
pub const AMV: &str = "https://www.isibang.ac.in/ns/amv#";
/// Annotation namespace used by the schema manifest (facets, cardinalities).
pub const MANIFEST: &str = "urn:amv-registry:manifest#";

pub mod rdf {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}

pub mod rdfs {
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
}

pub mod owl {
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
    pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const VERSION_INFO: &str = "http://www.w3.org/2002/07/owl#versionInfo";
}

pub mod xsd {
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod dct {
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const DESCRIPTION: &str = "http://purl.org/dc/terms/description";
    pub const CREATOR: &str = "http://purl.org/dc/terms/creator";
    pub const CREATED: &str = "http://purl.org/dc/terms/created";
}

pub mod amv {
    pub const ALGORITHM: &str = "https://www.isibang.ac.in/ns/amv#Algorithm";
    pub const PROBLEM: &str = "https://www.isibang.ac.in/ns/amv#Problem";
}

pub mod manifest {
    pub const FACET: &str = "urn:amv-registry:manifest#facet";
    pub const MIN_COUNT: &str = "urn:amv-registry:manifest#minCount";
    pub const MAX_COUNT: &str = "urn:amv-registry:manifest#maxCount";
    pub const EXTENSION: &str = "urn:amv-registry:manifest#extension";
}

/// Prefix labels and namespaces that are always available to queries and
/// one-liners.
pub const STANDARD_PREFIXES: &[(&str, &str)] = &[
    ("amv", AMV),
    ("dcat", DCAT),
    ("dct", DCT),
    ("doap", DOAP),
    ("foaf", FOAF),
    ("owl", OWL),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("schema", SCHEMA),
    ("skos", SKOS),
    ("xsd", XSD),
];
