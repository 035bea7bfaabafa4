//! The AMV vocabulary as data: classes with their hierarchy, properties
//! with kind/domain/range/cardinality, facet assignments and prefixes.
//!
//! The bundled manifest (`data/amv-schema.ttl`) is the source of truth;
//! [`VocabSchema::export`] produces exactly the triples it was loaded from,
//! so a schema survives export and re-import unchanged.

mod facet;

use std::collections::{BTreeMap, BTreeSet};

pub use facet::Facet;

use crate::error::SchemaError;
use crate::rdf::{iri, ns, Graph, Iri, Literal, PrefixMap, Term, Triple};
use crate::syntax::parse_turtle;

/// The bundled schema manifest.
pub const BUILTIN_MANIFEST: &str = include_str!("../../data/amv-schema.ttl");

const ONTOLOGY_IRI: &str = "https://www.isibang.ac.in/ns/amv";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Defined by AMV itself.
    Amv,
    /// Minted in the AMV namespace by this registry.
    AmvExtension,
    /// Reused from another vocabulary, identified by its prefix label.
    External(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDef {
    pub iri: Iri,
    pub label: String,
    pub parent: Option<Iri>,
    pub facet: Facet,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Data,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cardinality {
    pub min: u32,
    /// `None` is unbounded.
    pub max: Option<u32>,
}

impl Cardinality {
    pub const ANY: Cardinality = Cardinality { min: 0, max: None };

    pub fn admits(&self, count: usize) -> bool {
        count >= self.min as usize && self.max.is_none_or(|m| count <= m as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyDef {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub label: String,
    pub domain: BTreeSet<Iri>,
    /// A class for object properties, a datatype for data properties.
    pub range: Iri,
    pub cardinality: Cardinality,
    pub facet: Option<Facet>,
    pub origin: Origin,
}

/// The loaded vocabulary. Immutable after construction.
#[derive(Clone, Debug)]
pub struct VocabSchema {
    classes: BTreeMap<Iri, ClassDef>,
    properties: BTreeMap<Iri, PropertyDef>,
    prefixes: PrefixMap,
    version: String,
}

/// The bundled schema.
pub fn load_builtin_schema() -> VocabSchema {
    VocabSchema::from_manifests(&[BUILTIN_MANIFEST]).expect("bundled schema manifest is valid")
}

fn is_datatype(iri: &Iri) -> bool {
    iri.is_in_namespace(ns::XSD) || iri.as_str() == ns::rdf::LANG_STRING || iri.as_str() == "http://www.w3.org/2000/01/rdf-schema#Literal"
}

impl VocabSchema {
    /// Merges the given Turtle manifests (the first is usually
    /// [`BUILTIN_MANIFEST`]) and builds a checked schema.
    pub fn from_manifests(manifests: &[&str]) -> Result<Self, SchemaError> {
        let mut graph = Graph::new();
        let mut prefixes = PrefixMap::new();
        for text in manifests {
            let doc = parse_turtle(text, None)?;
            graph.extend(doc.graph.iter());
            prefixes.merge_missing(&doc.prefixes);
        }
        Self::from_graph(&graph, prefixes)
    }

    /// Reads class and property definitions out of a manifest graph.
    pub fn from_graph(graph: &Graph, declared: PrefixMap) -> Result<Self, SchemaError> {
        let mut prefixes = PrefixMap::standard();
        for (label, namespace) in declared.iter() {
            prefixes.insert(label, namespace.clone());
        }
        let rdf_type = iri(ns::rdf::TYPE);
        let label_p = iri(ns::rdfs::LABEL);
        let facet_p = iri(ns::manifest::FACET);

        let single_iri = |s: &Term, p: &Iri| -> Result<Option<Iri>, SchemaError> {
            let values: Vec<&Term> = graph.objects(s, p).collect();
            match values.as_slice() {
                [] => Ok(None),
                [Term::Iri(v)] => Ok(Some(v.clone())),
                _ => Err(SchemaError::Invalid(format!("{s} must have at most one IRI value for {p}"))),
            }
        };
        let label_of = |s: &Term, fallback: &Iri| -> String {
            graph
                .objects(s, &label_p)
                .find_map(|t| t.as_literal().map(|l| l.lexical().to_string()))
                .unwrap_or_else(|| fallback.local_name().to_string())
        };
        let facet_of = |s: &Term| -> Result<Option<Facet>, SchemaError> {
            match single_iri(s, &facet_p)? {
                None => Ok(None),
                Some(f) => Facet::from_manifest_iri(&f)
                    .map(Some)
                    .ok_or_else(|| SchemaError::Invalid(format!("{s} has unknown facet {f}"))),
            }
        };
        let is_extension = |s: &Term| graph.objects(s, &iri(ns::manifest::EXTENSION)).any(|t| t == &Term::from(Literal::boolean(true)));
        let origin_of = |s: &Term, i: &Iri| -> Origin {
            if i.is_in_namespace(ns::AMV) {
                if is_extension(s) {
                    Origin::AmvExtension
                } else {
                    Origin::Amv
                }
            } else {
                match prefixes.compact(i) {
                    Some((label, _)) => Origin::External(label.to_string()),
                    None => Origin::External(String::new()),
                }
            }
        };
        let count_of = |s: &Term, p: &'static str| -> Result<Option<u32>, SchemaError> {
            let p = iri(p);
            let values: Vec<&Term> = graph.objects(s, &p).collect();
            match values.as_slice() {
                [] => Ok(None),
                [Term::Literal(l)] => l
                    .lexical()
                    .parse::<u32>()
                    .map(Some)
                    .map_err(|_| SchemaError::Invalid(format!("{s}: {p} must be a non-negative integer"))),
                _ => Err(SchemaError::Invalid(format!("{s}: {p} must have one value"))),
            }
        };

        let mut classes = BTreeMap::new();
        let class_subjects: BTreeSet<&Term> = graph
            .subjects_with(&rdf_type, &iri(ns::owl::CLASS).into())
            .chain(graph.subjects_with(&rdf_type, &iri(ns::rdfs::CLASS).into()))
            .collect();
        for s in class_subjects {
            let Term::Iri(class_iri) = s else {
                return Err(SchemaError::Invalid(format!("anonymous class {s}")));
            };
            let facet = facet_of(s)?.ok_or_else(|| SchemaError::Invalid(format!("class {class_iri} has no facet")))?;
            classes.insert(
                class_iri.clone(),
                ClassDef {
                    iri: class_iri.clone(),
                    label: label_of(s, class_iri),
                    parent: single_iri(s, &iri(ns::rdfs::SUB_CLASS_OF))?,
                    facet,
                    origin: origin_of(s, class_iri),
                },
            );
        }

        let mut properties = BTreeMap::new();
        for (kind, type_iri) in [
            (PropertyKind::Object, ns::owl::OBJECT_PROPERTY),
            (PropertyKind::Data, ns::owl::DATATYPE_PROPERTY),
        ] {
            for s in graph.subjects_with(&rdf_type, &iri(type_iri).into()) {
                let Term::Iri(prop_iri) = s else {
                    return Err(SchemaError::Invalid(format!("anonymous property {s}")));
                };
                if properties.contains_key(prop_iri) {
                    return Err(SchemaError::Invalid(format!("{prop_iri} is both an object and a data property")));
                }
                let domain: BTreeSet<Iri> = graph
                    .objects(s, &iri(ns::rdfs::DOMAIN))
                    .map(|t| t.as_iri().cloned().ok_or_else(|| SchemaError::Invalid(format!("{prop_iri}: domain must be an IRI"))))
                    .collect::<Result<_, _>>()?;
                let range = single_iri(s, &iri(ns::rdfs::RANGE))?
                    .ok_or_else(|| SchemaError::Invalid(format!("property {prop_iri} has no range")))?;
                let cardinality = Cardinality {
                    min: count_of(s, ns::manifest::MIN_COUNT)?.unwrap_or(0),
                    max: count_of(s, ns::manifest::MAX_COUNT)?,
                };
                properties.insert(
                    prop_iri.clone(),
                    PropertyDef {
                        iri: prop_iri.clone(),
                        kind,
                        label: label_of(s, prop_iri),
                        domain,
                        range,
                        cardinality,
                        facet: facet_of(s)?,
                        origin: origin_of(s, prop_iri),
                    },
                );
            }
        }

        let version = graph
            .objects(&iri(ONTOLOGY_IRI).into(), &iri(ns::owl::VERSION_INFO))
            .find_map(|t| t.as_literal().map(|l| l.lexical().to_string()))
            .unwrap_or_default();

        let schema = VocabSchema {
            classes,
            properties,
            prefixes,
            version,
        };
        schema.check()?;
        Ok(schema)
    }

    /// Every reference resolves, hierarchies are acyclic, cardinalities are
    /// ordered and required prefixes exist.
    fn check(&self) -> Result<(), SchemaError> {
        for label in ["amv", "rdf", "rdfs", "owl", "xsd", "dct", "foaf", "schema", "skos", "dcat", "doap"] {
            if self.prefixes.get(label).is_none() {
                return Err(SchemaError::Invalid(format!("missing prefix {label}")));
            }
        }
        for class in self.classes.values() {
            if let Some(parent) = &class.parent {
                if !self.classes.contains_key(parent) {
                    return Err(SchemaError::Invalid(format!("{} has unknown parent {parent}", class.iri)));
                }
            }
            let mut seen = BTreeSet::new();
            let mut cursor = Some(&class.iri);
            while let Some(c) = cursor {
                if !seen.insert(c) {
                    return Err(SchemaError::Invalid(format!("subclass cycle through {}", class.iri)));
                }
                cursor = self.classes.get(c).and_then(|d| d.parent.as_ref());
            }
        }
        for prop in self.properties.values() {
            for d in &prop.domain {
                if !self.classes.contains_key(d) {
                    return Err(SchemaError::Invalid(format!("{} has unknown domain class {d}", prop.iri)));
                }
            }
            match prop.kind {
                PropertyKind::Object if !self.classes.contains_key(&prop.range) => {
                    return Err(SchemaError::Invalid(format!("{} has unknown range class {}", prop.iri, prop.range)));
                }
                PropertyKind::Data if !is_datatype(&prop.range) => {
                    return Err(SchemaError::Invalid(format!("{} range {} is not a datatype", prop.iri, prop.range)));
                }
                _ => {}
            }
            if prop.cardinality.max.is_some_and(|max| max < prop.cardinality.min) {
                return Err(SchemaError::Invalid(format!("{} has min > max", prop.iri)));
            }
        }
        Ok(())
    }

    pub fn classes(&self) -> &BTreeMap<Iri, ClassDef> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeMap<Iri, PropertyDef> {
        &self.properties
    }

    pub fn class(&self, iri: &Iri) -> Option<&ClassDef> {
        self.classes.get(iri)
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDef> {
        self.properties.get(iri)
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// `class` plus all of its ancestors.
    pub fn subclass_closure(&self, class: &Iri) -> Result<BTreeSet<Iri>, SchemaError> {
        if !self.classes.contains_key(class) {
            return Err(SchemaError::UnknownClass(class.as_str().to_string()));
        }
        Ok(self.ancestors_or_self(class))
    }

    /// Like [`subclass_closure`](Self::subclass_closure) but an unknown
    /// class is its own (singleton) closure.
    pub fn ancestors_or_self(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        let mut cursor = Some(class);
        while let Some(c) = cursor {
            if !out.insert(c.clone()) {
                break;
            }
            cursor = self.classes.get(c).and_then(|d| d.parent.as_ref());
        }
        out
    }

    /// Closure of every type in `types`.
    pub fn closure_of_types<'a>(&self, types: impl IntoIterator<Item = &'a Iri>) -> BTreeSet<Iri> {
        types.into_iter().flat_map(|t| self.ancestors_or_self(t)).collect()
    }

    /// `class` and every class below it.
    pub fn descendants_or_self(&self, class: &Iri) -> BTreeSet<Iri> {
        self.classes
            .keys()
            .filter(|c| self.ancestors_or_self(c).contains(class))
            .cloned()
            .chain(std::iter::once(class.clone()))
            .collect()
    }

    /// Properties browsed under `facet`, ordered by IRI.
    pub fn properties_for_facet(&self, facet: Facet) -> Vec<&PropertyDef> {
        self.properties.values().filter(|p| p.facet == Some(facet)).collect()
    }

    /// Encodes the schema as an OWL/RDFS graph carrying the manifest
    /// annotations, suitable for re-import with [`VocabSchema::from_graph`].
    pub fn export(&self) -> Graph {
        let mut g = Graph::new();
        let mut add = |s: &Iri, p: &'static str, o: Term| {
            g.insert(Triple::new(s.clone(), iri(p), o).expect("IRI subject"));
        };
        let ontology = iri(ONTOLOGY_IRI);
        add(&ontology, ns::rdf::TYPE, iri(ns::owl::ONTOLOGY).into());
        add(&ontology, ns::owl::VERSION_INFO, Literal::string(&self.version).into());
        for c in self.classes.values() {
            add(&c.iri, ns::rdf::TYPE, iri(ns::owl::CLASS).into());
            add(&c.iri, ns::rdfs::LABEL, Literal::string(&c.label).into());
            add(&c.iri, ns::manifest::FACET, c.facet.manifest_iri().into());
            if let Some(parent) = &c.parent {
                add(&c.iri, ns::rdfs::SUB_CLASS_OF, parent.clone().into());
            }
            if c.origin == Origin::AmvExtension {
                add(&c.iri, ns::manifest::EXTENSION, Literal::boolean(true).into());
            }
        }
        for p in self.properties.values() {
            let type_iri = match p.kind {
                PropertyKind::Object => ns::owl::OBJECT_PROPERTY,
                PropertyKind::Data => ns::owl::DATATYPE_PROPERTY,
            };
            add(&p.iri, ns::rdf::TYPE, iri(type_iri).into());
            add(&p.iri, ns::rdfs::LABEL, Literal::string(&p.label).into());
            for d in &p.domain {
                add(&p.iri, ns::rdfs::DOMAIN, d.clone().into());
            }
            add(&p.iri, ns::rdfs::RANGE, p.range.clone().into());
            if let Some(f) = p.facet {
                add(&p.iri, ns::manifest::FACET, f.manifest_iri().into());
            }
            if p.cardinality.min > 0 {
                add(&p.iri, ns::manifest::MIN_COUNT, Literal::integer(p.cardinality.min.into()).into());
            }
            if let Some(max) = p.cardinality.max {
                add(&p.iri, ns::manifest::MAX_COUNT, Literal::integer(max.into()).into());
            }
            if p.origin == Origin::AmvExtension {
                add(&p.iri, ns::manifest::EXTENSION, Literal::boolean(true).into());
            }
        }
        g
    }

    /// Prefixes used when writing the exported schema.
    pub fn export_prefixes(&self) -> PrefixMap {
        let mut pm = self.prefixes.clone();
        pm.insert("mf", iri(ns::MANIFEST));
        pm
    }
}

/// Operation-name alias for [`VocabSchema::export`].
pub fn export_schema(schema: &VocabSchema) -> Graph {
    schema.export()
}
