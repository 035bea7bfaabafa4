//! Faceted retrieval over the algorithm records of a dataset revision.
//!
//! A record is the projection of one `amv:Algorithm` subject onto the
//! schema's properties. Filters are conjunctive `(property, value)` pairs;
//! a value that names a schema class matches any individual typed by that
//! class or one of its subclasses.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::error::SearchError;
use crate::rdf::{ns, Graph, Iri, Literal, PrefixMap, Term};
use crate::schema::{Facet, PropertyKind, VocabSchema};
use crate::store::Dataset;
use crate::syntax::format_term;

fn rdf_type() -> Iri {
    crate::rdf::iri(ns::rdf::TYPE)
}

fn algorithm_class() -> Iri {
    crate::rdf::iri(ns::amv::ALGORITHM)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetFilter {
    pub property: Iri,
    pub value: Term,
}

impl FacetFilter {
    /// Parses `property=value`.
    ///
    /// The property is `prefix:local` or `<iri>`. For object properties the
    /// value is `prefix:local`, `<iri>` or a bare AMV local name; for data
    /// properties it is a lexical form, typed by the property's range.
    pub fn parse(schema: &VocabSchema, text: &str) -> Result<FacetFilter, SearchError> {
        let bad = |why: &str| SearchError::BadFilter(text.to_string(), why.to_string());
        let (p, v) = text.split_once('=').ok_or_else(|| bad("expected property=value"))?;
        let prefixes = schema.prefixes();
        let property = parse_name(prefixes, p.trim()).ok_or_else(|| bad("property is not a known prefixed name or <IRI>"))?;
        let def = schema
            .property(&property)
            .ok_or_else(|| SearchError::UnknownProperty(prefixes.compact_or_full(&property)))?;
        let value = v.trim();
        let value: Term = match def.kind {
            PropertyKind::Object => {
                let iri = parse_name(prefixes, value)
                    .or_else(|| Iri::new(format!("{}{value}", ns::AMV)).ok().filter(|_| !value.contains(':')))
                    .ok_or_else(|| bad("value is not an IRI"))?;
                iri.into()
            }
            PropertyKind::Data if def.range.as_str() == ns::xsd::STRING => Literal::string(value).into(),
            PropertyKind::Data => Literal::typed(value, def.range.clone()).map_err(|e| bad(&e.to_string()))?.into(),
        };
        Ok(FacetFilter { property, value })
    }

    /// The `property=value` form accepted by [`FacetFilter::parse`].
    pub fn encode(&self, prefixes: &PrefixMap) -> String {
        let value = match &self.value {
            Term::Iri(iri) => compact_or_bracketed(prefixes, iri),
            Term::Literal(lit) => lit.lexical().to_string(),
            Term::BlankNode(b) => b.to_string(),
        };
        format!("{}={value}", compact_or_bracketed(prefixes, &self.property))
    }
}

fn compact_or_bracketed(prefixes: &PrefixMap, iri: &Iri) -> String {
    match prefixes.compact(iri) {
        Some((label, local)) if !local.contains(['=', '&', ' ']) => format!("{label}:{local}"),
        _ => format!("<{}>", iri.as_str()),
    }
}

fn parse_name(prefixes: &PrefixMap, text: &str) -> Option<Iri> {
    if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Iri::new(inner).ok();
    }
    let (label, _) = text.split_once(':')?;
    prefixes.get(label)?;
    prefixes.expand(text)
}

/// One algorithm, projected onto the schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgorithmRecord {
    pub iri: Iri,
    pub title: Option<String>,
    pub description: Option<String>,
    pub types: Vec<Iri>,
    /// Every schema property present on the subject, with its values.
    pub values: BTreeMap<Iri, Vec<Term>>,
    /// Facet to the properties in `values` browsed under it.
    pub facets: BTreeMap<Facet, Vec<Iri>>,
    pub creators: Vec<Term>,
    pub created: Option<Term>,
}

impl AlgorithmRecord {
    pub fn local_name(&self) -> &str {
        self.iri.local_name()
    }

    /// The documented `/api` record shape, keyed by compact names.
    pub fn to_json(&self, prefixes: &PrefixMap) -> Value {
        let mut properties = Map::new();
        for (p, vs) in &self.values {
            properties.insert(
                prefixes.compact_or_full(p),
                Value::Array(vs.iter().map(|v| term_to_json(v, prefixes)).collect()),
            );
        }
        let mut facets = Map::new();
        for (facet, props) in &self.facets {
            facets.insert(
                facet.name().to_string(),
                Value::Array(props.iter().map(|p| Value::String(prefixes.compact_or_full(p))).collect()),
            );
        }
        json!({
            "iri": self.iri.as_str(),
            "id": self.local_name(),
            "title": self.title,
            "description": self.description,
            "types": self.types.iter().map(|t| prefixes.compact_or_full(t)).collect::<Vec<_>>(),
            "properties": properties,
            "facets": facets,
            "provenance": {
                "creator": self.creators.iter().map(|c| term_to_json(c, prefixes)).collect::<Vec<_>>(),
                "created": self.created.as_ref().map(|c| term_to_json(c, prefixes)),
            },
        })
    }

    /// One line for terminal listings.
    pub fn summary(&self, prefixes: &PrefixMap) -> String {
        let mut line = prefixes.compact_or_full(&self.iri);
        if let Some(title) = &self.title {
            line.push_str("  ");
            line.push_str(title);
        }
        line
    }
}

/// A term as `{type, value, label[, datatype | xml:lang]}`.
pub fn term_to_json(term: &Term, prefixes: &PrefixMap) -> Value {
    let mut obj = Map::new();
    match term {
        Term::Iri(iri) => {
            obj.insert("type".into(), "uri".into());
            obj.insert("value".into(), iri.as_str().into());
        }
        Term::BlankNode(b) => {
            obj.insert("type".into(), "bnode".into());
            obj.insert("value".into(), b.label().into());
        }
        Term::Literal(lit) => {
            obj.insert("type".into(), "literal".into());
            obj.insert("value".into(), lit.lexical().into());
            if let Some(lang) = lit.lang() {
                obj.insert("xml:lang".into(), lang.into());
            } else if !lit.is_plain_string() {
                obj.insert("datatype".into(), lit.datatype().as_str().into());
            }
        }
    }
    obj.insert("label".into(), format_term(term, prefixes).into());
    Value::Object(obj)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetValueCount {
    pub property: Iri,
    pub value: Term,
    /// Algorithms carrying this value.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetListing {
    pub facet: Facet,
    pub properties: Vec<Iri>,
    pub values: Vec<FacetValueCount>,
}

impl FacetListing {
    pub fn to_json(&self, prefixes: &PrefixMap) -> Value {
        json!({
            "facet": self.facet.name(),
            "properties": self.properties.iter().map(|p| prefixes.compact_or_full(p)).collect::<Vec<_>>(),
            "values": self.values.iter().map(|v| {
                let filter = FacetFilter { property: v.property.clone(), value: v.value.clone() };
                json!({
                    "property": prefixes.compact_or_full(&v.property),
                    "value": term_to_json(&v.value, prefixes),
                    "count": v.count,
                    "filter": filter.encode(prefixes),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// IRIs typed `amv:Algorithm` (or a subclass), in order.
pub fn algorithm_subjects(schema: &VocabSchema, graph: &Graph) -> Vec<Iri> {
    let mut out = BTreeSet::new();
    for class in schema.descendants_or_self(&algorithm_class()) {
        for s in graph.subjects_with(&rdf_type(), &class.into()) {
            if let Term::Iri(iri) = s {
                out.insert(iri.clone());
            }
        }
    }
    out.into_iter().collect()
}

/// All seven facets, each with every value found on an algorithm and the
/// number of algorithms carrying it. Ordered by facet, property, value.
pub fn list_facets(d: &Dataset) -> Vec<FacetListing> {
    let (schema, graph) = (d.schema(), d.graph());
    let algorithms = algorithm_subjects(schema, graph);
    Facet::ALL
        .iter()
        .map(|&facet| {
            let props: Vec<Iri> = schema.properties_for_facet(facet).into_iter().map(|p| p.iri.clone()).collect();
            let mut values = Vec::new();
            for p in &props {
                let mut counts: BTreeMap<&Term, usize> = BTreeMap::new();
                for a in &algorithms {
                    let distinct: BTreeSet<&Term> = graph.objects(&a.clone().into(), p).collect();
                    for v in distinct {
                        *counts.entry(v).or_default() += 1;
                    }
                }
                values.extend(counts.into_iter().map(|(value, count)| FacetValueCount {
                    property: p.clone(),
                    value: value.clone(),
                    count,
                }));
            }
            FacetListing {
                facet,
                properties: props,
                values,
            }
        })
        .collect()
}

/// The values of `filter.property` on `subject` that satisfy the filter.
fn satisfies(schema: &VocabSchema, graph: &Graph, subject: &Term, filter: &FacetFilter) -> bool {
    let classes = class_alternatives(schema, &filter.value);
    graph.objects(subject, &filter.property).any(|o| {
        o == &filter.value
            || (!classes.is_empty() && classes.iter().any(|c| graph.contains_triple(o, &rdf_type(), &c.clone().into())))
    })
}

/// When `value` names a schema class: it and its subclasses.
fn class_alternatives(schema: &VocabSchema, value: &Term) -> Vec<Iri> {
    match value {
        Term::Iri(iri) if schema.class(iri).is_some() => schema.descendants_or_self(iri).into_iter().collect(),
        _ => Vec::new(),
    }
}

pub fn search(d: &Dataset, filters: &[FacetFilter], text: Option<&str>) -> Result<Vec<AlgorithmRecord>, SearchError> {
    let (schema, graph) = (d.schema(), d.graph());
    for f in filters {
        if schema.property(&f.property).is_none() {
            return Err(SearchError::UnknownProperty(schema.prefixes().compact_or_full(&f.property)));
        }
    }
    let needle = text.map(str::trim).filter(|t| !t.is_empty()).map(str::to_lowercase);
    let mut out = Vec::new();
    for a in algorithm_subjects(schema, graph) {
        let subject: Term = a.clone().into();
        if !filters.iter().all(|f| satisfies(schema, graph, &subject, f)) {
            continue;
        }
        let record = project(schema, graph, a);
        if let Some(needle) = &needle {
            let haystack = [record.title.as_deref(), record.description.as_deref()]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .join("\n")
                .to_lowercase();
            if !haystack.contains(needle.as_str()) {
                continue;
            }
        }
        out.push(record);
    }
    Ok(out)
}

pub fn get_record(d: &Dataset, iri: &Iri) -> Result<AlgorithmRecord, SearchError> {
    let (schema, graph) = (d.schema(), d.graph());
    let subject: Term = iri.clone().into();
    let is_algorithm = schema
        .descendants_or_self(&algorithm_class())
        .into_iter()
        .any(|c| graph.contains_triple(&subject, &rdf_type(), &c.into()));
    if !is_algorithm {
        return Err(SearchError::NotFound(iri.as_str().to_string()));
    }
    Ok(project(schema, graph, iri.clone()))
}

fn project(schema: &VocabSchema, graph: &Graph, iri: Iri) -> AlgorithmRecord {
    let subject: Term = iri.clone().into();
    let mut values: BTreeMap<Iri, Vec<Term>> = BTreeMap::new();
    for p in graph.predicates_of(&subject) {
        if schema.property(p).is_some() {
            values.insert(p.clone(), graph.objects(&subject, p).cloned().collect());
        }
    }
    let mut facets: BTreeMap<Facet, Vec<Iri>> = BTreeMap::new();
    for p in values.keys() {
        if let Some(facet) = schema.property(p).and_then(|d| d.facet) {
            facets.entry(facet).or_default().push(p.clone());
        }
    }
    let first_text = |p: &'static str| {
        values
            .get(&crate::rdf::iri(p))
            .and_then(|vs| vs.iter().find_map(|v| v.as_literal().map(|l| l.lexical().to_string())))
    };
    let title = first_text(ns::dct::TITLE);
    let description = first_text(ns::dct::DESCRIPTION);
    let creators = values.get(&crate::rdf::iri(ns::dct::CREATOR)).cloned().unwrap_or_default();
    let created = values
        .get(&crate::rdf::iri(ns::dct::CREATED))
        .and_then(|vs| vs.first().cloned());
    let types = graph
        .objects(&subject, &rdf_type())
        .filter_map(|t| t.as_iri().cloned())
        .collect();
    AlgorithmRecord {
        iri,
        title,
        description,
        types,
        values,
        facets,
        creators,
        created,
    }
}

/// The SPARQL query equivalent to a filter conjunction (free text has no
/// equivalent). Class-valued filters become a union over the class and its
/// subclasses.
pub fn filters_to_sparql(schema: &VocabSchema, filters: &[FacetFilter]) -> String {
    let algorithm_types = schema.descendants_or_self(&algorithm_class());
    let mut body = vec![union_of(
        algorithm_types
            .iter()
            .map(|c| format!("?algorithm a {} .", Term::from(c.clone())))
            .collect(),
    )];
    for (i, f) in filters.iter().enumerate() {
        let p = Term::from(f.property.clone());
        let mut alternatives = vec![format!("?algorithm {p} {} .", f.value)];
        for c in class_alternatives(schema, &f.value) {
            alternatives.push(format!("?algorithm {p} ?v{i} . ?v{i} a {} .", Term::from(c)));
        }
        body.push(union_of(alternatives));
    }
    format!("SELECT DISTINCT ?algorithm WHERE {{\n{}\n}}", body.join("\n"))
}

fn union_of(alternatives: Vec<String>) -> String {
    if alternatives.len() == 1 {
        return alternatives.into_iter().next().expect("one");
    }
    alternatives.iter().map(|a| format!("{{ {a} }}")).collect::<Vec<_>>().join(" UNION ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::amv;
    use crate::schema::load_builtin_schema;
    use crate::sparql::run_query;
    use crate::store::load_seed;
    use std::sync::Arc;

    fn seed() -> Dataset {
        Dataset::with_graph(Arc::new(load_builtin_schema()), load_seed())
    }

    fn filter(d: &Dataset, text: &str) -> FacetFilter {
        FacetFilter::parse(d.schema(), text).unwrap()
    }

    fn ids(records: &[AlgorithmRecord]) -> Vec<&str> {
        records.iter().map(|r| r.local_name()).collect()
    }

    #[test]
    fn empty_dataset_has_seven_empty_facets() {
        let d = Dataset::new(Arc::new(load_builtin_schema()));
        let facets = list_facets(&d);
        assert_eq!(facets.len(), 7);
        assert!(facets.iter().all(|f| f.values.is_empty()));
    }

    #[test]
    fn counts_match_a_triple_scan() {
        let d = seed();
        let coverage = list_facets(&d).into_iter().find(|f| f.facet == Facet::Coverage).unwrap();
        let combinatorial = coverage
            .values
            .iter()
            .find(|v| v.property == amv("problemType") && v.value == amv("Combinatorial").into())
            .unwrap();
        // Independent count: scan every triple.
        let scanned = d
            .graph()
            .iter()
            .filter(|t| t.predicate() == &amv("problemType") && t.object() == &Term::from(amv("Combinatorial")))
            .filter(|t| d.graph().iter().any(|u| u.subject() == t.subject() && u.object() == &Term::from(amv("Algorithm"))))
            .count();
        assert!(combinatorial.count >= 1);
        assert_eq!(combinatorial.count, scanned);
    }

    #[test]
    fn single_valued_counts_are_bounded() {
        let d = seed();
        for listing in list_facets(&d) {
            for p in &listing.properties {
                let def = d.schema().property(p).unwrap();
                if def.cardinality.max == Some(1) {
                    let total: usize = listing.values.iter().filter(|v| &v.property == p).map(|v| v.count).sum();
                    assert!(total <= 11);
                }
            }
        }
    }

    #[test]
    fn search_examples() {
        let d = seed();
        assert_eq!(search(&d, &[], None).unwrap().len(), 11);
        let hits = search(&d, &[filter(&d, "amv:problemType=amv:Combinatorial")], None).unwrap();
        assert!(ids(&hits).contains(&"KnapsackProblemAlgorithm"));
        let contradiction = [
            filter(&d, "amv:languageIndependent=true"),
            filter(&d, "amv:languageIndependent=false"),
        ];
        assert!(search(&d, &contradiction, None).unwrap().is_empty());
    }

    #[test]
    fn class_values_match_subclass_individuals() {
        let d = seed();
        let all_problems = search(&d, &[filter(&d, "amv:problemType=amv:Problem")], None).unwrap();
        assert_eq!(all_problems.len(), 11);
        let graph_problems = search(&d, &[filter(&d, "amv:problemType=amv:GraphProblem")], None).unwrap();
        assert_eq!(
            ids(&graph_problems),
            ["DijkstraAlgorithm", "KruskalAlgorithm", "PrimAlgorithm"]
        );
    }

    #[test]
    fn free_text_is_case_insensitive() {
        let d = seed();
        let hits = search(&d, &[], Some("KNAPSACK")).unwrap();
        assert_eq!(ids(&hits), ["KnapsackProblemAlgorithm"]);
        assert!(search(&d, &[], Some("zzz-nothing")).unwrap().is_empty());
    }

    #[test]
    fn unknown_property_is_rejected() {
        let d = seed();
        assert!(matches!(FacetFilter::parse(d.schema(), "amv:colour=red"), Err(SearchError::UnknownProperty(_))));
        let f = FacetFilter {
            property: amv("colour"),
            value: Literal::string("red").into(),
        };
        assert!(matches!(search(&d, &[f], None), Err(SearchError::UnknownProperty(_))));
        assert!(matches!(FacetFilter::parse(d.schema(), "amv:numberOfSteps=many"), Err(SearchError::BadFilter(..))));
        assert!(matches!(FacetFilter::parse(d.schema(), "no equals"), Err(SearchError::BadFilter(..))));
    }

    #[test]
    fn filter_encoding_round_trips() {
        let d = seed();
        for text in ["amv:implementationInLanguage=amv:Java", "amv:numberOfSteps=7", "dct:title=Merge Sort"] {
            let f = filter(&d, text);
            assert_eq!(f.encode(d.schema().prefixes()), text);
        }
        assert_eq!(filter(&d, "amv:implementationInLanguage=Java"), filter(&d, "amv:implementationInLanguage=amv:Java"));
    }

    #[test]
    fn knapsack_record() {
        let d = seed();
        let r = get_record(&d, &amv("KnapsackProblemAlgorithm")).unwrap();
        let dct_subject = Iri::new(format!("{}subject", ns::DCT)).unwrap();
        assert_eq!(r.values[&dct_subject], vec![Term::from(amv("Mathematics"))]);
        assert_eq!(r.values[&amv("problemType")], vec![Term::from(amv("Combinatorial"))]);
        assert_eq!(r.values[&amv("languageIndependent")], vec![Term::from(Literal::boolean(true))]);
        assert!(r.facets[&Facet::Coverage].contains(&amv("problemType")));
        // Projection equals a per-property match on the graph.
        for (p, vs) in &r.values {
            let matched: Vec<Term> = crate::rdf::graph_match(d.graph(), Some(&r.iri.clone().into()), Some(p), None)
                .into_iter()
                .map(|t| t.object().clone())
                .collect();
            assert_eq!(vs, &matched);
        }
        let json = r.to_json(d.schema().prefixes());
        assert_eq!(json["properties"]["amv:languageIndependent"][0]["value"], "true");
        assert_eq!(json["id"], "KnapsackProblemAlgorithm");
    }

    #[test]
    fn missing_record() {
        let d = seed();
        assert!(matches!(get_record(&d, &amv("NoSuchAlgorithm")), Err(SearchError::NotFound(_))));
        // Typed, but not an algorithm.
        assert!(matches!(get_record(&d, &amv("Java")), Err(SearchError::NotFound(_))));
    }

    #[test]
    fn generated_query_agrees_with_search() {
        let d = seed();
        for filters in [
            vec![],
            vec![filter(&d, "amv:problemType=amv:GraphProblem")],
            vec![
                filter(&d, "amv:algorithmType=amv:Greedy"),
                filter(&d, "amv:loopConstruct=amv:WhileLoop"),
            ],
        ] {
            let q = filters_to_sparql(d.schema(), &filters);
            let via_sparql: Vec<Term> = run_query(d.graph(), &q).unwrap().column("algorithm").into_iter().cloned().collect();
            let via_search: Vec<Term> = search(&d, &filters, None).unwrap().into_iter().map(|r| r.iri.into()).collect();
            assert_eq!(via_sparql, via_search, "{q}");
        }
    }
}
