//! Instance-graph validation against a [`VocabSchema`].
//!
//! Each check is a [`ValidationRule`]; a [`Validator`] runs a set of them
//! over one precomputed [`RuleContext`]. Every finding is reported against
//! the subject of the offending triple(s).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::rdf::{iri, ns, Graph, Iri, PrefixMap, Term};
use crate::schema::{PropertyKind, VocabSchema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Domain,
    Range,
    Datatype,
    CardinalityMin,
    CardinalityMax,
    UnknownProperty,
    UnknownClass,
    UntypedSubject,
}

impl ViolationKind {
    /// Stable machine-readable code.
    pub fn code(self) -> &'static str {
        match self {
            ViolationKind::Domain => "domain",
            ViolationKind::Range => "range",
            ViolationKind::Datatype => "datatype",
            ViolationKind::CardinalityMin => "cardinality-min",
            ViolationKind::CardinalityMax => "cardinality-max",
            ViolationKind::UnknownProperty => "unknown-property",
            ViolationKind::UnknownClass => "unknown-class",
            ViolationKind::UntypedSubject => "untyped-subject",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn code(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub focus: Term,
    pub kind: ViolationKind,
    pub property: Option<Iri>,
    pub value: Option<Term>,
    pub severity: Severity,
    pub message: String,
}

fn term_string(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_string(),
        other => other.to_string(),
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Violation", 6)?;
        s.serialize_field("kind", self.kind.code())?;
        s.serialize_field("focus", &term_string(&self.focus))?;
        s.serialize_field("property", &self.property.as_ref().map(|p| p.as_str()))?;
        s.serialize_field("value", &self.value.as_ref().map(term_string))?;
        s.serialize_field("message", &self.message)?;
        s.serialize_field("severity", self.severity.code())?;
        s.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub conforms: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        ValidationReport {
            conforms: !violations.iter().any(|v| v.severity == Severity::Error),
            violations,
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    /// One line per violation: severity, kind, focus, message.
    pub fn to_text(&self, prefixes: &PrefixMap) -> String {
        let mut out = String::new();
        for v in &self.violations {
            let focus = match &v.focus {
                Term::Iri(i) => prefixes.compact_or_full(i),
                other => other.to_string(),
            };
            out.push_str(&format!("{}\t{}\t{}\t{}\n", v.severity.code(), v.kind.code(), focus, v.message));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Report subjects without `rdf:type` as errors instead of warnings.
    pub untyped_is_error: bool,
}

/// Precomputed facts shared by all rules.
pub struct RuleContext<'a> {
    pub schema: &'a VocabSchema,
    pub graph: &'a Graph,
    pub options: ValidationOptions,
    /// Subclass closure of each node's asserted types.
    types: BTreeMap<Term, BTreeSet<Iri>>,
}

impl<'a> RuleContext<'a> {
    pub fn new(schema: &'a VocabSchema, graph: &'a Graph, options: ValidationOptions) -> Self {
        let mut asserted: BTreeMap<Term, BTreeSet<Iri>> = BTreeMap::new();
        for t in graph.matching(None, Some(&iri(ns::rdf::TYPE)), None) {
            if let Term::Iri(class) = t.object() {
                asserted.entry(t.subject().clone()).or_default().insert(class.clone());
            }
        }
        let types = asserted
            .into_iter()
            .map(|(node, classes)| {
                let closure = schema.closure_of_types(&classes);
                (node, closure)
            })
            .collect();
        RuleContext {
            schema,
            graph,
            options,
            types,
        }
    }

    /// Closure of the node's types; `None` when it has no `rdf:type`.
    pub fn types_of(&self, node: &Term) -> Option<&BTreeSet<Iri>> {
        self.types.get(node)
    }

    /// Triples whose predicate the schema defines, grouped by subject.
    fn schema_triples(&self) -> impl Iterator<Item = (Term, Iri, Term)> + '_ {
        self.graph.iter().filter_map(|t| {
            if self.schema.property(t.predicate()).is_some() {
                let (s, p, o) = t.into_parts();
                Some((s, p, o))
            } else {
                None
            }
        })
    }

    fn compact(&self, i: &Iri) -> String {
        self.schema.prefixes().compact_or_full(i)
    }
}

pub trait ValidationRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>);
}

/// Subjects of a schema property must be typed in its domain.
pub struct DomainRule;

impl ValidationRule for DomainRule {
    fn name(&self) -> &'static str {
        "domain"
    }

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>) {
        for (s, p, _) in ctx.schema_triples() {
            let def = ctx.schema.property(&p).expect("schema property");
            if def.domain.is_empty() {
                continue;
            }
            let Some(types) = ctx.types_of(&s) else { continue };
            if types.is_disjoint(&def.domain) {
                let expected: Vec<String> = def.domain.iter().map(|d| ctx.compact(d)).collect();
                out.push(Violation {
                    focus: s.clone(),
                    kind: ViolationKind::Domain,
                    property: Some(p.clone()),
                    value: None,
                    severity: Severity::Error,
                    message: format!("subject of {} must be a {}", ctx.compact(&p), expected.join(" or ")),
                });
            }
        }
    }
}

/// Object values must be typed in the range class; data values must carry
/// the range datatype with a valid lexical form.
pub struct RangeRule;

impl ValidationRule for RangeRule {
    fn name(&self) -> &'static str {
        "range"
    }

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>) {
        for (s, p, o) in ctx.schema_triples() {
            let def = ctx.schema.property(&p).expect("schema property");
            let range = ctx.compact(&def.range);
            let prop = ctx.compact(&p);
            let mut report = |kind, severity, message: String| {
                out.push(Violation {
                    focus: s.clone(),
                    kind,
                    property: Some(p.clone()),
                    value: Some(o.clone()),
                    severity,
                    message,
                })
            };
            match def.kind {
                PropertyKind::Object => {
                    if o.is_literal() {
                        report(ViolationKind::Range, Severity::Error, format!("{prop} expects a {range} resource, got literal {o}"));
                        continue;
                    }
                    match ctx.types_of(&o) {
                        None => report(
                            ViolationKind::Range,
                            Severity::Warning,
                            format!("cannot confirm {o} is a {range}: it has no rdf:type"),
                        ),
                        Some(types) if !types.contains(&def.range) => report(
                            ViolationKind::Range,
                            Severity::Error,
                            format!("{prop} expects a {range}, {o} is not one"),
                        ),
                        Some(_) => {}
                    }
                }
                PropertyKind::Data => {
                    let Some(lit) = o.as_literal() else {
                        report(ViolationKind::Datatype, Severity::Error, format!("{prop} expects a {range} literal, got {o}"));
                        continue;
                    };
                    let any_literal = def.range.as_str() == "http://www.w3.org/2000/01/rdf-schema#Literal";
                    if !any_literal && lit.datatype() != &def.range {
                        report(
                            ViolationKind::Datatype,
                            Severity::Error,
                            format!("{prop} expects {range}, got {}", ctx.compact(lit.datatype())),
                        );
                    } else if !lit.has_valid_lexical_form() {
                        report(
                            ViolationKind::Datatype,
                            Severity::Error,
                            format!("{:?} is not a valid {range}", lit.lexical()),
                        );
                    }
                }
            }
        }
    }
}

/// Occurrences per (subject, property) within the declared bounds.
pub struct CardinalityRule;

impl ValidationRule for CardinalityRule {
    fn name(&self) -> &'static str {
        "cardinality"
    }

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>) {
        let mut counts: BTreeMap<(Term, Iri), usize> = BTreeMap::new();
        for (s, p, _) in ctx.schema_triples() {
            *counts.entry((s, p)).or_default() += 1;
        }
        for ((s, p), n) in &counts {
            let def = ctx.schema.property(p).expect("schema property");
            if let Some(max) = def.cardinality.max {
                if *n > max as usize {
                    out.push(Violation {
                        focus: s.clone(),
                        kind: ViolationKind::CardinalityMax,
                        property: Some(p.clone()),
                        value: None,
                        severity: Severity::Error,
                        message: format!("{} occurs {n} times, at most {max} allowed", ctx.compact(p)),
                    });
                }
            }
        }
        for def in ctx.schema.properties().values().filter(|d| d.cardinality.min > 0) {
            for (node, types) in &ctx.types {
                if types.is_disjoint(&def.domain) {
                    continue;
                }
                let n = counts.get(&(node.clone(), def.iri.clone())).copied().unwrap_or(0);
                if n < def.cardinality.min as usize {
                    out.push(Violation {
                        focus: node.clone(),
                        kind: ViolationKind::CardinalityMin,
                        property: Some(def.iri.clone()),
                        value: None,
                        severity: Severity::Error,
                        message: format!("{} occurs {n} times, at least {} required", ctx.compact(&def.iri), def.cardinality.min),
                    });
                }
            }
        }
    }
}

/// Terms in the AMV namespace must be defined by the schema.
pub struct UnknownTermRule;

impl ValidationRule for UnknownTermRule {
    fn name(&self) -> &'static str {
        "unknown-term"
    }

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>) {
        let rdf_type = iri(ns::rdf::TYPE);
        for t in ctx.graph.iter() {
            let p = t.predicate();
            if p.is_in_namespace(ns::AMV) && ctx.schema.property(p).is_none() {
                out.push(Violation {
                    focus: t.subject().clone(),
                    kind: ViolationKind::UnknownProperty,
                    property: Some(p.clone()),
                    value: None,
                    severity: Severity::Error,
                    message: format!("{} is not a property of the vocabulary", ctx.compact(p)),
                });
            }
            if p == &rdf_type {
                if let Term::Iri(class) = t.object() {
                    if class.is_in_namespace(ns::AMV) && ctx.schema.class(class).is_none() {
                        out.push(Violation {
                            focus: t.subject().clone(),
                            kind: ViolationKind::UnknownClass,
                            property: None,
                            value: Some(t.object().clone()),
                            severity: Severity::Error,
                            message: format!("{} is not a class of the vocabulary", ctx.compact(class)),
                        });
                    }
                }
            }
        }
    }
}

/// Subjects using schema properties without any `rdf:type`.
pub struct UntypedSubjectRule;

impl ValidationRule for UntypedSubjectRule {
    fn name(&self) -> &'static str {
        "untyped-subject"
    }

    fn check(&self, ctx: &RuleContext<'_>, out: &mut Vec<Violation>) {
        let subjects: BTreeSet<Term> = ctx.schema_triples().map(|(s, _, _)| s).collect();
        for s in subjects {
            if ctx.types_of(&s).is_none() {
                out.push(Violation {
                    focus: s,
                    kind: ViolationKind::UntypedSubject,
                    property: None,
                    value: None,
                    severity: if ctx.options.untyped_is_error {
                        Severity::Error
                    } else {
                        Severity::Warning
                    },
                    message: "subject has no rdf:type; domain cannot be checked".to_string(),
                });
            }
        }
    }
}

/// Runs a set of rules.
#[derive(Clone)]
pub struct Validator {
    rules: Vec<Arc<dyn ValidationRule>>,
    options: ValidationOptions,
}

impl Default for Validator {
    fn default() -> Self {
        Validator {
            rules: vec![
                Arc::new(DomainRule),
                Arc::new(RangeRule),
                Arc::new(CardinalityRule),
                Arc::new(UnknownTermRule),
                Arc::new(UntypedSubjectRule),
            ],
            options: ValidationOptions::default(),
        }
    }
}

impl Validator {
    pub fn with_options(mut self, options: ValidationOptions) -> Self {
        self.options = options;
        self
    }

    pub fn with_rule(mut self, rule: Arc<dyn ValidationRule>) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn rule_names(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.name()).collect()
    }

    pub fn validate(&self, schema: &VocabSchema, graph: &Graph) -> ValidationReport {
        let ctx = RuleContext::new(schema, graph, self.options);
        let mut violations = Vec::new();
        for rule in &self.rules {
            rule.check(&ctx, &mut violations);
        }
        ValidationReport::from_violations(violations)
    }

    /// Validates `addition` as it would sit inside `context`: types and
    /// counts come from the union, but only violations about subjects of
    /// `addition` are reported.
    pub fn validate_addition(&self, schema: &VocabSchema, addition: &Graph, context: &Graph) -> ValidationReport {
        let mut merged = context.clone();
        merged.extend(addition.iter());
        let focus: BTreeSet<&Term> = addition.subjects().collect();
        let report = self.validate(schema, &merged);
        ValidationReport::from_violations(report.violations.into_iter().filter(|v| focus.contains(&v.focus)).collect())
    }
}

/// Validates with the default rule set.
pub fn validate_graph(schema: &VocabSchema, graph: &Graph) -> ValidationReport {
    Validator::default().validate(schema, graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::load_builtin_schema;
    use crate::syntax::parse_turtle;

    const HEAD: &str = "@prefix amv: <https://www.isibang.ac.in/ns/amv#> .
        @prefix foaf: <http://xmlns.com/foaf/0.1/> .
        @prefix dct: <http://purl.org/dc/terms/> .
        @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
        @prefix ex: <http://example.org/> .\n";

    fn check(body: &str) -> ValidationReport {
        let g = parse_turtle(&format!("{HEAD}{body}"), None).unwrap().graph;
        validate_graph(&load_builtin_schema(), &g)
    }

    fn kinds(r: &ValidationReport) -> Vec<(ViolationKind, Severity)> {
        r.violations.iter().map(|v| (v.kind, v.severity)).collect()
    }

    #[test]
    fn person_with_algorithm_type_is_domain_error() {
        let r = check("ex:x a foaf:Person ; amv:algorithmType amv:Dynamic . amv:Dynamic a amv:AlgorithmType .");
        assert!(!r.conforms);
        assert_eq!(kinds(&r), vec![(ViolationKind::Domain, Severity::Error)]);
    }

    #[test]
    fn yes_is_not_boolean() {
        let r = check(r#"ex:x a amv:Algorithm ; amv:languageIndependent "yes" ."#);
        assert_eq!(kinds(&r), vec![(ViolationKind::Datatype, Severity::Error)]);
    }

    #[test]
    fn invalid_lexical_form_for_matching_datatype() {
        let r = check(r#"ex:x a amv:Algorithm ; dct:title "T"^^<http://www.w3.org/2001/XMLSchema#string> ; amv:numberOfSteps 3 . ex:y a amv:Algorithm ; dct:created "1962"^^xsd:gYear ."#);
        assert!(r.conforms, "{r:?}");
    }

    #[test]
    fn subclass_typed_objects_satisfy_range() {
        let r = check("ex:x a amv:Algorithm ; amv:problemType ex:knap . ex:knap a amv:CombinatorialProblem .");
        assert!(r.conforms && r.violations.is_empty(), "{r:?}");
        let r = check("ex:x a amv:Algorithm ; amv:problemType ex:java . ex:java a amv:ProgrammingLanguage .");
        assert_eq!(kinds(&r), vec![(ViolationKind::Range, Severity::Error)]);
    }

    #[test]
    fn untyped_objects_and_subjects_warn() {
        let r = check("ex:x a amv:Algorithm ; amv:problemType ex:knap .");
        assert!(r.conforms);
        assert_eq!(kinds(&r), vec![(ViolationKind::Range, Severity::Warning)]);
        let r = check(r#"ex:x dct:title "t" ."#);
        assert!(r.conforms);
        assert_eq!(kinds(&r), vec![(ViolationKind::UntypedSubject, Severity::Warning)]);
        let g = parse_turtle(&format!("{HEAD}ex:x dct:title \"t\" ."), None).unwrap().graph;
        let strict = Validator::default().with_options(ValidationOptions { untyped_is_error: true });
        assert!(!strict.validate(&load_builtin_schema(), &g).conforms);
    }

    #[test]
    fn literal_for_object_property_is_range_error() {
        let r = check(r#"ex:x a amv:Algorithm ; amv:problemType "knapsack" ."#);
        assert_eq!(kinds(&r), vec![(ViolationKind::Range, Severity::Error)]);
        let r = check("ex:x a amv:Algorithm ; amv:numberOfSteps ex:seven .");
        assert_eq!(kinds(&r), vec![(ViolationKind::Datatype, Severity::Error)]);
    }

    #[test]
    fn max_cardinality() {
        let r = check("ex:x a amv:Algorithm ; amv:numberOfSteps 3, 4 .");
        assert_eq!(kinds(&r), vec![(ViolationKind::CardinalityMax, Severity::Error)]);
        let r = check(r#"ex:x a amv:Algorithm ; amv:input "a", "b" ."#);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn min_cardinality_from_extension() {
        let ext = "@prefix amv: <https://www.isibang.ac.in/ns/amv#> . @prefix mf: <urn:amv-registry:manifest#> .
                   @prefix owl: <http://www.w3.org/2002/07/owl#> . @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
                   @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
                   amv:version a owl:DatatypeProperty ; rdfs:domain amv:Algorithm ; rdfs:range xsd:string ; mf:minCount 1 .";
        let schema = VocabSchema::from_manifests(&[crate::schema::BUILTIN_MANIFEST, ext]).unwrap();
        let g = parse_turtle(&format!("{HEAD}ex:x a amv:Algorithm ."), None).unwrap().graph;
        let r = validate_graph(&schema, &g);
        assert_eq!(kinds(&r), vec![(ViolationKind::CardinalityMin, Severity::Error)]);
    }

    #[test]
    fn unknown_amv_terms() {
        let r = check("ex:x a amv:Algorithm, amv:Gizmo ; amv:nope ex:y ; ex:other ex:z .");
        assert_eq!(
            kinds(&r),
            vec![(ViolationKind::UnknownProperty, Severity::Error), (ViolationKind::UnknownClass, Severity::Error)]
        );
    }

    #[test]
    fn schema_export_validates_cleanly() {
        let schema = load_builtin_schema();
        let r = validate_graph(&schema, &schema.export());
        assert_eq!(r.errors().count(), 0, "{r:?}");
    }

    #[test]
    fn addition_sees_context_types_and_counts() {
        let schema = load_builtin_schema();
        let ctx = parse_turtle(&format!("{HEAD}amv:Java a amv:ProgrammingLanguage . ex:x a amv:Algorithm ; amv:numberOfSteps 3 ."), None)
            .unwrap()
            .graph;
        let add = parse_turtle(&format!("{HEAD}ex:y a amv:Algorithm ; amv:implementationInLanguage amv:Java ."), None)
            .unwrap()
            .graph;
        let r = Validator::default().validate_addition(&schema, &add, &ctx);
        assert!(r.violations.is_empty(), "{r:?}");
        let add = parse_turtle(&format!("{HEAD}ex:x amv:numberOfSteps 4 ."), None).unwrap().graph;
        let r = Validator::default().validate_addition(&schema, &add, &ctx);
        assert_eq!(kinds(&r), vec![(ViolationKind::CardinalityMax, Severity::Error)]);
    }

    #[test]
    fn text_listing() {
        let r = check(r#"ex:x a amv:Algorithm ; amv:languageIndependent "yes" ."#);
        let text = r.to_text(&PrefixMap::standard());
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("error\tdatatype\thttp://example.org/x\t"), "{text}");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["conforms"], false);
        assert_eq!(json["violations"][0]["kind"], "datatype");
    }
}
