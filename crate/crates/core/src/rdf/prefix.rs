use std::collections::BTreeMap;

use super::ns;
use super::term::Iri;

/// Prefix label to namespace IRI.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The predeclared prefixes (amv, rdf, rdfs, owl, xsd, dct, foaf, ...).
    pub fn standard() -> Self {
        let mut pm = PrefixMap::new();
        for (label, namespace) in ns::STANDARD_PREFIXES {
            pm.insert(label, Iri::from_static(namespace));
        }
        pm
    }

    /// Binds `label`, replacing any previous binding.
    pub fn insert(&mut self, label: &str, namespace: Iri) {
        self.entries.insert(label.to_string(), namespace);
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.entries.get(label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds every binding of `other` whose label is not already bound here.
    pub fn merge_missing(&mut self, other: &PrefixMap) {
        for (label, namespace) in other.iter() {
            self.entries
                .entry(label.to_string())
                .or_insert_with(|| namespace.clone());
        }
    }

    /// Expands `prefix:local`.
    pub fn expand(&self, compact: &str) -> Option<Iri> {
        let (label, local) = compact.split_once(':')?;
        let namespace = self.entries.get(label)?;
        Iri::new(format!("{}{}", namespace.as_str(), local)).ok()
    }

    /// Longest-namespace match; returns `(label, local)`.
    pub fn compact<'a, 'b>(&'a self, iri: &'b Iri) -> Option<(&'a str, &'b str)> {
        self.entries
            .iter()
            .filter(|(_, namespace)| iri.as_str().starts_with(namespace.as_str()))
            .max_by(|(la, a), (lb, b)| a.as_str().len().cmp(&b.as_str().len()).then(lb.cmp(la)))
            .map(|(label, namespace)| (label.as_str(), &iri.as_str()[namespace.as_str().len()..]))
    }

    /// `prefix:local` when a prefix matches, else the full IRI string.
    pub fn compact_or_full(&self, iri: &Iri) -> String {
        match self.compact(iri) {
            Some((label, local)) => format!("{label}:{local}"),
            None => iri.as_str().to_string(),
        }
    }
}
