use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rdf::{ns, Iri};

/// The seven top-level facets an algorithm is described under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Facet {
    General,
    Authority,
    Rights,
    IterationAndSolution,
    Coverage,
    Environment,
    Resource,
}

impl Facet {
    pub const ALL: [Facet; 7] = [
        Facet::General,
        Facet::Authority,
        Facet::Rights,
        Facet::IterationAndSolution,
        Facet::Coverage,
        Facet::Environment,
        Facet::Resource,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Facet::General => "General",
            Facet::Authority => "Authority",
            Facet::Rights => "Rights",
            Facet::IterationAndSolution => "IterationAndSolution",
            Facet::Coverage => "Coverage",
            Facet::Environment => "Environment",
            Facet::Resource => "Resource",
        }
    }

    pub fn manifest_iri(self) -> Iri {
        Iri::new(format!("{}{}", ns::MANIFEST, self.name())).expect("facet IRI")
    }

    pub fn from_manifest_iri(iri: &Iri) -> Option<Facet> {
        let local = iri.as_str().strip_prefix(ns::MANIFEST)?;
        local.parse().ok()
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Facet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Facet::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown facet {s:?}"))
    }
}
