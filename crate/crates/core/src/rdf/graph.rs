use std::collections::{BTreeMap, BTreeSet};

use super::term::{Iri, Term, Triple};

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// A set of triples held in three lookup orders: subject-first,
/// predicate-first and object-first.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    spo: Index<Term, Iri, Term>,
    pos: Index<Iri, Term, Term>,
    osp: Index<Term, Term, Iri>,
    len: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

fn index_insert<A: Ord, B: Ord, C: Ord>(index: &mut Index<A, B, C>, a: A, b: B, c: C) -> bool {
    index.entry(a).or_default().entry(b).or_default().insert(c)
}

fn index_remove<A: Ord, B: Ord, C: Ord>(index: &mut Index<A, B, C>, a: &A, b: &B, c: &C) {
    if let Some(by_b) = index.get_mut(a) {
        if let Some(cs) = by_b.get_mut(b) {
            cs.remove(c);
            if cs.is_empty() {
                by_b.remove(b);
            }
        }
        if by_b.is_empty() {
            index.remove(a);
        }
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns true when the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        if !index_insert(&mut self.spo, s.clone(), p.clone(), o.clone()) {
            return false;
        }
        index_insert(&mut self.pos, p.clone(), o.clone(), s.clone());
        index_insert(&mut self.osp, o, s, p);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        if !self.contains(triple) {
            return false;
        }
        let (s, p, o) = (triple.subject(), triple.predicate(), triple.object());
        index_remove(&mut self.spo, s, p, o);
        index_remove(&mut self.pos, p, o, s);
        index_remove(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    /// Drops every triple whose subject is `subject`; returns how many.
    pub fn remove_subject(&mut self, subject: &Term) -> usize {
        let doomed = self.matching(Some(subject), None, None);
        for t in &doomed {
            self.remove(t);
        }
        doomed.len()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.contains_triple(triple.subject(), triple.predicate(), triple.object())
    }

    /// [`Graph::contains`] without building a [`Triple`].
    pub fn contains_triple(&self, s: &Term, p: &Iri, o: &Term) -> bool {
        self.spo.get(s).and_then(|by_p| by_p.get(p)).is_some_and(|os| os.contains(o))
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    /// All triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter().flat_map(move |(p, os)| {
                os.iter()
                    .map(move |o| Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed subject"))
            })
        })
    }

    /// Triples agreeing with every bound position, sorted by
    /// (subject, predicate, object).
    pub fn matching(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out = Vec::new();
        let mk = |s: &Term, p: &Iri, o: &Term| Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed subject");
        match (s, p, o) {
            (Some(s), _, _) => {
                let Some(by_p) = self.spo.get(s) else { return out };
                for (pp, os) in by_p.range(p.cloned().map_or(RangeAll::All, RangeAll::One)) {
                    match o {
                        Some(o) => {
                            if os.contains(o) {
                                out.push(mk(s, pp, o));
                            }
                        }
                        None => out.extend(os.iter().map(|oo| mk(s, pp, oo))),
                    }
                }
            }
            (None, Some(p), _) => {
                let Some(by_o) = self.pos.get(p) else { return out };
                for (oo, ss) in by_o.range(o.cloned().map_or(RangeAll::All, RangeAll::One)) {
                    out.extend(ss.iter().map(|s| mk(s, p, oo)));
                }
                out.sort();
            }
            (None, None, Some(o)) => {
                let Some(by_s) = self.osp.get(o) else { return out };
                for (s, ps) in by_s {
                    out.extend(ps.iter().map(|p| mk(s, p, o)));
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Objects of `(subject, predicate, ?)`, sorted.
    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo
            .get(subject)
            .and_then(|by_p| by_p.get(predicate))
            .into_iter()
            .flatten()
    }

    /// Subjects of `(?, predicate, object)`, sorted.
    pub fn subjects_with<'a>(&'a self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.pos
            .get(predicate)
            .and_then(|by_o| by_o.get(object))
            .into_iter()
            .flatten()
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Term> + '_ {
        self.spo.keys()
    }

    pub fn predicates_of<'a>(&'a self, subject: &Term) -> impl Iterator<Item = &'a Iri> + 'a {
        self.spo.get(subject).into_iter().flat_map(|by_p| by_p.keys())
    }

    pub fn has_blank_nodes(&self) -> bool {
        self.spo.keys().any(Term::is_blank_node) || self.osp.keys().any(Term::is_blank_node)
    }

    #[cfg(test)]
    pub(crate) fn indexes_consistent(&self) -> bool {
        let from_spo: BTreeSet<Triple> = self.iter().collect();
        let from_pos: BTreeSet<Triple> = self
            .pos
            .iter()
            .flat_map(|(p, by_o)| {
                by_o.iter()
                    .flat_map(move |(o, ss)| ss.iter().map(move |s| Triple::new(s.clone(), p.clone(), o.clone()).unwrap()))
            })
            .collect();
        let from_osp: BTreeSet<Triple> = self
            .osp
            .iter()
            .flat_map(|(o, by_s)| {
                by_s.iter()
                    .flat_map(move |(s, ps)| ps.iter().map(move |p| Triple::new(s.clone(), p.clone(), o.clone()).unwrap()))
            })
            .collect();
        from_spo.len() == self.len && from_spo == from_pos && from_spo == from_osp
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

/// Either the full key range or a single key, for `BTreeMap::range`.
enum RangeAll<K> {
    All,
    One(K),
}

impl<K> std::ops::RangeBounds<K> for RangeAll<K> {
    fn start_bound(&self) -> std::ops::Bound<&K> {
        match self {
            RangeAll::All => std::ops::Bound::Unbounded,
            RangeAll::One(k) => std::ops::Bound::Included(k),
        }
    }

    fn end_bound(&self) -> std::ops::Bound<&K> {
        match self {
            RangeAll::All => std::ops::Bound::Unbounded,
            RangeAll::One(k) => std::ops::Bound::Included(k),
        }
    }
}

/// `graph_match` under its operation name.
pub fn graph_match(g: &Graph, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
    g.matching(s, p, o)
}
