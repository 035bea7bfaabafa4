//! The persistent dataset.
//!
//! A [`Store`] owns a data directory holding one canonical, sorted
//! N-Triples snapshot (`data.nt`). Readers take an `Arc` of the current
//! [`Dataset`] revision; writers go through a single gate, build the next
//! revision off to the side, persist it with an atomic rename and only then
//! swap it in.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use crate::error::StoreError;
use crate::rdf::{BlankNode, Graph, Iri, Term, Triple};
use crate::schema::{VocabSchema, BUILTIN_MANIFEST};
use crate::syntax::{parse_ntriples, parse_turtle, write_ntriples};
use crate::validation::{ValidationReport, Validator};

/// Bundled seed catalogue (Turtle).
pub const SEED_TURTLE: &str = include_str!("../data/amv-seed.ttl");

pub const SNAPSHOT_FILE: &str = "data.nt";
/// Optional Turtle manifest merged into the bundled schema.
pub const SCHEMA_EXTENSION_FILE: &str = "schema-extension.ttl";
pub const DATA_DIR_ENV: &str = "AMV_DATA_DIR";

/// The bundled eleven-algorithm graph.
pub fn load_seed() -> Graph {
    parse_turtle(SEED_TURTLE, None).expect("bundled seed is valid Turtle").graph
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IngestMode {
    /// Add only if the addition validates without errors.
    Strict,
    /// Add regardless; the report is informational.
    Permissive,
}

/// One immutable revision of the instance graph.
#[derive(Clone, Debug)]
pub struct Dataset {
    graph: Arc<Graph>,
    schema: Arc<VocabSchema>,
    revision: u64,
}

impl Dataset {
    pub fn new(schema: Arc<VocabSchema>) -> Self {
        Dataset {
            graph: Arc::new(Graph::new()),
            schema,
            revision: 0,
        }
    }

    pub fn with_graph(schema: Arc<VocabSchema>, graph: Graph) -> Self {
        Dataset {
            graph: Arc::new(graph),
            schema,
            revision: 0,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn schema(&self) -> &VocabSchema {
        &self.schema
    }

    pub fn schema_arc(&self) -> Arc<VocabSchema> {
        self.schema.clone()
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    /// Validates `addition` against this revision and returns the next
    /// revision (or a clone of this one when nothing was added).
    pub fn ingest(&self, addition: &Graph, mode: IngestMode, validator: &Validator) -> (Dataset, ValidationReport) {
        let addition = relabel_blank_nodes(addition, self.revision + 1);
        let report = validator.validate_addition(&self.schema, &addition, &self.graph);
        if mode == IngestMode::Strict && !report.conforms {
            return (self.clone(), report);
        }
        let fresh: Vec<Triple> = addition.iter().filter(|t| !self.graph.contains(t)).collect();
        if fresh.is_empty() {
            return (self.clone(), report);
        }
        let mut graph = (*self.graph).clone();
        graph.extend(fresh);
        let next = Dataset {
            graph: Arc::new(graph),
            schema: self.schema.clone(),
            revision: self.revision + 1,
        };
        (next, report)
    }

    /// Drops every triple with `subject`; `None` if there were none.
    pub fn delete(&self, subject: &Iri) -> Option<Dataset> {
        let mut graph = (*self.graph).clone();
        if graph.remove_subject(&Term::Iri(subject.clone())) == 0 {
            return None;
        }
        Some(Dataset {
            graph: Arc::new(graph),
            schema: self.schema.clone(),
            revision: self.revision + 1,
        })
    }
}

/// Incoming blank nodes must not merge with ones already stored.
fn relabel_blank_nodes(g: &Graph, revision: u64) -> Graph {
    if !g.has_blank_nodes() {
        return g.clone();
    }
    let relabel = |t: &Term| match t {
        Term::BlankNode(b) => Term::BlankNode(BlankNode::new(format!("r{revision}{}", b.label())).expect("label")),
        other => other.clone(),
    };
    g.iter()
        .map(|t| Triple::new(relabel(t.subject()), t.predicate().clone(), relabel(t.object())).expect("subject"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct IngestOutcome {
    pub report: ValidationReport,
    /// Whether the dataset changed.
    pub applied: bool,
    pub revision: u64,
}

pub struct Store {
    dir: PathBuf,
    current: RwLock<Arc<Dataset>>,
    writer: Mutex<()>,
    validator: Validator,
    read_only: bool,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Bundled schema plus the data directory's extension manifest, if any.
pub fn load_schema_for(dir: &Path) -> Result<VocabSchema, StoreError> {
    let ext_path = dir.join(SCHEMA_EXTENSION_FILE);
    if ext_path.exists() {
        let ext = fs::read_to_string(&ext_path).map_err(io_err(&ext_path))?;
        Ok(VocabSchema::from_manifests(&[BUILTIN_MANIFEST, &ext])?)
    } else {
        Ok(VocabSchema::from_manifests(&[BUILTIN_MANIFEST])?)
    }
}

impl Store {
    /// Opens (creating if needed) a data directory.
    pub fn open(dir: impl AsRef<Path>) -> Result<Store, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let schema = Arc::new(load_schema_for(&dir)?);
        let snapshot = dir.join(SNAPSHOT_FILE);
        let graph = if snapshot.exists() {
            let text = fs::read_to_string(&snapshot).map_err(io_err(&snapshot))?;
            parse_ntriples(&text)
                .map_err(|diagnostic| StoreError::CorruptSnapshot {
                    path: snapshot.clone(),
                    diagnostic,
                })?
                .graph
        } else {
            Graph::new()
        };
        Ok(Store {
            dir,
            current: RwLock::new(Arc::new(Dataset::with_graph(schema, graph))),
            writer: Mutex::new(()),
            validator: Validator::default(),
            read_only: false,
        })
    }

    /// Opens `dir` and adds the seed catalogue to it.
    pub fn init_with_seed(dir: impl AsRef<Path>) -> Result<(Store, ValidationReport), StoreError> {
        let store = Store::open(dir)?;
        let outcome = store.ingest(&load_seed(), IngestMode::Strict)?;
        store.persist()?;
        Ok((store, outcome.report))
    }

    pub fn read_only(mut self, read_only: bool) -> Self {
        self.read_only = read_only;
        self
    }

    pub fn with_validator(mut self, validator: Validator) -> Self {
        self.validator = validator;
        self
    }

    pub fn is_read_only(&self) -> bool {
        self.read_only
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn validator(&self) -> &Validator {
        &self.validator
    }

    /// The current revision. Never observes a half-applied write.
    pub fn snapshot(&self) -> Arc<Dataset> {
        self.current.read().expect("store lock").clone()
    }

    pub fn ingest(&self, addition: &Graph, mode: IngestMode) -> Result<IngestOutcome, StoreError> {
        if self.read_only {
            return Err(StoreError::ReadOnly);
        }
        let _gate = self.writer.lock().expect("writer gate");
        let current = self.snapshot();
        let (next, report) = current.ingest(addition, mode, &self.validator);
        let applied = next.revision() != current.revision();
        if applied {
            self.write_snapshot(next.graph())?;
            *self.current.write().expect("store lock") = Arc::new(next);
        }
        Ok(IngestOutcome {
            report,
            applied,
            revision: self.snapshot().revision(),
        })
    }

    /// Removes a whole record; returns whether anything was deleted.
    pub fn delete(&self, subject: &Iri) -> Result<bool, StoreError> {
        if self.read_only {
            return Err(StoreError::ReadOnly);
        }
        let _gate = self.writer.lock().expect("writer gate");
        let Some(next) = self.snapshot().delete(subject) else {
            return Ok(false);
        };
        self.write_snapshot(next.graph())?;
        *self.current.write().expect("store lock") = Arc::new(next);
        Ok(true)
    }

    /// Writes the current revision to disk.
    pub fn persist(&self) -> Result<(), StoreError> {
        let _gate = self.writer.lock().expect("writer gate");
        self.write_snapshot(self.snapshot().graph())
    }

    fn write_snapshot(&self, graph: &Graph) -> Result<(), StoreError> {
        let target = self.dir.join(SNAPSHOT_FILE);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(write_ntriples(graph).as_bytes()).map_err(io_err(tmp.path()))?;
        tmp.as_file().sync_all().map_err(io_err(&target))?;
        tmp.persist(&target).map_err(|e| StoreError::Io {
            path: target.clone(),
            source: e.error,
        })?;
        Ok(())
    }
}

/// Operation-name alias for [`Store::open`].
pub fn open_store(dir: impl AsRef<Path>) -> Result<Store, StoreError> {
    Store::open(dir)
}
