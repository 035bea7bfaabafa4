//! Command dispatch for the `amv` binary.
//!
//! Exit codes: 0 on success, 1 when the data or query is at fault (validation
//! errors, syntax errors in a document or query), 2 for usage and I/O errors.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand};
use thiserror::Error;

use amv_core::error::{SearchError, StoreError};
use amv_core::facet::{search, FacetFilter};
use amv_core::rdf::Graph;
use amv_core::schema::{export_schema, load_builtin_schema};
use amv_core::sparql::{results_to_json, results_to_text, run_query};
use amv_core::store::{Dataset, IngestMode, Store, DATA_DIR_ENV, SNAPSHOT_FILE};
use amv_core::syntax::{parse_turtle, FormatRegistry};
use amv_core::validation::Validator;
use amv_service::{serve, ServiceConfig, ServiceError};

#[derive(Debug, Parser)]
#[command(name = "amv", version, about = "Algorithm metadata registry")]
pub struct Cli {
    /// Registry data directory.
    #[arg(long, global = true, env = DATA_DIR_ENV, default_value = "amv-data")]
    pub data_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create the data directory, optionally loading the seed catalogue.
    Init {
        #[arg(long)]
        seed: bool,
    },
    /// Check a Turtle document against the schema without storing it.
    Validate { file: PathBuf },
    /// Validate a Turtle document and add it to the registry.
    Ingest {
        file: PathBuf,
        /// Store the document even if it has validation errors.
        #[arg(long)]
        permissive: bool,
    },
    /// Run a SPARQL SELECT query.
    Query(QueryArgs),
    /// List algorithms matching facet filters.
    Search {
        /// `property=value`, repeatable; all filters must hold.
        #[arg(long = "filter", value_name = "P=V")]
        filters: Vec<String>,
        /// Case-insensitive substring of the title or description.
        #[arg(short = 'q', long = "text")]
        text: Option<String>,
    },
    /// Write the registry contents (or the schema) to stdout.
    Export {
        #[arg(long, default_value = "turtle")]
        format: String,
        #[arg(long)]
        schema: bool,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Accept ingests that have validation errors.
        #[arg(long)]
        permissive: bool,
        #[arg(long)]
        read_only: bool,
        /// Static files served at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["file", "expr"])))]
pub struct QueryArgs {
    /// Query file, or `-` for stdin.
    #[arg(short = 'f', long)]
    pub file: Option<PathBuf>,
    /// Query text.
    #[arg(short = 'e', long)]
    pub expr: Option<String>,
    /// Print SPARQL JSON results instead of a table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Service(#[from] ServiceError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Search(_) => 1,
            CliError::Store(StoreError::CorruptSnapshot { .. }) => 1,
            _ => 2,
        }
    }
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The command ran but found problems (validation errors, rejected ingest).
    Failed,
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "amv: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    let dir = cli.data_dir;
    match cli.command {
        Command::Init { seed } => {
            let store = if seed {
                Store::init_with_seed(&dir)?.0
            } else {
                let store = Store::open(&dir)?;
                store.persist()?;
                store
            };
            writeln!(out, "{}: {} triples", dir.display(), store.snapshot().graph().len())?;
            Ok(Status::Ok)
        }
        Command::Validate { file } => {
            let dataset = existing_dataset(&dir)?;
            let doc = read_turtle(&file)?;
            let report = Validator::default().validate_addition(dataset.schema(), &doc, dataset.graph());
            out.write_all(report.to_text(dataset.schema().prefixes()).as_bytes())?;
            let errors = report.errors().count();
            writeln!(out, "{} error(s), {} warning(s)", errors, report.warnings().count())?;
            Ok(if report.conforms { Status::Ok } else { Status::Failed })
        }
        Command::Ingest { file, permissive } => {
            let doc = read_turtle(&file)?;
            let store = Store::open(&dir)?;
            let mode = if permissive { IngestMode::Permissive } else { IngestMode::Strict };
            let outcome = store.ingest(&doc, mode)?;
            out.write_all(outcome.report.to_text(store.snapshot().schema().prefixes()).as_bytes())?;
            if outcome.applied {
                writeln!(out, "applied at revision {}", outcome.revision)?;
                Ok(Status::Ok)
            } else {
                writeln!(out, "rejected: {} error(s)", outcome.report.errors().count())?;
                Ok(Status::Failed)
            }
        }
        Command::Query(args) => {
            let text = match (args.file, args.expr) {
                (_, Some(expr)) => expr,
                (Some(path), None) => read_text(&path)?,
                (None, None) => return Err(CliError::Usage("one of -f or -e is required".into())),
            };
            let dataset = existing_dataset(&dir)?;
            let table = run_query(dataset.graph(), &text).map_err(|d| CliError::Invalid(format!("query {d}")))?;
            if args.json {
                out.write_all(&results_to_json(&table))?;
            } else {
                out.write_all(results_to_text(&table, dataset.schema().prefixes()).as_bytes())?;
            }
            Ok(Status::Ok)
        }
        Command::Search { filters, text } => {
            let dataset = existing_dataset(&dir)?;
            let filters = filters
                .iter()
                .map(|f| FacetFilter::parse(dataset.schema(), f))
                .collect::<Result<Vec<_>, _>>()?;
            for record in search(&dataset, &filters, text.as_deref())? {
                writeln!(out, "{}", record.summary(dataset.schema().prefixes()))?;
            }
            Ok(Status::Ok)
        }
        Command::Export { format, schema } => {
            let registry = FormatRegistry::default();
            let Some(writer) = registry.get(&format) else {
                let known: Vec<&str> = registry.names().collect();
                return Err(CliError::Usage(format!("unknown format {format:?} (expected one of {})", known.join(", "))));
            };
            let dataset = existing_dataset(&dir)?;
            let text = if schema {
                writer.serialize(&export_schema(dataset.schema()), &dataset.schema().export_prefixes())
            } else {
                writer.serialize(dataset.graph(), dataset.schema().prefixes())
            };
            out.write_all(text.as_bytes())?;
            Ok(Status::Ok)
        }
        Command::Serve { port, host, permissive, read_only, ui_dir } => {
            let config = ServiceConfig {
                port,
                host,
                data_dir: dir,
                strict: !permissive,
                read_only,
                ui_dir,
            };
            config.validate()?;
            let _ = tracing_subscriber::fmt()
                .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
                .try_init();
            let runtime = tokio::runtime::Runtime::new().map_err(ServiceError::Io)?;
            runtime.block_on(serve(config))?;
            Ok(Status::Ok)
        }
    }
}

/// The registry at `dir`, or an empty one with the built-in schema when
/// nothing has been initialised there. Never creates the directory.
fn existing_dataset(dir: &Path) -> Result<Dataset, CliError> {
    if dir.join(SNAPSHOT_FILE).exists() {
        Ok(Store::open(dir)?.snapshot().as_ref().clone())
    } else {
        Ok(Dataset::new(Arc::new(load_builtin_schema())))
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let read = |path: &Path| -> io::Result<String> {
        if path == Path::new("-") {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        } else {
            std::fs::read_to_string(path)
        }
    };
    read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn read_turtle(path: &Path) -> Result<Graph, CliError> {
    let text = read_text(path)?;
    parse_turtle(&text, None)
        .map(|doc| doc.graph)
        .map_err(|d| CliError::Invalid(format!("{}: {d}", path.display())))
}
