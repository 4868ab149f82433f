//! Subcommand implementations behind the `sparsecol` binary.
//!
//! Every `cmd_*` function writes its normal output to the given writer and
//! returns an error for anything that should end the process with a
//! nonzero status. [`DataError`] marks the "data problem under `--strict`"
//! case, which maps to exit code 2.

mod fetch;

use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sparsecol::ingest::IngestOutcome;
use sparsecol::shell::run_repl;
use sparsecol::sql::{covid_table, generate_schema, split_statements, Outcome, SqlEngine};
use sparsecol::store::{ImportColumn, ImportReport, ImportSpec};
use sparsecol::Store;

pub use fetch::{cmd_fetch, default_url, FetchArgs, FetchReport};

pub const DEFAULT_DATES: &str = "2020-01-22:2020-03-31";

#[derive(Debug, Parser)]
#[command(
    name = "sparsecol",
    version,
    about = "Sparse COVID-19 time series: fetch, format, load and query"
)]
pub struct Cli {
    /// Store directory (tables, manifest and catalog).
    #[arg(long, env = "STORE_DIR", default_value = "store", global = true)]
    pub store_dir: PathBuf,
    /// Directory for raw and formatted CSV files.
    #[arg(long, env = "DATA_DIR", default_value = "data", global = true)]
    pub data_dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download raw time-series CSVs into the data directory.
    Fetch(FetchArgs),
    /// Format raw CSVs into the sparse, key-merged files.
    Ingest {
        #[arg(value_enum, required = true)]
        series: Vec<Series>,
    },
    /// Bulk-load a delimited file into a store table.
    Load(LoadArgs),
    /// Run SQL statements.
    Sql(SqlArgs),
    /// HBase-style shell over the store.
    Shell {
        /// Read commands from a file instead of standard input.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Print the CREATE TABLE statement for a date range.
    SchemaGen(SchemaGenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Series {
    Confirmed,
    Deaths,
    Recovered,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::Confirmed => "confirmed",
            Series::Deaths => "deaths",
            Series::Recovered => "recovered",
        }
    }

    /// Upstream file name, e.g. `time_series_covid19_confirmed_global.csv`.
    pub fn file_name(self) -> String {
        format!("time_series_covid19_{}_global.csv", self.name())
    }
}

#[derive(Debug, Args)]
pub struct LoadArgs {
    pub table: String,
    pub file: PathBuf,
    /// Explicit column list, e.g. `HBASE_ROW_KEY,a:lt,a:lg,a:d122`.
    #[arg(long, conflicts_with = "dates")]
    pub columns: Option<String>,
    /// Generate the column list for an inclusive range, `YYYY-MM-DD:YYYY-MM-DD`.
    #[arg(long)]
    pub dates: Option<String>,
    /// Column family used with `--dates`.
    #[arg(long, default_value = "a")]
    pub family: String,
    #[arg(long, default_value_t = ',')]
    pub separator: char,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub skip_bad_lines: bool,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub skip_empty_columns: bool,
    /// Create the table (with the families its columns use) if it does not exist.
    #[arg(long)]
    pub create: bool,
    /// Exit with status 2 if any line was skipped.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SqlArgs {
    /// Statement text; several may be separated by `;`.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub statement: Option<String>,
    /// Read statements from a file.
    #[arg(short = 'f', long = "file")]
    pub file: Option<PathBuf>,
    /// Continue after a failing statement.
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Args)]
pub struct SchemaGenArgs {
    #[arg(long)]
    pub table: String,
    /// Backing store table; defaults to the table name.
    #[arg(long)]
    pub store_table: Option<String>,
    #[arg(long, default_value = "a")]
    pub family: String,
    #[arg(long, default_value = DEFAULT_DATES)]
    pub dates: String,
}

/// A data-quality failure under `--strict` (exit code 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct DataError(pub String);

/// Process exit status for a command result.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) if e.is::<DataError>() => 2,
        Err(_) => 1,
    }
}

pub fn parse_date_range(s: &str) -> Result<(NaiveDate, NaiveDate)> {
    let (a, b) = s
        .split_once(':')
        .with_context(|| format!("date range {s:?} must look like 2020-01-22:2020-03-31"))?;
    let day = |t: &str| {
        NaiveDate::parse_from_str(t.trim(), "%Y-%m-%d")
            .with_context(|| format!("bad date {t:?} in range {s:?}"))
    };
    let (start, end) = (day(a)?, day(b)?);
    if start > end {
        bail!("date range {s:?} ends before it starts");
    }
    Ok((start, end))
}

/// Import columns for `--dates`: the row key, `lt`, `lg`, then one
/// qualifier per day, in the same order as the generated schema.
pub fn generated_columns(family: &str, range: &str) -> Result<Vec<ImportColumn>> {
    let (start, end) = parse_date_range(range)?;
    let table = covid_table("generated", "generated", family, start, end)?;
    Ok(table.mapping.import_columns())
}

fn open_store(dir: &Path) -> Result<Arc<Store>> {
    let store = Store::open(dir).with_context(|| format!("cannot open store {}", dir.display()))?;
    Ok(Arc::new(store))
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if cli.store_dir == cli.data_dir {
        bail!(
            "--store-dir and --data-dir must differ (both are {})",
            cli.store_dir.display()
        );
    }
    match cli.command {
        Command::Fetch(args) => {
            let report = cmd_fetch(&cli.data_dir, &args, out)?;
            for (series, e) in &report.failures {
                writeln!(err, "error: fetch {}: {e:#}", series.name())?;
            }
            if !report.failures.is_empty() {
                bail!(
                    "{} of {} downloads failed",
                    report.failures.len(),
                    args.series.len()
                );
            }
            Ok(())
        }
        Command::Ingest { series } => {
            for s in series {
                let outcome = cmd_ingest(&cli.data_dir, s)?;
                writeln!(
                    out,
                    "{}: {} rows -> {}, {}",
                    s.name(),
                    outcome.rows,
                    outcome.paths.sparse.display(),
                    outcome.paths.with_header.display()
                )?;
                for e in &outcome.errors {
                    writeln!(err, "warning: {}: line {}: {}", s.name(), e.line, e.message)?;
                }
            }
            Ok(())
        }
        Command::Load(args) => {
            let store = open_store(&cli.store_dir)?;
            let report = cmd_load(&store, &args)?;
            store.flush()?;
            writeln!(
                out,
                "loaded {} lines into {}, skipped {}",
                report.loaded, args.table, report.skipped
            )?;
            for e in &report.errors {
                writeln!(err, "skipped line {}: {}", e.line, e.reason)?;
            }
            if args.strict && report.skipped > 0 {
                return Err(DataError(format!(
                    "{} line(s) skipped under --strict",
                    report.skipped
                ))
                .into());
            }
            Ok(())
        }
        Command::Sql(args) => {
            let text = match (&args.statement, &args.file) {
                (Some(s), _) => s.clone(),
                (None, Some(f)) => {
                    fs::read_to_string(f).with_context(|| format!("cannot read {}", f.display()))?
                }
                (None, None) => bail!("give a statement or -f FILE"),
            };
            let store = open_store(&cli.store_dir)?;
            let result = cmd_sql(&store, &text, args.keep_going, out, err);
            store.flush()?;
            result
        }
        Command::Shell { script } => {
            let store = open_store(&cli.store_dir)?;
            let result = match script {
                Some(path) => {
                    let f = fs::File::open(&path)
                        .with_context(|| format!("cannot open {}", path.display()))?;
                    cmd_shell(&store, io::BufReader::new(f), out, None)
                }
                None => {
                    let stdin = io::stdin();
                    let prompt = stdin.is_terminal().then_some("sparsecol> ");
                    cmd_shell(&store, stdin.lock(), out, prompt)
                }
            };
            store.flush()?;
            result
        }
        Command::SchemaGen(args) => {
            let text = cmd_schema_gen(&args)?;
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Formats `<data_dir>/<upstream file>` into both sparse variants next to it.
pub fn cmd_ingest(data_dir: &Path, series: Series) -> Result<IngestOutcome> {
    let input = data_dir.join(series.file_name());
    if !input.is_file() {
        bail!("raw file {} not found (run fetch first)", input.display());
    }
    sparsecol::ingest::write_variants(&input, data_dir)
        .with_context(|| format!("cannot ingest {}", input.display()))
}

pub fn cmd_load(store: &Store, args: &LoadArgs) -> Result<ImportReport> {
    let columns = match (&args.columns, &args.dates) {
        (Some(spec), None) => ImportSpec::parse_columns(spec)?,
        (None, Some(range)) => generated_columns(&args.family, range)?,
        (None, None) => bail!("give --columns or --dates"),
        (Some(_), Some(_)) => bail!("--columns and --dates are mutually exclusive"),
    };
    let spec = ImportSpec::new(args.separator, columns)?
        .with_skip_bad_lines(args.skip_bad_lines)
        .with_skip_empty_columns(args.skip_empty_columns);
    if args.create && store.describe_table(&args.table).is_none() {
        let families: std::collections::BTreeSet<String> = spec
            .columns()
            .iter()
            .filter_map(|c| match c {
                ImportColumn::Cell(coord) => Some(coord.family().to_string()),
                ImportColumn::RowKey => None,
            })
            .collect();
        store.create_table(&args.table, families)?;
    }
    let report = store
        .import_tsv(&args.table, &args.file, &spec)
        .with_context(|| format!("cannot load {} into {}", args.file.display(), args.table))?;
    Ok(report)
}

/// Runs every statement in `text`. Errors name the 1-based statement index.
pub fn cmd_sql(
    store: &Arc<Store>,
    text: &str,
    keep_going: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let engine = SqlEngine::open(store.clone())?;
    let mut failed = 0;
    let statements = split_statements(text);
    for (i, stmt) in statements.iter().enumerate() {
        match engine.execute(stmt) {
            Ok(Outcome::Done { message }) if message.starts_with("WARNING") => {
                writeln!(err, "{message}")?
            }
            Ok(outcome) => out.write_all(outcome.render().as_bytes())?,
            Err(e) => {
                failed += 1;
                writeln!(err, "error: statement {}: {e}", i + 1)?;
                if !keep_going {
                    bail!("statement {} failed", i + 1);
                }
            }
        }
    }
    if failed > 0 {
        bail!("{failed} of {} statements failed", statements.len());
    }
    Ok(())
}

pub fn cmd_shell(
    store: &Store,
    input: impl BufRead,
    out: &mut dyn Write,
    prompt: Option<&str>,
) -> Result<()> {
    let summary = run_repl(input, out, store, prompt)?;
    if summary.errors > 0 {
        bail!(
            "{} of {} shell commands failed",
            summary.errors,
            summary.commands
        );
    }
    Ok(())
}

pub fn cmd_schema_gen(args: &SchemaGenArgs) -> Result<String> {
    let (start, end) = parse_date_range(&args.dates)?;
    let store_table = args.store_table.as_deref().unwrap_or(&args.table);
    Ok(generate_schema(
        &args.table,
        store_table,
        &args.family,
        start,
        end,
    )?)
}
