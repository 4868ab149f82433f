//! Relational layer over the store: DDL with a struct row key mapped onto
//! store cells, a persistent catalog, and a SELECT/JOIN/WHERE subset.

mod ast;
mod catalog;
mod ddl;
mod exec;
mod lexer;
mod parser;
mod schema_gen;

use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::store::{Store, StoreError};

pub use ast::{ColumnRef, Join, Literal, Predicate, Projection, Query, Statement, TableRef};
pub use catalog::{Catalog, CATALOG_FILE};
pub use ddl::{
    render_ddl, ColumnDef, ColumnMapping, ColumnType, MappedTable, MappingEntry, RelationalSchema,
    COLUMNS_MAPPING_PROP, DEFAULT_COLLECTION_TERMINATOR, KEY_FACTORY_PROP, KEY_MARKER,
    OUTPUT_TABLE_PROP, TABLE_NAME_PROP,
};
pub use exec::{execute_query, ResultSet, Value};
pub use lexer::split_statements;
pub use parser::{parse_ddl, parse_query, parse_statement};
pub use schema_gen::{covid_table, generate_schema, KEY_FACTORY_CLASS, STORAGE_HANDLER_CLASS};

#[derive(Debug, Error)]
pub enum SqlError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported clause: {0}")]
    Unsupported(String),
    #[error("invalid DDL: {0}")]
    Ddl(String),
    #[error("unknown column type: {0}")]
    UnknownType(String),
    #[error("duplicate column: {0}")]
    DuplicateColumn(String),
    #[error("missing required property {0:?}")]
    MissingProperty(&'static str),
    #[error("column mapping has {entries} entries but the table declares {columns} columns")]
    MappingMismatch { columns: usize, entries: usize },
    #[error("table already exists: {0}")]
    TableExists(String),
    #[error("table not found: {0}")]
    TableNotFound(String),
    #[error("backing store table {0} is disabled")]
    BackingTableDisabled(String),
    #[error("unknown column {0}")]
    UnknownColumn(String),
    #[error("ambiguous column reference {0}")]
    AmbiguousColumn(String),
    #[error("cannot decode row {row_key:?}, column {column}: {value:?} is not a valid {ty}")]
    Decode {
        row_key: String,
        column: String,
        value: String,
        ty: &'static str,
    },
    #[error("invalid date range: {start} is after {end}")]
    InvalidDateRange { start: String, end: String },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot replay catalog {path}, statement {index}")]
    Catalog {
        path: PathBuf,
        index: usize,
        #[source]
        source: Box<SqlError>,
    },
}

/// Result of one statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Rows(ResultSet),
    Text(String),
    Done { message: String },
}

impl Outcome {
    /// CLI rendering: TSV for result sets, text verbatim, messages as a line.
    pub fn render(&self) -> String {
        match self {
            Outcome::Rows(rs) => rs.to_tsv(),
            Outcome::Text(t) => t.clone(),
            Outcome::Done { message } => format!("{message}\n"),
        }
    }
}

/// Executes statements against a shared store, keeping the catalog in
/// `<store dir>/CATALOG`.
#[derive(Debug)]
pub struct SqlEngine {
    store: Arc<Store>,
    catalog: RwLock<Catalog>,
}

impl SqlEngine {
    pub fn open(store: Arc<Store>) -> Result<Self, SqlError> {
        let catalog = Catalog::load(store.dir())?;
        Ok(Self {
            store,
            catalog: RwLock::new(catalog),
        })
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    pub fn table(&self, name: &str) -> Option<MappedTable> {
        self.read_catalog().get(name).cloned()
    }

    pub fn tables(&self) -> Vec<MappedTable> {
        self.read_catalog().tables().cloned().collect()
    }

    fn read_catalog(&self) -> std::sync::RwLockReadGuard<'_, Catalog> {
        self.catalog.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write_catalog(&self) -> std::sync::RwLockWriteGuard<'_, Catalog> {
        self.catalog.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn execute(&self, sql: &str) -> Result<Outcome, SqlError> {
        match parse_statement(sql)? {
            Statement::CreateTable(table) => {
                let name = table.name().to_string();
                self.create_mapped_table(*table)?;
                Ok(Outcome::Done {
                    message: format!("OK: created table {name}"),
                })
            }
            Statement::DropTable { name, if_exists } => {
                let message = if self.drop_mapped_table(&name)? {
                    format!("OK: dropped table {name}")
                } else if if_exists {
                    "OK".to_string()
                } else {
                    format!("WARNING: table not found: {name}")
                };
                Ok(Outcome::Done { message })
            }
            Statement::Describe { name } => Ok(Outcome::Text(self.describe(&name)?)),
            Statement::Select(q) => Ok(Outcome::Rows(self.query(&q)?)),
        }
    }

    /// Registers `table`; creates the backing store table when absent and
    /// otherwise attaches to it.
    pub fn create_mapped_table(&self, table: MappedTable) -> Result<(), SqlError> {
        let mut catalog = self.write_catalog();
        if catalog.get(table.name()).is_some() {
            return Err(SqlError::TableExists(table.name().to_string()));
        }
        let store_table = &table.mapping.store_table;
        let families = table.mapping.families();
        match self.store.describe_table(store_table) {
            None => {
                self.store.create_table(store_table, families)?;
            }
            Some(desc) => {
                if !desc.enabled {
                    return Err(SqlError::BackingTableDisabled(store_table.clone()));
                }
                if let Some(missing) = families.iter().find(|f| !desc.families.contains(*f)) {
                    return Err(StoreError::UnknownFamily {
                        table: store_table.clone(),
                        family: missing.clone(),
                    }
                    .into());
                }
            }
        }
        catalog.insert(table);
        catalog.save(self.store.dir())
    }

    /// Removes the catalog entry and its backing table. Returns false when
    /// no such entry exists.
    pub fn drop_mapped_table(&self, name: &str) -> Result<bool, SqlError> {
        let mut catalog = self.write_catalog();
        let Some(table) = catalog.remove(name) else {
            return Ok(false);
        };
        catalog.save(self.store.dir())?;
        let store_table = &table.mapping.store_table;
        if self.store.describe_table(store_table).is_some() {
            self.store.disable_table(store_table)?;
            self.store.drop_table(store_table)?;
        }
        Ok(true)
    }

    pub fn describe(&self, name: &str) -> Result<String, SqlError> {
        self.read_catalog()
            .get(name)
            .map(MappedTable::describe)
            .ok_or_else(|| SqlError::TableNotFound(name.to_string()))
    }

    pub fn query(&self, query: &Query) -> Result<ResultSet, SqlError> {
        let catalog = self.read_catalog().clone();
        execute_query(query, &catalog, &self.store)
    }

    pub fn query_str(&self, sql: &str) -> Result<ResultSet, SqlError> {
        self.query(&parse_query(sql)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> (tempfile::TempDir, SqlEngine) {
        let dir = tempfile::tempdir().unwrap();
        let store = Arc::new(Store::open(dir.path().join("db")).unwrap());
        let engine = SqlEngine::open(store).unwrap();
        (dir, engine)
    }

    fn ddl(name: &str, store_table: &str) -> String {
        let start = chrono::NaiveDate::from_ymd_opt(2020, 3, 30).unwrap();
        let end = chrono::NaiveDate::from_ymd_opt(2020, 3, 31).unwrap();
        generate_schema(name, store_table, "a", start, end).unwrap()
    }

    #[test]
    fn create_attaches_or_creates_backing_table() {
        let (_d, e) = engine();
        e.execute(&ddl("t", "st")).unwrap();
        let desc = e.store().describe_table("st").unwrap();
        assert!(desc.enabled && desc.families.contains("a"));
        assert!(matches!(
            e.execute(&ddl("t", "st")),
            Err(SqlError::TableExists(_))
        ));

        e.store().create_table("loaded", ["a"]).unwrap();
        e.store()
            .put("loaded", "~Morocco", &"a:d331".parse().unwrap(), "7")
            .unwrap();
        e.execute(&ddl("u", "loaded")).unwrap();
        let rs = e.query_str("SELECT 03_31_2020 FROM u").unwrap();
        assert_eq!(rs.rows, vec![vec![Value::Int(7)]]);

        e.store().create_table("off", ["a"]).unwrap();
        e.store().disable_table("off").unwrap();
        assert!(matches!(
            e.execute(&ddl("v", "off")),
            Err(SqlError::BackingTableDisabled(_))
        ));
        assert!(e.table("v").is_none());

        e.store().create_table("other_fam", ["b"]).unwrap();
        assert!(matches!(
            e.execute(&ddl("w", "other_fam")),
            Err(SqlError::Store(StoreError::UnknownFamily { .. }))
        ));
    }

    #[test]
    fn drop_is_tolerant_and_removes_backing_table() {
        let (_d, e) = engine();
        let out = e.execute("DROP TABLE missing;").unwrap();
        assert_eq!(out.render(), "WARNING: table not found: missing\n");
        e.execute(&ddl("t", "st")).unwrap();
        e.execute("DROP TABLE t").unwrap();
        assert!(e.store().describe_table("st").is_none());
        assert!(matches!(
            e.execute("DESCRIBE t"),
            Err(SqlError::TableNotFound(_))
        ));
    }

    #[test]
    fn describe_lists_columns() {
        let (_d, e) = engine();
        e.execute(&ddl("t", "st")).unwrap();
        let Outcome::Text(text) = e.execute("describe t;").unwrap() else {
            panic!()
        };
        assert_eq!(
            text,
            "key  struct<province_state:string,country_region:string>\n\
             lat  float\nlong  float\n03_30_2020  int\n03_31_2020  int\n"
        );
    }

    #[test]
    fn catalog_survives_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db");
        {
            let e = SqlEngine::open(Arc::new(Store::open(&path).unwrap())).unwrap();
            e.execute(&ddl("t", "st")).unwrap();
            e.execute(&ddl("u", "su")).unwrap();
            e.execute("DROP TABLE u").unwrap();
            e.store().flush().unwrap();
        }
        let e = SqlEngine::open(Arc::new(Store::open(&path).unwrap())).unwrap();
        assert!(e.table("t").is_some());
        assert!(e.table("u").is_none());
        assert_eq!(e.table("t").unwrap().schema.columns.len(), 4);
    }

    #[test]
    fn corrupt_catalog_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db");
        std::fs::create_dir_all(&path).unwrap();
        std::fs::write(path.join(CATALOG_FILE), "CREATE TABLE broken (;\n\n").unwrap();
        let store = Arc::new(Store::open(&path).unwrap());
        assert!(matches!(
            SqlEngine::open(store),
            Err(SqlError::Catalog { index: 1, .. })
        ));
    }
}
