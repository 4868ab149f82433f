//! Embedded wide-column store.
//!
//! Tables hold sparse rows keyed by UTF-8 row keys and addressed by
//! `family:qualifier` cells. Rows iterate in byte-lexicographic key order
//! (Rust `String` ordering), cells in `(family, qualifier)` order. There is
//! one version per cell; a put overwrites.
//!
//! A [`Store`] owns a directory:
//!
//! ```text
//! <dir>/LOCK             present while a handle is open
//! <dir>/MANIFEST         name \t families \t enabled \t data-file, one table per line
//! <dir>/<table>.dat      row_key \t family \t qualifier \t value, sorted after flush
//! ```
//!
//! Table lifecycle changes (create, disable, enable, drop) are written to the
//! manifest immediately. Cell mutations are held in memory until
//! [`Store::flush`].

mod coord;
mod import;
mod persist;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{RwLock, RwLockReadGuard, RwLockWriteGuard};

use thiserror::Error;

pub use coord::ColumnCoord;
pub use import::{ImportColumn, ImportReport, ImportSpec, LineError, ROW_KEY_MARKER};

use persist::LockFile;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("store at {0} is already open (remove LOCK if no other process uses it)")]
    Locked(PathBuf),
    #[error("corrupt store file {path}, line {line}: {reason}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("table already exists: {0}")]
    TableExists(String),
    #[error("table not found: {0}")]
    TableNotFound(String),
    #[error("table is disabled: {0}")]
    TableDisabled(String),
    #[error("table must be disabled first")]
    MustDisableFirst(String),
    #[error("invalid table name: {0:?}")]
    InvalidTableName(String),
    #[error("table needs at least one column family")]
    NoFamilies,
    #[error("invalid column family name: {0:?}")]
    InvalidFamily(String),
    #[error("unknown column family {family:?} in table {table}")]
    UnknownFamily { table: String, family: String },
    #[error("invalid column coordinate: {0:?}")]
    InvalidCoord(String),
    #[error("row key must be non-empty")]
    EmptyRowKey,
    #[error("cell value must be non-empty")]
    EmptyValue,
    #[error("{0} contains a tab or line break")]
    ForbiddenChar(&'static str),
    #[error("invalid import spec: {0}")]
    InvalidImportSpec(String),
    #[error("import aborted at line {line}: {reason}")]
    BadLine { line: usize, reason: String },
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDescriptor {
    pub name: String,
    pub families: BTreeSet<String>,
    pub enabled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub key: String,
    pub cells: BTreeMap<ColumnCoord, String>,
}

type Cells = BTreeMap<ColumnCoord, String>;

#[derive(Debug)]
struct Table {
    desc: TableDescriptor,
    rows: BTreeMap<String, Cells>,
    dirty: bool,
}

impl Table {
    fn check_family(&self, coord: &ColumnCoord) -> Result<()> {
        if self.desc.families.contains(coord.family()) {
            Ok(())
        } else {
            Err(StoreError::UnknownFamily {
                table: self.desc.name.clone(),
                family: coord.family().to_string(),
            })
        }
    }

    fn upsert(&mut self, key: &str, coord: ColumnCoord, value: String) {
        self.rows
            .entry(key.to_string())
            .or_default()
            .insert(coord, value);
        self.dirty = true;
    }
}

#[derive(Debug, Default)]
struct State {
    tables: BTreeMap<String, Table>,
}

impl State {
    fn table(&self, name: &str) -> Result<&Table> {
        self.tables
            .get(name)
            .ok_or_else(|| StoreError::TableNotFound(name.to_string()))
    }

    fn table_mut(&mut self, name: &str) -> Result<&mut Table> {
        self.tables
            .get_mut(name)
            .ok_or_else(|| StoreError::TableNotFound(name.to_string()))
    }

    fn enabled(&self, name: &str) -> Result<&Table> {
        let t = self.table(name)?;
        if !t.desc.enabled {
            return Err(StoreError::TableDisabled(name.to_string()));
        }
        Ok(t)
    }

    fn enabled_mut(&mut self, name: &str) -> Result<&mut Table> {
        let t = self.table_mut(name)?;
        if !t.desc.enabled {
            return Err(StoreError::TableDisabled(name.to_string()));
        }
        Ok(t)
    }
}

/// Handle to an open store directory. `Send + Sync`; share it behind an
/// `Arc`. Reads take a shared lock, mutations an exclusive one, so every
/// operation sees a consistent snapshot.
#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    state: RwLock<State>,
    _lock: LockFile,
}

fn check_text(what: &'static str, s: &str) -> Result<()> {
    if s.contains(['\t', '\n', '\r']) {
        Err(StoreError::ForbiddenChar(what))
    } else {
        Ok(())
    }
}

fn valid_table_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn check_cell(row_key: &str, value: &str) -> Result<()> {
    if row_key.is_empty() {
        return Err(StoreError::EmptyRowKey);
    }
    if value.is_empty() {
        return Err(StoreError::EmptyValue);
    }
    check_text("row key", row_key)?;
    check_text("value", value)
}

impl Store {
    /// Opens (creating if needed) the store in `dir` and loads every table.
    pub fn open(dir: impl AsRef<Path>) -> Result<Store> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir).map_err(|source| StoreError::Io {
            path: dir.clone(),
            source,
        })?;
        let lock = LockFile::acquire(&dir)?;
        let mut state = State::default();
        for desc in persist::read_manifest(&dir)? {
            let rows = persist::read_data(&dir, &desc.name)?;
            for (key, cells) in &rows {
                for coord in cells.keys() {
                    if !desc.families.contains(coord.family()) {
                        return Err(StoreError::Corrupt {
                            path: persist::data_path(&dir, &desc.name),
                            line: 0,
                            reason: format!(
                                "row {key:?} uses undeclared family {:?}",
                                coord.family()
                            ),
                        });
                    }
                }
            }
            state.tables.insert(
                desc.name.clone(),
                Table {
                    desc,
                    rows,
                    dirty: false,
                },
            );
        }
        Ok(Store {
            dir,
            state: RwLock::new(state),
            _lock: lock,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read(&self) -> RwLockReadGuard<'_, State> {
        self.state.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, State> {
        self.state.write().unwrap_or_else(|e| e.into_inner())
    }

    fn save_manifest(&self, state: &State) -> Result<()> {
        let descs: Vec<&TableDescriptor> = state.tables.values().map(|t| &t.desc).collect();
        persist::write_manifest(&self.dir, &descs)
    }

    pub fn create_table<I, S>(&self, name: &str, families: I) -> Result<TableDescriptor>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if !valid_table_name(name) {
            return Err(StoreError::InvalidTableName(name.to_string()));
        }
        let families: BTreeSet<String> = families.into_iter().map(Into::into).collect();
        if families.is_empty() {
            return Err(StoreError::NoFamilies);
        }
        if let Some(bad) = families
            .iter()
            .find(|f| f.is_empty() || f.contains([':', ',', '\t', '\n', '\r']))
        {
            return Err(StoreError::InvalidFamily(bad.clone()));
        }
        let mut state = self.write();
        if state.tables.contains_key(name) {
            return Err(StoreError::TableExists(name.to_string()));
        }
        let desc = TableDescriptor {
            name: name.to_string(),
            families,
            enabled: true,
        };
        persist::write_data(&self.dir, name, &BTreeMap::new())?;
        state.tables.insert(
            name.to_string(),
            Table {
                desc: desc.clone(),
                rows: BTreeMap::new(),
                dirty: false,
            },
        );
        self.save_manifest(&state)?;
        Ok(desc)
    }

    /// Disabling an already disabled table succeeds.
    pub fn disable_table(&self, name: &str) -> Result<()> {
        self.set_enabled(name, false)
    }

    pub fn enable_table(&self, name: &str) -> Result<()> {
        self.set_enabled(name, true)
    }

    fn set_enabled(&self, name: &str, enabled: bool) -> Result<()> {
        let mut state = self.write();
        let table = state.table_mut(name)?;
        if table.desc.enabled == enabled {
            return Ok(());
        }
        table.desc.enabled = enabled;
        self.save_manifest(&state)
    }

    /// Removes a disabled table and its data file.
    pub fn drop_table(&self, name: &str) -> Result<()> {
        let mut state = self.write();
        if state.table(name)?.desc.enabled {
            return Err(StoreError::MustDisableFirst(name.to_string()));
        }
        state.tables.remove(name);
        self.save_manifest(&state)?;
        persist::remove_data(&self.dir, name)
    }

    pub fn describe_table(&self, name: &str) -> Option<TableDescriptor> {
        self.read().tables.get(name).map(|t| t.desc.clone())
    }

    pub fn list_tables(&self) -> Vec<TableDescriptor> {
        self.read()
            .tables
            .values()
            .map(|t| t.desc.clone())
            .collect()
    }

    pub fn put(&self, table: &str, row_key: &str, coord: &ColumnCoord, value: &str) -> Result<()> {
        check_cell(row_key, value)?;
        let mut state = self.write();
        let t = state.enabled_mut(table)?;
        t.check_family(coord)?;
        t.upsert(row_key, coord.clone(), value.to_string());
        Ok(())
    }

    /// Cells of one row, optionally restricted to a single coordinate.
    /// An absent row or cell yields an empty list.
    pub fn get(
        &self,
        table: &str,
        row_key: &str,
        coord: Option<&ColumnCoord>,
    ) -> Result<Vec<(ColumnCoord, String)>> {
        let state = self.read();
        let t = state.enabled(table)?;
        let Some(cells) = t.rows.get(row_key) else {
            return Ok(Vec::new());
        };
        Ok(match coord {
            Some(c) => cells
                .get(c)
                .map(|v| vec![(c.clone(), v.clone())])
                .unwrap_or_default(),
            None => cells.iter().map(|(c, v)| (c.clone(), v.clone())).collect(),
        })
    }

    /// Every row with at least one cell, in row-key order.
    pub fn scan(&self, table: &str) -> Result<Vec<Row>> {
        let state = self.read();
        let t = state.enabled(table)?;
        Ok(t.rows
            .iter()
            .filter(|(_, cells)| !cells.is_empty())
            .map(|(key, cells)| Row {
                key: key.clone(),
                cells: cells.clone(),
            })
            .collect())
    }

    /// Writes every modified table, sorted, and the manifest.
    pub fn flush(&self) -> Result<()> {
        let mut state = self.write();
        for table in state.tables.values_mut().filter(|t| t.dirty) {
            persist::write_data(&self.dir, &table.desc.name, &table.rows)?;
            table.dirty = false;
        }
        self.save_manifest(&state)
    }
}
