use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{Cells, ColumnCoord, StoreError, TableDescriptor};

const MANIFEST: &str = "MANIFEST";
const LOCK: &str = "LOCK";

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(super) fn data_file_name(table: &str) -> String {
    format!("{table}.dat")
}

pub(super) fn data_path(dir: &Path, table: &str) -> PathBuf {
    dir.join(data_file_name(table))
}

/// Exclusive ownership of a store directory for the lifetime of the handle.
#[derive(Debug)]
pub(super) struct LockFile {
    path: PathBuf,
}

impl LockFile {
    pub(super) fn acquire(dir: &Path) -> Result<Self, StoreError> {
        let path = dir.join(LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id()).map_err(io_err(&path))?;
                Ok(LockFile { path })
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                Err(StoreError::Locked(dir.to_path_buf()))
            }
            Err(e) => Err(io_err(&path)(e)),
        }
    }
}

impl Drop for LockFile {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), StoreError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(contents.as_bytes()).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub(super) fn read_manifest(dir: &Path) -> Result<Vec<TableDescriptor>, StoreError> {
    let path = dir.join(MANIFEST);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(io_err(&path)(e)),
    };
    let corrupt = |line: usize, reason: String| StoreError::Corrupt {
        path: path.clone(),
        line,
        reason,
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        let [name, families, enabled, data] = fields[..] else {
            return Err(corrupt(
                n,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        };
        if name.is_empty() || !seen.insert(name.to_string()) {
            return Err(corrupt(
                n,
                format!("missing or duplicate table name {name:?}"),
            ));
        }
        let families: BTreeSet<String> = families
            .split(',')
            .filter(|f| !f.is_empty())
            .map(str::to_string)
            .collect();
        if families.is_empty() {
            return Err(corrupt(n, "table has no column families".into()));
        }
        let enabled = match enabled {
            "true" => true,
            "false" => false,
            other => return Err(corrupt(n, format!("bad enabled flag {other:?}"))),
        };
        if data != data_file_name(name) {
            return Err(corrupt(n, format!("unexpected data file {data:?}")));
        }
        out.push(TableDescriptor {
            name: name.to_string(),
            families,
            enabled,
        });
    }
    Ok(out)
}

pub(super) fn write_manifest(dir: &Path, tables: &[&TableDescriptor]) -> Result<(), StoreError> {
    let mut text = String::new();
    for t in tables {
        let families: Vec<&str> = t.families.iter().map(String::as_str).collect();
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            t.name,
            families.join(","),
            t.enabled,
            data_file_name(&t.name)
        ));
    }
    write_atomic(&dir.join(MANIFEST), &text)
}

/// Loads a table's records. Later records for the same cell win, so the
/// file may also be appended to.
pub(super) fn read_data(dir: &Path, table: &str) -> Result<BTreeMap<String, Cells>, StoreError> {
    let path = data_path(dir, table);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(io_err(&path)(e)),
    };
    let mut rows: BTreeMap<String, Cells> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let corrupt = |reason: String| StoreError::Corrupt {
            path: path.clone(),
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [key, family, qualifier, value] = fields[..] else {
            return Err(corrupt(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
        };
        if key.is_empty() || value.is_empty() {
            return Err(corrupt("empty row key or value".into()));
        }
        let coord = ColumnCoord::new(family, qualifier).map_err(|e| corrupt(e.to_string()))?;
        rows.entry(key.to_string())
            .or_default()
            .insert(coord, value.to_string());
    }
    Ok(rows)
}

pub(super) fn write_data(
    dir: &Path,
    table: &str,
    rows: &BTreeMap<String, Cells>,
) -> Result<(), StoreError> {
    let mut text = String::new();
    for (key, cells) in rows {
        for (coord, value) in cells {
            text.push_str(key);
            text.push('\t');
            text.push_str(coord.family());
            text.push('\t');
            text.push_str(coord.qualifier());
            text.push('\t');
            text.push_str(value);
            text.push('\n');
        }
    }
    write_atomic(&data_path(dir, table), &text)
}

pub(super) fn remove_data(dir: &Path, table: &str) -> Result<(), StoreError> {
    let path = data_path(dir, table);
    match fs::remove_file(&path) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(io_err(&path)(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupt_manifest_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(MANIFEST), "t\ta\tmaybe\tt.dat\n").unwrap();
        let err = read_manifest(dir.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("MANIFEST") && msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn corrupt_data_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(data_path(dir.path(), "t"), "k\ta\tq\n").unwrap();
        assert!(matches!(
            read_data(dir.path(), "t"),
            Err(StoreError::Corrupt { line: 1, .. })
        ));
    }

    #[test]
    fn appended_records_override() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(data_path(dir.path(), "t"), "k\ta\tq\t1\nk\ta\tq\t2\n").unwrap();
        let rows = read_data(dir.path(), "t").unwrap();
        assert_eq!(rows["k"].values().next().unwrap(), "2");
    }

    #[test]
    fn data_is_written_sorted() {
        let dir = tempfile::tempdir().unwrap();
        let mut rows = BTreeMap::new();
        for (k, q) in [("~b", "x"), ("A~a", "z"), ("A~a", "y")] {
            rows.entry(k.to_string())
                .or_insert_with(Cells::new)
                .insert(ColumnCoord::new("a", q).unwrap(), "1".to_string());
        }
        write_data(dir.path(), "t", &rows).unwrap();
        let text = fs::read_to_string(data_path(dir.path(), "t")).unwrap();
        assert_eq!(text, "A~a\ta\ty\t1\nA~a\ta\tz\t1\n~b\ta\tx\t1\n");
    }
}
