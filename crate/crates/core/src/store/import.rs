//! Positional bulk loader in the style of HBase `ImportTsv`.

use std::fmt;
use std::fs;
use std::path::Path;

use super::{check_cell, ColumnCoord, Result, Store, StoreError};

/// Column-spec token naming the row-key field.
pub const ROW_KEY_MARKER: &str = "HBASE_ROW_KEY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImportColumn {
    RowKey,
    Cell(ColumnCoord),
}

impl fmt::Display for ImportColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImportColumn::RowKey => f.write_str(ROW_KEY_MARKER),
            ImportColumn::Cell(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportSpec {
    pub separator: char,
    columns: Vec<ImportColumn>,
    key_index: usize,
    pub skip_bad_lines: bool,
    pub skip_empty_columns: bool,
}

impl ImportSpec {
    /// Validates that exactly one column is the row key.
    pub fn new(separator: char, columns: Vec<ImportColumn>) -> Result<Self> {
        let keys: Vec<usize> = columns
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == ImportColumn::RowKey)
            .map(|(i, _)| i)
            .collect();
        let [key_index] = keys[..] else {
            return Err(StoreError::InvalidImportSpec(format!(
                "expected exactly one {ROW_KEY_MARKER} column, found {}",
                keys.len()
            )));
        };
        if matches!(separator, '\n' | '\r') {
            return Err(StoreError::InvalidImportSpec(
                "separator cannot be a line break".into(),
            ));
        }
        Ok(Self {
            separator,
            columns,
            key_index,
            skip_bad_lines: false,
            skip_empty_columns: false,
        })
    }

    /// Parses a comma-separated column list such as
    /// `HBASE_ROW_KEY,a:lt,a:lg,a:d122`.
    pub fn parse_columns(spec: &str) -> Result<Vec<ImportColumn>> {
        spec.split(',')
            .map(str::trim)
            .map(|tok| {
                if tok == ROW_KEY_MARKER {
                    Ok(ImportColumn::RowKey)
                } else {
                    tok.parse().map(ImportColumn::Cell)
                }
            })
            .collect()
    }

    pub fn with_skip_bad_lines(mut self, yes: bool) -> Self {
        self.skip_bad_lines = yes;
        self
    }

    pub fn with_skip_empty_columns(mut self, yes: bool) -> Self {
        self.skip_empty_columns = yes;
        self
    }

    pub fn columns(&self) -> &[ImportColumn] {
        &self.columns
    }

    /// The column list rendered back to its comma-separated form.
    pub fn render_columns(&self) -> String {
        let parts: Vec<String> = self.columns.iter().map(ToString::to_string).collect();
        parts.join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportReport {
    pub loaded: usize,
    pub skipped: usize,
    pub errors: Vec<LineError>,
}

type Put = (String, ColumnCoord, String);

fn parse_line(spec: &ImportSpec, line: &str) -> std::result::Result<(String, Vec<Put>), String> {
    let fields: Vec<&str> = line.split(spec.separator).collect();
    if fields.len() != spec.columns.len() {
        return Err(format!(
            "expected {} fields, found {}",
            spec.columns.len(),
            fields.len()
        ));
    }
    let key = fields[spec.key_index];
    if key.is_empty() {
        return Err("empty row key".into());
    }
    let mut puts = Vec::new();
    for (field, column) in fields.iter().zip(&spec.columns) {
        let ImportColumn::Cell(coord) = column else {
            continue;
        };
        if field.is_empty() {
            if spec.skip_empty_columns {
                continue;
            }
            return Err(format!("empty value for {coord}"));
        }
        check_cell(key, field).map_err(|e| e.to_string())?;
        puts.push((key.to_string(), coord.clone(), field.to_string()));
    }
    Ok((key.to_string(), puts))
}

impl Store {
    pub fn import_tsv(&self, table: &str, file: &Path, spec: &ImportSpec) -> Result<ImportReport> {
        let text = fs::read_to_string(file).map_err(|source| StoreError::Io {
            path: file.to_path_buf(),
            source,
        })?;
        self.import_text(table, &text, spec)
    }

    /// Loads delimited text. The whole input is validated before any cell is
    /// written, so an aborted import leaves the table untouched.
    pub fn import_text(&self, table: &str, text: &str, spec: &ImportSpec) -> Result<ImportReport> {
        {
            let state = self.read();
            let t = state.enabled(table)?;
            for column in &spec.columns {
                if let ImportColumn::Cell(coord) = column {
                    t.check_family(coord)?;
                }
            }
        }

        let mut report = ImportReport::default();
        let mut puts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            match parse_line(spec, line) {
                Ok((_, row_puts)) => {
                    report.loaded += 1;
                    puts.extend(row_puts);
                }
                Err(reason) if spec.skip_bad_lines => {
                    report.skipped += 1;
                    report.errors.push(LineError {
                        line: line_no,
                        reason,
                    });
                }
                Err(reason) => {
                    return Err(StoreError::BadLine {
                        line: line_no,
                        reason,
                    })
                }
            }
        }

        let mut state = self.write();
        let t = state.enabled_mut(table)?;
        for (key, coord, value) in puts {
            t.upsert(&key, coord, value);
        }
        Ok(report)
    }
}
