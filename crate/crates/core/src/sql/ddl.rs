//! Relational table definitions backed by store tables.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::store::{ColumnCoord, ImportColumn};

use super::SqlError;

pub const TABLE_NAME_PROP: &str = "hbase.table.name";
pub const COLUMNS_MAPPING_PROP: &str = "hbase.columns.mapping";
pub const OUTPUT_TABLE_PROP: &str = "hbase.mapred.output.outputtable";
pub const KEY_FACTORY_PROP: &str = "hbase.composite.key.factory";
pub const KEY_MARKER: &str = ":key";

/// Hive's default collection delimiter (`\002`).
pub const DEFAULT_COLLECTION_TERMINATOR: char = '\u{2}';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Int,
    Float,
}

impl ColumnType {
    pub fn keyword(self) -> &'static str {
        match self {
            ColumnType::Int => "int",
            ColumnType::Float => "float",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: String,
    pub ty: ColumnType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalSchema {
    pub table_name: String,
    /// Name of the struct column bound to the row key (`key` by convention).
    pub key_column: String,
    /// Struct components, all strings, in declaration order.
    pub key_fields: Vec<String>,
    /// Non-key columns in declaration order.
    pub columns: Vec<ColumnDef>,
    pub collection_terminator: char,
}

impl RelationalSchema {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn key_field_index(&self, name: &str) -> Option<usize> {
        self.key_fields
            .iter()
            .position(|f| f.eq_ignore_ascii_case(name))
    }

    pub fn is_key_column(&self, name: &str) -> bool {
        self.key_column.eq_ignore_ascii_case(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingEntry {
    Key,
    Cell(ColumnCoord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    /// `entries[0]` is the key; `entries[i]` maps `columns[i - 1]`.
    pub entries: Vec<MappingEntry>,
    pub store_table: String,
}

impl ColumnMapping {
    pub fn parse(spec: &str, store_table: &str) -> Result<Self, SqlError> {
        let entries = spec
            .split(',')
            .map(str::trim)
            .map(|tok| {
                if tok == KEY_MARKER {
                    Ok(MappingEntry::Key)
                } else {
                    tok.parse::<ColumnCoord>()
                        .map(MappingEntry::Cell)
                        .map_err(|_| SqlError::Ddl(format!("bad column mapping entry {tok:?}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            entries,
            store_table: store_table.to_string(),
        })
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e {
                MappingEntry::Key => KEY_MARKER.to_string(),
                MappingEntry::Cell(c) => c.to_string(),
            })
            .collect();
        parts.join(",")
    }

    pub fn families(&self) -> BTreeSet<String> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                MappingEntry::Cell(c) => Some(c.family().to_string()),
                MappingEntry::Key => None,
            })
            .collect()
    }

    /// The equivalent bulk-import column list (`:key` becomes the row key).
    pub fn import_columns(&self) -> Vec<ImportColumn> {
        self.entries
            .iter()
            .map(|e| match e {
                MappingEntry::Key => ImportColumn::RowKey,
                MappingEntry::Cell(c) => ImportColumn::Cell(c.clone()),
            })
            .collect()
    }

    /// Store coordinate of `columns[index]`.
    pub fn coord_for(&self, index: usize) -> Option<&ColumnCoord> {
        match self.entries.get(index + 1) {
            Some(MappingEntry::Cell(c)) => Some(c),
            _ => None,
        }
    }
}

/// A catalog entry: relational schema, its store mapping, and the DDL it
/// came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedTable {
    pub schema: RelationalSchema,
    pub mapping: ColumnMapping,
    /// `STORED BY` class, kept verbatim.
    pub storage_handler: String,
    /// SERDEPROPERTIES in declaration order, kept verbatim.
    pub properties: Vec<(String, String)>,
    pub ddl: String,
}

impl MappedTable {
    pub fn name(&self) -> &str {
        &self.schema.table_name
    }

    pub fn property(&self, key: &str) -> Option<&str> {
        self.properties
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// `DESCRIBE` output: one `name  type` line per column, key first.
    pub fn describe(&self) -> String {
        let s = &self.schema;
        let fields: Vec<String> = s
            .key_fields
            .iter()
            .map(|f| format!("{}:string", f.to_ascii_lowercase()))
            .collect();
        let mut out = format!(
            "{}  struct<{}>\n",
            s.key_column.to_ascii_lowercase(),
            fields.join(",")
        );
        for c in &s.columns {
            let _ = writeln!(out, "{}  {}", c.name.to_ascii_lowercase(), c.ty.keyword());
        }
        out
    }
}

/// Raw pieces of a CREATE TABLE statement, before validation.
#[derive(Debug, Default)]
pub(crate) struct CreateTableParts {
    pub name: String,
    pub columns: Vec<ParsedColumn>,
    pub collection_terminator: Option<char>,
    pub storage_handler: Option<String>,
    pub properties: Vec<(String, String)>,
}

#[derive(Debug)]
pub(crate) enum ParsedColumn {
    Struct { name: String, fields: Vec<String> },
    Scalar { name: String, ty: ColumnType },
}

impl ParsedColumn {
    fn name(&self) -> &str {
        match self {
            ParsedColumn::Struct { name, .. } | ParsedColumn::Scalar { name, .. } => name,
        }
    }
}

pub(crate) fn build_mapped_table(
    parts: CreateTableParts,
    ddl: &str,
) -> Result<MappedTable, SqlError> {
    let mut seen = HashSet::new();
    for c in &parts.columns {
        if !seen.insert(c.name().to_ascii_lowercase()) {
            return Err(SqlError::DuplicateColumn(c.name().to_string()));
        }
    }
    let storage_handler = parts
        .storage_handler
        .ok_or_else(|| SqlError::Unsupported("tables without STORED BY (managed tables)".into()))?;
    let prop = |key: &'static str| {
        parts
            .properties
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .ok_or(SqlError::MissingProperty(key))
    };
    let store_table = prop(TABLE_NAME_PROP)?;
    let mapping = ColumnMapping::parse(&prop(COLUMNS_MAPPING_PROP)?, &store_table)?;

    let mut columns = parts.columns.into_iter();
    let Some(ParsedColumn::Struct {
        name: key_column,
        fields: key_fields,
    }) = columns.next()
    else {
        return Err(SqlError::Ddl(
            "first column must be the struct<...> row key".into(),
        ));
    };
    let mut field_seen = HashSet::new();
    for f in &key_fields {
        if !field_seen.insert(f.to_ascii_lowercase()) {
            return Err(SqlError::DuplicateColumn(format!("{key_column}.{f}")));
        }
    }
    let columns = columns
        .map(|c| match c {
            ParsedColumn::Scalar { name, ty } => Ok(ColumnDef { name, ty }),
            ParsedColumn::Struct { name, .. } => Err(SqlError::Ddl(format!(
                "only the key column may be a struct, found {name}"
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;

    if mapping.entries.len() != columns.len() + 1 {
        return Err(SqlError::MappingMismatch {
            columns: columns.len() + 1,
            entries: mapping.entries.len(),
        });
    }
    if mapping.entries[0] != MappingEntry::Key || mapping.entries[1..].contains(&MappingEntry::Key)
    {
        return Err(SqlError::Ddl(format!(
            "{KEY_MARKER} must appear exactly once, first"
        )));
    }

    Ok(MappedTable {
        schema: RelationalSchema {
            table_name: parts.name,
            key_column,
            key_fields,
            columns,
            collection_terminator: parts
                .collection_terminator
                .unwrap_or(DEFAULT_COLLECTION_TERMINATOR),
        },
        mapping,
        storage_handler,
        properties: parts.properties,
        ddl: ddl.trim().to_string(),
    })
}

fn char_literal(c: char) -> String {
    if c.is_ascii_punctuation() {
        format!("'\\{c}'")
    } else if c.is_control() && (c as u32) < 0o400 {
        format!("'\\{:03o}'", c as u32)
    } else {
        format!("'{c}'")
    }
}

fn quote(s: &str, q: char) -> String {
    let escaped = s.replace('\\', "\\\\").replace(q, &format!("\\{q}"));
    format!("{q}{escaped}{q}")
}

/// Canonical DDL text. Non-int columns take one line each; runs of int
/// columns are packed three to a line.
pub fn render_ddl(table: &MappedTable) -> String {
    let s = &table.schema;
    let mut lines: Vec<String> = Vec::new();
    let fields: Vec<String> = s
        .key_fields
        .iter()
        .map(|f| format!("{f} : string"))
        .collect();
    lines.push(format!("{} struct<{}>", s.key_column, fields.join(",")));
    let mut ints: Vec<String> = Vec::new();
    let flush_ints = |ints: &mut Vec<String>, lines: &mut Vec<String>| {
        for chunk in ints.chunks(3) {
            lines.push(chunk.join(", "));
        }
        ints.clear();
    };
    for c in &s.columns {
        let def = format!("{} {}", c.name, c.ty.keyword());
        if c.ty == ColumnType::Int {
            ints.push(def);
        } else {
            flush_ints(&mut ints, &mut lines);
            lines.push(def);
        }
    }
    flush_ints(&mut ints, &mut lines);

    let mut out = format!(
        "CREATE TABLE {} (\n{}\n)\n",
        s.table_name,
        lines.join(",\n")
    );
    out.push_str("ROW FORMAT DELIMITED\n");
    let _ = writeln!(
        out,
        "COLLECTION ITEMS TERMINATED BY {}",
        char_literal(s.collection_terminator)
    );
    let _ = writeln!(out, "STORED BY {}", quote(&table.storage_handler, '\''));
    out.push_str("WITH SERDEPROPERTIES (\n");
    let props: Vec<String> = table
        .properties
        .iter()
        .map(|(k, v)| format!("{} = {}", quote(k, '"'), quote(v, '"')))
        .collect();
    out.push_str(&props.join(",\n"));
    out.push_str(");\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_parse_trims_line_breaks() {
        let m = ColumnMapping::parse(":key,a:lt,\na:d122 , a:d123", "t").unwrap();
        assert_eq!(m.entries.len(), 4);
        assert_eq!(m.render(), ":key,a:lt,a:d122,a:d123");
        assert_eq!(m.families(), BTreeSet::from(["a".to_string()]));
        assert!(ColumnMapping::parse(":key,a:", "t").is_err());
    }

    #[test]
    fn char_literals() {
        assert_eq!(char_literal('~'), r"'\~'");
        assert_eq!(char_literal('\u{2}'), r"'\002'");
        assert_eq!(char_literal('x'), "'x'");
    }
}
