use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use super::ddl::MappedTable;
use super::lexer::split_statements;
use super::parser::parse_ddl;
use super::SqlError;

pub const CATALOG_FILE: &str = "CATALOG";

/// Mapped tables by case-folded name. On disk each entry is its DDL text
/// followed by `;` and a blank line, in name order.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    tables: BTreeMap<String, MappedTable>,
}

impl Catalog {
    pub fn load(dir: &Path) -> Result<Self, SqlError> {
        let path = dir.join(CATALOG_FILE);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(source) => return Err(SqlError::Io { path, source }),
        };
        let mut catalog = Self::default();
        for (i, stmt) in split_statements(&text).iter().enumerate() {
            let table = parse_ddl(stmt).map_err(|e| SqlError::Catalog {
                path: path.clone(),
                index: i + 1,
                source: Box::new(e),
            })?;
            catalog.insert(table);
        }
        Ok(catalog)
    }

    pub fn save(&self, dir: &Path) -> Result<(), SqlError> {
        let mut text = String::new();
        for t in self.tables.values() {
            text.push_str(t.ddl.trim_end().trim_end_matches(';'));
            text.push_str(";\n\n");
        }
        let path = dir.join(CATALOG_FILE);
        let tmp = dir.join(format!("{CATALOG_FILE}.tmp"));
        let io = |source| SqlError::Io {
            path: path.clone(),
            source,
        };
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(text.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        std::fs::rename(&tmp, &path).map_err(io)
    }

    pub fn get(&self, name: &str) -> Option<&MappedTable> {
        self.tables.get(&name.to_ascii_lowercase())
    }

    pub fn insert(&mut self, table: MappedTable) {
        self.tables.insert(table.name().to_ascii_lowercase(), table);
    }

    pub fn remove(&mut self, name: &str) -> Option<MappedTable> {
        self.tables.remove(&name.to_ascii_lowercase())
    }

    pub fn tables(&self) -> impl Iterator<Item = &MappedTable> {
        self.tables.values()
    }
}
