use std::fmt;

use super::ddl::MappedTable;

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    CreateTable(Box<MappedTable>),
    DropTable { name: String, if_exists: bool },
    Describe { name: String },
    Select(Query),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub projection: Projection,
    pub from: TableRef,
    pub join: Option<Join>,
    /// Conjunction of predicates; empty means no WHERE clause.
    pub filters: Vec<Predicate>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Star,
    Columns(Vec<ColumnRef>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRef {
    pub name: String,
    pub alias: Option<String>,
}

impl TableRef {
    /// The name other clauses use to reach this table.
    pub fn label(&self) -> &str {
        self.alias.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Join {
    pub table: TableRef,
    /// Equalities that must all hold.
    pub on: Vec<(ColumnRef, ColumnRef)>,
}

/// A dotted reference such as `c.03_31_2020`, `key.Country_Region` or
/// `d.key.Province_State`. Which part names a table, the key struct or a
/// struct field is settled against the tables in scope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnRef {
    pub parts: Vec<String>,
}

impl ColumnRef {
    pub fn new<I, S>(parts: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            parts: parts.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Eq(ColumnRef, Literal),
    In(ColumnRef, Vec<Literal>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Str(String),
    Int(i64),
    Float(f64),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Str(s) => write!(f, "'{}'", s.replace('\\', "\\\\").replace('\'', "\\'")),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Float(x) => write!(f, "{x:?}"),
        }
    }
}
