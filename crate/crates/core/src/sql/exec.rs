//! Query evaluation: scan, decode, filter, nested-loop join, project.

use std::fmt;

use crate::store::{Row, Store};

use super::ast::{ColumnRef, Literal, Predicate, Projection, Query, TableRef};
use super::catalog::Catalog;
use super::ddl::{ColumnType, MappedTable};
use super::SqlError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Int(i64),
    Float(f64),
    Str(String),
    /// The key struct: lower-cased field names with their values.
    Struct(Vec<(String, Value)>),
}

fn json_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("NULL"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => {
                let s = x.to_string();
                if x.is_finite() && !s.contains('.') {
                    write!(f, "{s}.0")
                } else {
                    f.write_str(&s)
                }
            }
            Value::Str(s) => f.write_str(s),
            Value::Struct(fields) => {
                let mut out = String::from("{");
                for (i, (name, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    json_string(name, &mut out);
                    out.push(':');
                    match v {
                        Value::Str(s) => json_string(s, &mut out),
                        Value::Null => out.push_str("null"),
                        other => out.push_str(&other.to_string()),
                    }
                }
                out.push('}');
                f.write_str(&out)
            }
        }
    }
}

impl Value {
    fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            Value::Str(s) => s.trim().parse().ok(),
            _ => None,
        }
    }

    /// SQL equality where NULL matches nothing. Strings compare exactly;
    /// a string against a number compares numerically.
    pub fn sql_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Null, _) | (_, Value::Null) => false,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Struct(a), Value::Struct(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|((_, x), (_, y))| x.sql_eq(y))
            }
            (Value::Struct(_), _) | (_, Value::Struct(_)) => false,
            (a, b) => matches!((a.as_f64(), b.as_f64()), (Some(x), Some(y)) if x == y),
        }
    }

    fn eq_literal(&self, lit: &Literal) -> bool {
        let lit = match lit {
            Literal::Str(s) => Value::Str(s.clone()),
            Literal::Int(i) => Value::Int(*i),
            Literal::Float(x) => Value::Float(*x),
        };
        self.sql_eq(&lit)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl ResultSet {
    /// Header line, then one line per row; fields separated by tabs.
    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::to_string).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Key,
    KeyField(usize),
    Column(usize),
}

#[derive(Debug, Clone, Copy)]
struct Resolved {
    table: usize,
    target: Target,
}

struct Scope<'a> {
    tables: Vec<(&'a TableRef, &'a MappedTable)>,
}

impl Scope<'_> {
    fn in_table(&self, t: usize, name: &str) -> Option<Target> {
        let schema = &self.tables[t].1.schema;
        if schema.is_key_column(name) {
            Some(Target::Key)
        } else {
            schema.column_index(name).map(Target::Column)
        }
    }

    fn key_field(&self, t: usize, key: &str, field: &str) -> Option<Target> {
        let schema = &self.tables[t].1.schema;
        if !schema.is_key_column(key) {
            return None;
        }
        schema.key_field_index(field).map(Target::KeyField)
    }

    fn label_index(&self, label: &str) -> Option<usize> {
        self.tables
            .iter()
            .position(|(r, _)| r.label().eq_ignore_ascii_case(label))
    }

    fn unique(&self, r: &ColumnRef, found: Vec<Resolved>) -> Result<Resolved, SqlError> {
        match found.len() {
            0 => Err(SqlError::UnknownColumn(r.to_string())),
            1 => Ok(found[0]),
            _ => Err(SqlError::AmbiguousColumn(r.to_string())),
        }
    }

    fn resolve(&self, r: &ColumnRef) -> Result<Resolved, SqlError> {
        let unknown = || SqlError::UnknownColumn(r.to_string());
        let all = 0..self.tables.len();
        match r.parts.as_slice() {
            [name] => {
                let found = all
                    .filter_map(|t| {
                        self.in_table(t, name)
                            .map(|target| Resolved { table: t, target })
                    })
                    .collect();
                self.unique(r, found)
            }
            [first, second] => {
                if let Some(t) = self.label_index(first) {
                    let target = self.in_table(t, second).ok_or_else(unknown)?;
                    return Ok(Resolved { table: t, target });
                }
                let found = all
                    .filter_map(|t| {
                        self.key_field(t, first, second)
                            .map(|target| Resolved { table: t, target })
                    })
                    .collect();
                self.unique(r, found)
            }
            [label, key, field] => {
                let t = self.label_index(label).ok_or_else(unknown)?;
                let target = self.key_field(t, key, field).ok_or_else(unknown)?;
                Ok(Resolved { table: t, target })
            }
            _ => Err(unknown()),
        }
    }
}

/// One store row seen through a relational schema.
#[derive(Debug)]
struct Tuple {
    key_fields: Vec<Value>,
    columns: Vec<Value>,
}

impl Tuple {
    fn get(&self, target: Target, table: &MappedTable) -> Value {
        match target {
            Target::Key => Value::Struct(
                table
                    .schema
                    .key_fields
                    .iter()
                    .map(|f| f.to_ascii_lowercase())
                    .zip(self.key_fields.iter().cloned())
                    .collect(),
            ),
            Target::KeyField(i) => self.key_fields[i].clone(),
            Target::Column(i) => self.columns[i].clone(),
        }
    }
}

fn decode(row: &Row, table: &MappedTable) -> Result<Tuple, SqlError> {
    let schema = &table.schema;
    let n = schema.key_fields.len();
    let mut key_fields: Vec<Value> = row
        .key
        .splitn(n, schema.collection_terminator)
        .map(|s| Value::Str(s.to_string()))
        .collect();
    key_fields.resize(n, Value::Null);

    let mut columns = Vec::with_capacity(schema.columns.len());
    for (i, col) in schema.columns.iter().enumerate() {
        let raw = table.mapping.coord_for(i).and_then(|c| row.cells.get(c));
        let value = match raw {
            None => Value::Null,
            Some(raw) => {
                let bad = |ty| SqlError::Decode {
                    row_key: row.key.clone(),
                    column: col.name.clone(),
                    value: raw.clone(),
                    ty,
                };
                match col.ty {
                    ColumnType::Int => Value::Int(raw.trim().parse().map_err(|_| bad("int"))?),
                    ColumnType::Float => {
                        Value::Float(raw.trim().parse().map_err(|_| bad("float"))?)
                    }
                }
            }
        };
        columns.push(value);
    }
    Ok(Tuple {
        key_fields,
        columns,
    })
}

fn matches(pred: &Predicate, value: &Value) -> bool {
    match pred {
        Predicate::Eq(_, lit) => value.eq_literal(lit),
        Predicate::In(_, list) => list.iter().any(|l| value.eq_literal(l)),
    }
}

fn pred_ref(pred: &Predicate) -> &ColumnRef {
    match pred {
        Predicate::Eq(r, _) | Predicate::In(r, _) => r,
    }
}

/// Evaluates `query` over the current contents of the store. Each table
/// is read from its own scan snapshot.
pub fn execute_query(
    query: &Query,
    catalog: &Catalog,
    store: &Store,
) -> Result<ResultSet, SqlError> {
    let mut refs = vec![&query.from];
    if let Some(j) = &query.join {
        refs.push(&j.table);
        if j.table.label().eq_ignore_ascii_case(query.from.label()) {
            return Err(SqlError::AmbiguousColumn(format!(
                "table label {} is used twice (give each table an alias)",
                j.table.label()
            )));
        }
    }
    let scope = Scope {
        tables: refs
            .iter()
            .map(|r| {
                catalog
                    .get(&r.name)
                    .map(|t| (*r, t))
                    .ok_or_else(|| SqlError::TableNotFound(r.name.clone()))
            })
            .collect::<Result<_, _>>()?,
    };

    // Resolve everything before touching data.
    let projection: Vec<(String, Resolved)> = match &query.projection {
        Projection::Star => {
            let prefixed = scope.tables.len() > 1;
            let mut out = Vec::new();
            for (t, (r, table)) in scope.tables.iter().enumerate() {
                let name = |n: &str| {
                    if prefixed {
                        format!("{}.{n}", r.label())
                    } else {
                        n.to_string()
                    }
                };
                out.push((
                    name(&table.schema.key_column),
                    Resolved {
                        table: t,
                        target: Target::Key,
                    },
                ));
                for (i, c) in table.schema.columns.iter().enumerate() {
                    out.push((
                        name(&c.name),
                        Resolved {
                            table: t,
                            target: Target::Column(i),
                        },
                    ));
                }
            }
            out
        }
        Projection::Columns(cols) => cols
            .iter()
            .map(|c| Ok((c.to_string(), scope.resolve(c)?)))
            .collect::<Result<_, SqlError>>()?,
    };
    let filters: Vec<(&Predicate, Resolved)> = query
        .filters
        .iter()
        .map(|p| Ok((p, scope.resolve(pred_ref(p))?)))
        .collect::<Result<_, SqlError>>()?;
    let join_on: Vec<(Resolved, Resolved)> = match &query.join {
        None => Vec::new(),
        Some(j) => {
            j.on.iter()
                .map(|(a, b)| Ok((scope.resolve(a)?, scope.resolve(b)?)))
                .collect::<Result<_, SqlError>>()?
        }
    };

    // Scan, decode and apply the single-table filters.
    let mut inputs: Vec<Vec<Tuple>> = Vec::new();
    for (t, (_, table)) in scope.tables.iter().enumerate() {
        let mut tuples = Vec::new();
        for row in store.scan(&table.mapping.store_table)? {
            let tuple = decode(&row, table)?;
            let keep = filters
                .iter()
                .filter(|(_, r)| r.table == t)
                .all(|(p, r)| matches(p, &tuple.get(r.target, table)));
            if keep {
                tuples.push(tuple);
            }
        }
        inputs.push(tuples);
    }

    let value =
        |combo: &[&Tuple], r: Resolved| combo[r.table].get(r.target, scope.tables[r.table].1);
    let mut rows = Vec::new();
    let mut emit = |combo: &[&Tuple]| {
        rows.push(projection.iter().map(|(_, r)| value(combo, *r)).collect());
    };
    match inputs.as_slice() {
        [left] => left.iter().for_each(|l| emit(&[l])),
        [left, right] => {
            for l in left {
                for r in right {
                    let combo = [l, r];
                    if join_on
                        .iter()
                        .all(|(a, b)| value(&combo, *a).sql_eq(&value(&combo, *b)))
                    {
                        emit(&combo);
                    }
                }
            }
        }
        _ => unreachable!("at most one join"),
    }

    Ok(ResultSet {
        columns: projection.into_iter().map(|(h, _)| h).collect(),
        rows,
    })
}
