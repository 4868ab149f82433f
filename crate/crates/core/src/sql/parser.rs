//! Recursive-descent parser for the supported statements:
//!
//! ```text
//! CREATE [EXTERNAL] TABLE name ( key struct<f : string, ...>, col type, ... )
//!     [ROW FORMAT DELIMITED [... TERMINATED BY 'c']...]
//!     STORED BY 'class' [WITH SERDEPROPERTIES ( "k" = "v", ... )]
//! DROP TABLE [IF EXISTS] name
//! DESCRIBE name
//! SELECT (* | ref {, ref}) FROM name [alias]
//!     [JOIN name [alias] ON ref = ref {AND ref = ref}]
//!     [WHERE pred {AND pred}]
//! pred := ref = literal | ref IN ( literal {, literal} )
//! ```
//!
//! Keywords are case-insensitive. Identifiers may start with a digit.

use super::ast::{ColumnRef, Join, Literal, Predicate, Projection, Query, Statement, TableRef};
use super::ddl::{build_mapped_table, ColumnType, CreateTableParts, MappedTable, ParsedColumn};
use super::lexer::{syntax_error, tokenize, Tok, Token};
use super::SqlError;

const RESERVED: &[&str] = &[
    "select",
    "from",
    "join",
    "inner",
    "left",
    "right",
    "full",
    "outer",
    "cross",
    "on",
    "where",
    "and",
    "or",
    "not",
    "in",
    "group",
    "order",
    "by",
    "limit",
    "having",
    "union",
    "sort",
    "cluster",
    "distribute",
    "as",
    "lateral",
];

/// Clauses recognized only to be rejected with a clear message.
const TRAILING_UNSUPPORTED: &[(&str, &str)] = &[
    ("group", "GROUP BY"),
    ("order", "ORDER BY"),
    ("sort", "SORT BY"),
    ("cluster", "CLUSTER BY"),
    ("distribute", "DISTRIBUTE BY"),
    ("limit", "LIMIT"),
    ("having", "HAVING"),
    ("union", "UNION"),
    ("or", "OR"),
    ("lateral", "LATERAL VIEW"),
];

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, SqlError> {
        Ok(Self {
            src,
            tokens: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + ahead).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.src.len(), |t| t.offset)
    }

    fn error(&self, message: impl Into<String>) -> SqlError {
        syntax_error(self.src, self.offset(), message)
    }

    fn describe_current(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Word(w)) => format!("{w:?}"),
            Some(Tok::Number(n)) => n.clone(),
            Some(Tok::Str(s)) => format!("'{s}'"),
            Some(Tok::QStr(s)) => format!("\"{s}\""),
            Some(Tok::Sym(c)) => format!("'{c}'"),
        }
    }

    fn expected(&self, what: &str) -> SqlError {
        self.error(format!(
            "expected {what}, found {}",
            self.describe_current()
        ))
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SqlError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.expected(&kw.to_ascii_uppercase()))
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.at_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), SqlError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.expected(&format!("'{c}'")))
        }
    }

    /// Any word, including digit-leading ones, or a bare number.
    fn ident(&mut self, what: &str) -> Result<String, SqlError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            Some(Tok::Number(n)) if !n.contains('.') => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn table_name(&mut self) -> Result<String, SqlError> {
        let name = self.ident("a table name")?;
        if self.at_sym('.') {
            return Err(SqlError::Unsupported(
                "database-qualified table names".into(),
            ));
        }
        Ok(name)
    }

    fn string_lit(&mut self, what: &str) -> Result<String, SqlError> {
        match self.peek() {
            Some(Tok::Str(s) | Tok::QStr(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.expected(what)),
        }
    }

    fn finish(&mut self) -> Result<(), SqlError> {
        self.eat_sym(';');
        if self.peek().is_some() {
            return Err(self.expected("end of statement"));
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<Statement, SqlError> {
        let stmt = match self.peek() {
            Some(Tok::Word(w)) => match w.to_ascii_lowercase().as_str() {
                "select" => Statement::Select(self.select()?),
                "create" => Statement::CreateTable(Box::new(self.create_table()?)),
                "drop" => {
                    self.pos += 1;
                    self.expect_keyword("table")?;
                    let if_exists = if self.eat_keyword("if") {
                        self.expect_keyword("exists")?;
                        true
                    } else {
                        false
                    };
                    Statement::DropTable {
                        name: self.table_name()?,
                        if_exists,
                    }
                }
                "describe" | "desc" => {
                    self.pos += 1;
                    if self.at_keyword("extended") || self.at_keyword("formatted") {
                        return Err(SqlError::Unsupported(format!(
                            "DESCRIBE {}",
                            self.describe_current()
                                .trim_matches('"')
                                .to_ascii_uppercase()
                        )));
                    }
                    Statement::Describe {
                        name: self.table_name()?,
                    }
                }
                other => {
                    return Err(SqlError::Unsupported(format!(
                        "{} statements",
                        other.to_ascii_uppercase()
                    )))
                }
            },
            _ => return Err(self.expected("a statement")),
        };
        self.finish()?;
        Ok(stmt)
    }

    // ---- CREATE TABLE ----

    fn create_table(&mut self) -> Result<MappedTable, SqlError> {
        self.expect_keyword("create")?;
        self.eat_keyword("external");
        self.expect_keyword("table")?;
        let mut parts = CreateTableParts {
            name: self.table_name()?,
            ..Default::default()
        };
        self.expect_sym('(')?;
        loop {
            parts.columns.push(self.column_def()?);
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(')')?;

        while self.peek().is_some() && !self.at_sym(';') {
            if self.eat_keyword("row") {
                self.expect_keyword("format")?;
                if self.at_keyword("serde") {
                    return Err(SqlError::Unsupported("ROW FORMAT SERDE".into()));
                }
                self.expect_keyword("delimited")?;
                self.delimiters(&mut parts)?;
            } else if self.eat_keyword("stored") {
                self.expect_keyword("by")?;
                parts.storage_handler = Some(self.string_lit("a storage handler class")?);
            } else if self.eat_keyword("with") {
                self.expect_keyword("serdeproperties")?;
                parts.properties.extend(self.property_list()?);
            } else if self.eat_keyword("tblproperties") {
                self.property_list()?;
            } else {
                return Err(self.expected("ROW FORMAT, STORED BY or WITH SERDEPROPERTIES"));
            }
        }
        let end = self.offset();
        build_mapped_table(parts, &self.src[..end])
    }

    fn column_def(&mut self) -> Result<ParsedColumn, SqlError> {
        let name = self.ident("a column name")?;
        let ty = self.ident("a column type")?;
        if ty.eq_ignore_ascii_case("struct") {
            self.expect_sym('<')?;
            let mut fields = Vec::new();
            loop {
                let field = self.ident("a struct field name")?;
                self.expect_sym(':')?;
                let fty = self.ident("a struct field type")?;
                if !fty.eq_ignore_ascii_case("string") {
                    return Err(SqlError::UnknownType(format!(
                        "{fty} (key struct fields must be string)"
                    )));
                }
                fields.push(field);
                if !self.eat_sym(',') {
                    break;
                }
            }
            self.expect_sym('>')?;
            return Ok(ParsedColumn::Struct { name, fields });
        }
        let ty = match ty.to_ascii_lowercase().as_str() {
            "int" => ColumnType::Int,
            "float" => ColumnType::Float,
            _ => return Err(SqlError::UnknownType(ty)),
        };
        Ok(ParsedColumn::Scalar { name, ty })
    }

    fn delimiters(&mut self, parts: &mut CreateTableParts) -> Result<(), SqlError> {
        loop {
            let collection = if self.eat_keyword("collection") {
                self.expect_keyword("items")?;
                true
            } else if self.eat_keyword("fields") || self.eat_keyword("lines") {
                false
            } else if self.eat_keyword("map") {
                self.expect_keyword("keys")?;
                false
            } else {
                return Ok(());
            };
            self.expect_keyword("terminated")?;
            self.expect_keyword("by")?;
            let lit = self.string_lit("a delimiter literal")?;
            let mut chars = lit.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(SqlError::Ddl(format!(
                    "delimiter must be one character, got {lit:?}"
                )));
            };
            if collection {
                parts.collection_terminator = Some(c);
            }
        }
    }

    fn property_list(&mut self) -> Result<Vec<(String, String)>, SqlError> {
        self.expect_sym('(')?;
        let mut props = Vec::new();
        if self.eat_sym(')') {
            return Ok(props);
        }
        loop {
            let key = self.string_lit("a property name")?;
            self.expect_sym('=')?;
            let value = self.string_lit("a property value")?;
            props.push((key, value));
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(')')?;
        Ok(props)
    }

    // ---- SELECT ----

    fn select(&mut self) -> Result<Query, SqlError> {
        self.expect_keyword("select")?;
        if self.at_keyword("distinct") {
            return Err(SqlError::Unsupported("DISTINCT".into()));
        }
        self.eat_keyword("all");
        let projection = if self.eat_sym('*') {
            if self.at_sym(',') {
                return Err(self.error("'*' must be the only projection"));
            }
            Projection::Star
        } else {
            let mut refs = vec![self.column_ref()?];
            while self.eat_sym(',') {
                if self.at_sym('*') {
                    return Err(self.error("'*' must be the only projection"));
                }
                refs.push(self.column_ref()?);
            }
            if self.at_keyword("as") || matches!(self.peek(), Some(Tok::Word(w)) if !is_reserved(w))
            {
                return Err(SqlError::Unsupported("column aliases".into()));
            }
            Projection::Columns(refs)
        };

        self.expect_keyword("from")?;
        if self.at_sym('(') {
            return Err(SqlError::Unsupported("subqueries".into()));
        }
        let from = self.table_ref()?;

        let mut join = None;
        loop {
            for kw in ["left", "right", "full", "cross", "outer"] {
                if self.at_keyword(kw) {
                    return Err(SqlError::Unsupported(format!(
                        "{} JOIN",
                        kw.to_ascii_uppercase()
                    )));
                }
            }
            if self.at_sym(',') {
                return Err(SqlError::Unsupported("comma joins".into()));
            }
            let inner = self.eat_keyword("inner");
            if !self.eat_keyword("join") {
                if inner {
                    return Err(self.expected("JOIN"));
                }
                break;
            }
            if join.is_some() {
                return Err(SqlError::Unsupported("more than one JOIN".into()));
            }
            let table = self.table_ref()?;
            self.expect_keyword("on")?;
            let mut on = vec![self.join_eq()?];
            while self.eat_keyword("and") {
                on.push(self.join_eq()?);
            }
            join = Some(Join { table, on });
        }

        let mut filters = Vec::new();
        if self.eat_keyword("where") {
            filters.push(self.predicate()?);
            while self.eat_keyword("and") {
                filters.push(self.predicate()?);
            }
        }

        if let Some(Tok::Word(w)) = self.peek() {
            if let Some((_, clause)) = TRAILING_UNSUPPORTED
                .iter()
                .find(|(kw, _)| w.eq_ignore_ascii_case(kw))
            {
                return Err(SqlError::Unsupported((*clause).to_string()));
            }
        }
        Ok(Query {
            projection,
            from,
            join,
            filters,
        })
    }

    fn table_ref(&mut self) -> Result<TableRef, SqlError> {
        let name = self.table_name()?;
        let alias = if self.eat_keyword("as") {
            Some(self.ident("a table alias")?)
        } else {
            match self.peek() {
                Some(Tok::Word(w)) if !is_reserved(w) => {
                    let w = w.clone();
                    self.pos += 1;
                    Some(w)
                }
                _ => None,
            }
        };
        Ok(TableRef { name, alias })
    }

    fn column_ref(&mut self) -> Result<ColumnRef, SqlError> {
        if let (Some(Tok::Word(w)), Some(Tok::Sym('('))) = (self.peek(), self.peek_at(1)) {
            return Err(SqlError::Unsupported(format!(
                "function calls ({})",
                w.to_ascii_uppercase()
            )));
        }
        if matches!(self.peek(), Some(Tok::Word(w)) if is_reserved(w)) {
            return Err(self.expected("a column reference"));
        }
        let mut parts = vec![self.ident("a column reference")?];
        while self.eat_sym('.') {
            parts.push(self.ident("a column name after '.'")?);
        }
        if parts.len() > 3 {
            return Err(self.error(format!("too many '.' parts in {}", parts.join("."))));
        }
        Ok(ColumnRef { parts })
    }

    fn comparison(&mut self) -> Result<(), SqlError> {
        if self.eat_sym('=') {
            return Ok(());
        }
        match self.peek() {
            Some(Tok::Sym(c @ ('<' | '>' | '!'))) => {
                Err(SqlError::Unsupported(format!("comparison operator {c}")))
            }
            Some(Tok::Word(w)) if w.eq_ignore_ascii_case("like") => {
                Err(SqlError::Unsupported("LIKE".into()))
            }
            _ => Err(self.expected("'='")),
        }
    }

    fn join_eq(&mut self) -> Result<(ColumnRef, ColumnRef), SqlError> {
        let left = self.column_ref()?;
        self.comparison()?;
        if !matches!(self.peek(), Some(Tok::Word(_))) {
            return Err(self.expected("a column reference (join conditions compare two columns)"));
        }
        let right = self.column_ref()?;
        if self.at_keyword("or") {
            return Err(SqlError::Unsupported("OR".into()));
        }
        Ok((left, right))
    }

    fn predicate(&mut self) -> Result<Predicate, SqlError> {
        let column = self.column_ref()?;
        if self.at_keyword("not") {
            return Err(SqlError::Unsupported("NOT".into()));
        }
        if self.eat_keyword("in") {
            self.expect_sym('(')?;
            if self.at_keyword("select") {
                return Err(SqlError::Unsupported("subqueries".into()));
            }
            let mut list = vec![self.literal()?];
            while self.eat_sym(',') {
                list.push(self.literal()?);
            }
            self.expect_sym(')')?;
            return Ok(Predicate::In(column, list));
        }
        if self.at_keyword("is") {
            return Err(SqlError::Unsupported("IS [NOT] NULL".into()));
        }
        self.comparison()?;
        if matches!(self.peek(), Some(Tok::Word(_))) {
            return Err(SqlError::Unsupported(
                "column-to-column comparison in WHERE".into(),
            ));
        }
        Ok(Predicate::Eq(column, self.literal()?))
    }

    fn literal(&mut self) -> Result<Literal, SqlError> {
        let negative = self.eat_sym('-');
        let lit = match self.peek() {
            Some(Tok::Str(s)) if !negative => Literal::Str(s.clone()),
            Some(Tok::Number(n)) => {
                let text = if negative { format!("-{n}") } else { n.clone() };
                if n.contains('.') {
                    Literal::Float(text.parse().map_err(|_| self.error("bad number"))?)
                } else {
                    Literal::Int(
                        text.parse()
                            .map_err(|_| self.error("integer literal out of range"))?,
                    )
                }
            }
            _ => return Err(self.expected("a literal")),
        };
        self.pos += 1;
        Ok(lit)
    }
}

fn is_reserved(word: &str) -> bool {
    RESERVED.iter().any(|k| word.eq_ignore_ascii_case(k))
}

/// Parses exactly one statement (a trailing `;` is allowed).
pub fn parse_statement(sql: &str) -> Result<Statement, SqlError> {
    Parser::new(sql)?.statement()
}

pub fn parse_query(sql: &str) -> Result<Query, SqlError> {
    match parse_statement(sql)? {
        Statement::Select(q) => Ok(q),
        _ => Err(SqlError::Unsupported("expected a SELECT statement".into())),
    }
}

pub fn parse_ddl(sql: &str) -> Result<MappedTable, SqlError> {
    let mut p = Parser::new(sql)?;
    let table = p.create_table()?;
    p.finish()?;
    Ok(table)
}
