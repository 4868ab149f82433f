//! HBase-shell command subset: `create`, `put`, `get`, `scan`, `disable`,
//! `drop`, `exit`. Arguments are single-quoted literals separated by commas;
//! `''` inside a literal stands for one quote.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::store::{ColumnCoord, Store, StoreError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Create,
    Put,
    Get,
    Scan,
    Disable,
    Drop,
    Exit,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Create => "create",
            Verb::Put => "put",
            Verb::Get => "get",
            Verb::Scan => "scan",
            Verb::Disable => "disable",
            Verb::Drop => "drop",
            Verb::Exit => "exit",
        }
    }

    /// Accepted argument counts, inclusive.
    fn arity(self) -> (usize, usize) {
        match self {
            Verb::Create => (2, usize::MAX),
            Verb::Put => (4, 4),
            Verb::Get => (2, 3),
            Verb::Scan | Verb::Disable | Verb::Drop => (1, 1),
            Verb::Exit => (0, 0),
        }
    }
}

impl FromStr for Verb {
    type Err = ShellError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "create" => Verb::Create,
            "put" => Verb::Put,
            "get" => Verb::Get,
            "scan" => Verb::Scan,
            "disable" => Verb::Disable,
            "drop" => Verb::Drop,
            "exit" => Verb::Exit,
            other => return Err(ShellError::UnknownVerb(other.to_string())),
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShellError {
    #[error("unknown command: {0:?}")]
    UnknownVerb(String),
    #[error("unbalanced quote starting at column {0}")]
    UnbalancedQuote(usize),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("{verb} takes {expected} argument(s), got {found}")]
    Arity {
        verb: &'static str,
        expected: String,
        found: usize,
    },
    #[error("empty command")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellCommand {
    pub verb: Verb,
    pub args: Vec<String>,
}

impl fmt::Display for ShellCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verb.as_str())?;
        for (i, arg) in self.args.iter().enumerate() {
            f.write_str(if i == 0 { " '" } else { ", '" })?;
            f.write_str(&arg.replace('\'', "''"))?;
            f.write_str("'")?;
        }
        Ok(())
    }
}

pub fn parse_command(line: &str) -> Result<ShellCommand, ShellError> {
    let line = line.trim();
    if line.is_empty() {
        return Err(ShellError::Empty);
    }
    let verb_end = line
        .find(|c: char| !c.is_ascii_alphabetic())
        .unwrap_or(line.len());
    if verb_end == 0 {
        return Err(ShellError::Syntax {
            column: 1,
            message: "expected a command name".into(),
        });
    }
    let verb: Verb = line[..verb_end].parse()?;

    let mut args = Vec::new();
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut i = chars.partition_point(|(b, _)| *b < verb_end);
    let column = |i: usize| chars.get(i).map_or(line.chars().count() + 1, |_| i + 1);
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].1.is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    while i < chars.len() {
        if !args.is_empty() {
            if chars[i].1 != ',' {
                return Err(ShellError::Syntax {
                    column: column(i),
                    message: "expected ',' between arguments".into(),
                });
            }
            i += 1;
            skip_ws(&mut i);
        }
        if i >= chars.len() || chars[i].1 != '\'' {
            return Err(ShellError::Syntax {
                column: column(i),
                message: "expected a single-quoted argument".into(),
            });
        }
        let start = i;
        i += 1;
        let mut arg = String::new();
        loop {
            match chars.get(i) {
                None => return Err(ShellError::UnbalancedQuote(start + 1)),
                Some((_, '\'')) if chars.get(i + 1).map(|c| c.1) == Some('\'') => {
                    arg.push('\'');
                    i += 2;
                }
                Some((_, '\'')) => {
                    i += 1;
                    break;
                }
                Some((_, c)) => {
                    arg.push(*c);
                    i += 1;
                }
            }
        }
        args.push(arg);
        skip_ws(&mut i);
    }

    let (lo, hi) = verb.arity();
    if args.len() < lo || args.len() > hi {
        let expected = match (lo, hi) {
            (lo, usize::MAX) => format!("at least {lo}"),
            (lo, hi) if lo == hi => lo.to_string(),
            (lo, hi) => format!("{lo} or {hi}"),
        };
        return Err(ShellError::Arity {
            verb: verb.as_str(),
            expected,
            found: args.len(),
        });
    }
    Ok(ShellCommand { verb, args })
}

/// Rendered result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub failed: bool,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self {
            text,
            failed: false,
        }
    }

    fn error(message: impl fmt::Display) -> Self {
        Self {
            text: format!("ERROR: {message}\n"),
            failed: true,
        }
    }
}

fn rows_footer(n: usize) -> String {
    format!("{n} row(s)\n")
}

/// Runs one command against the store. Failures are rendered, never returned.
pub fn execute_command(cmd: &ShellCommand, store: &Store) -> CommandOutput {
    match run(cmd, store) {
        Ok(text) => CommandOutput::ok(text),
        Err(e) => CommandOutput::error(e),
    }
}

fn run(cmd: &ShellCommand, store: &Store) -> Result<String, StoreError> {
    let a = &cmd.args;
    match cmd.verb {
        Verb::Create => {
            store.create_table(&a[0], a[1..].iter().cloned())?;
            Ok(rows_footer(0))
        }
        Verb::Put => {
            let coord: ColumnCoord = a[2].parse()?;
            store.put(&a[0], &a[1], &coord, &a[3])?;
            Ok(rows_footer(0))
        }
        Verb::Get => {
            let coord = a.get(2).map(|c| c.parse::<ColumnCoord>()).transpose()?;
            let cells = store.get(&a[0], &a[1], coord.as_ref())?;
            let mut out = String::new();
            for (coord, value) in &cells {
                out.push_str(&format!("column={coord}, value={value}\n"));
            }
            out.push_str(&rows_footer(usize::from(!cells.is_empty())));
            Ok(out)
        }
        Verb::Scan => {
            let rows = store.scan(&a[0])?;
            let mut out = String::new();
            for row in &rows {
                for (coord, value) in &row.cells {
                    out.push_str(&format!("{}  column={coord}, value={value}\n", row.key));
                }
            }
            out.push_str(&rows_footer(rows.len()));
            Ok(out)
        }
        Verb::Disable => {
            store.disable_table(&a[0])?;
            Ok(rows_footer(0))
        }
        Verb::Drop => {
            store.drop_table(&a[0])?;
            Ok(rows_footer(0))
        }
        Verb::Exit => Ok(String::new()),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReplSummary {
    pub commands: usize,
    pub errors: usize,
}

/// Reads commands line by line until `exit` or end of input. Blank lines and
/// lines starting with `#` are ignored.
pub fn run_repl<R: BufRead, W: Write + ?Sized>(
    input: R,
    out: &mut W,
    store: &Store,
    prompt: Option<&str>,
) -> io::Result<ReplSummary> {
    let mut summary = ReplSummary::default();
    let show_prompt = |out: &mut W| -> io::Result<()> {
        if let Some(p) = prompt {
            out.write_all(p.as_bytes())?;
            out.flush()?;
        }
        Ok(())
    };
    show_prompt(out)?;
    for line in input.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            show_prompt(out)?;
            continue;
        }
        summary.commands += 1;
        let output = match parse_command(trimmed) {
            Ok(cmd) if cmd.verb == Verb::Exit => break,
            Ok(cmd) => execute_command(&cmd, store),
            Err(e) => CommandOutput::error(e),
        };
        if output.failed {
            summary.errors += 1;
        }
        out.write_all(output.text.as_bytes())?;
        show_prompt(out)?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_listing_lines() {
        let cmd = parse_command("get 'confirmed_covid19_cases', '~Morocco', 'a:d331'").unwrap();
        assert_eq!(cmd.verb, Verb::Get);
        assert_eq!(cmd.args, ["confirmed_covid19_cases", "~Morocco", "a:d331"]);
        let cmd = parse_command("scan 'confirmed_covid19_cases'").unwrap();
        assert_eq!((cmd.verb, cmd.args.len()), (Verb::Scan, 1));
        let cmd = parse_command("get 'deaths_covid19_cases', 'British Columbia~Canada', 'a:d331'")
            .unwrap();
        assert_eq!(cmd.args[1], "British Columbia~Canada");
    }

    #[test]
    fn arity_and_syntax_errors() {
        assert!(matches!(
            parse_command("get 'x'"),
            Err(ShellError::Arity { verb: "get", .. })
        ));
        assert!(matches!(
            parse_command("scan"),
            Err(ShellError::Arity { .. })
        ));
        assert!(matches!(
            parse_command("exit 'x'"),
            Err(ShellError::Arity { .. })
        ));
        assert!(matches!(
            parse_command("GET 'x', 'y'"),
            Err(ShellError::UnknownVerb(_))
        ));
        assert!(matches!(
            parse_command("list"),
            Err(ShellError::UnknownVerb(_))
        ));
        assert!(matches!(
            parse_command("scan 'x"),
            Err(ShellError::UnbalancedQuote(6))
        ));
        assert!(matches!(
            parse_command("get 'x' 'y'"),
            Err(ShellError::Syntax { .. })
        ));
        assert!(matches!(
            parse_command("get 'x', y"),
            Err(ShellError::Syntax { .. })
        ));
        assert!(matches!(
            parse_command("get 'x',"),
            Err(ShellError::Syntax { .. })
        ));
        assert!(matches!(parse_command("   "), Err(ShellError::Empty)));
    }

    #[test]
    fn doubled_quote_is_literal() {
        let cmd = parse_command("put 't', '~Cote d''Ivoire', 'a:lt', '7.54'").unwrap();
        assert_eq!(cmd.args[1], "~Cote d'Ivoire");
        assert_eq!(
            cmd.to_string(),
            "put 't', '~Cote d''Ivoire', 'a:lt', '7.54'"
        );
    }

    fn store() -> (tempfile::TempDir, Store) {
        let dir = tempfile::tempdir().unwrap();
        let s = Store::open(dir.path()).unwrap();
        (dir, s)
    }

    fn exec(store: &Store, line: &str) -> CommandOutput {
        execute_command(&parse_command(line).unwrap(), store)
    }

    #[test]
    fn renders_get_and_scan() {
        let (_d, s) = store();
        assert!(!exec(&s, "create 't', 'a'").failed);
        exec(&s, "put 't', '~Morocco', 'a:d331', '1336'");
        exec(&s, "put 't', '~Morocco', 'a:lt', '31.7917'");
        exec(&s, "put 't', 'British Columbia~Canada', 'a:lt', '49.2827'");
        assert_eq!(
            exec(&s, "get 't', '~Morocco', 'a:d331'").text,
            "column=a:d331, value=1336\n1 row(s)\n"
        );
        assert_eq!(exec(&s, "get 't', '~Nowhere', 'a:d331'").text, "0 row(s)\n");
        assert_eq!(
            exec(&s, "scan 't'").text,
            "British Columbia~Canada  column=a:lt, value=49.2827\n\
             ~Morocco  column=a:d331, value=1336\n\
             ~Morocco  column=a:lt, value=31.7917\n\
             2 row(s)\n"
        );
    }

    #[test]
    fn errors_are_rendered() {
        let (_d, s) = store();
        exec(&s, "create 't', 'a'");
        let out = exec(&s, "drop 't'");
        assert!(out.failed);
        assert_eq!(out.text, "ERROR: table must be disabled first\n");
        assert!(exec(&s, "get 't', 'k', 'nocolon'").failed);
        assert!(!exec(&s, "disable 't'").failed);
        assert!(!exec(&s, "drop 't'").failed);
        assert_eq!(exec(&s, "scan 't'").text, "ERROR: table not found: t\n");
    }

    #[test]
    fn repl_survives_errors_and_stops_at_exit() {
        let (_d, s) = store();
        let script =
            "create 't', 'a'\n\n# comment\nbogus\nput 't', 'k', 'a:x', '1'\nexit\nscan 't'\n";
        let mut out = Vec::new();
        let summary = run_repl(script.as_bytes(), &mut out, &s, None).unwrap();
        assert_eq!(
            summary,
            ReplSummary {
                commands: 4,
                errors: 1
            }
        );
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("ERROR: unknown command"));
        assert!(!text.contains("column=a:x"));
    }

    fn arg() -> impl Strategy<Value = String> {
        "[a-zA-Z0-9_~:' ,.-]{0,10}"
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(args in proptest::collection::vec(arg(), 2..=3)) {
            let cmd = ShellCommand { verb: Verb::Get, args };
            prop_assert_eq!(parse_command(&cmd.to_string()).unwrap(), cmd);
        }

        #[test]
        fn put_roundtrip(args in proptest::collection::vec(arg(), 4)) {
            let cmd = ShellCommand { verb: Verb::Put, args };
            prop_assert_eq!(parse_command(&cmd.to_string()).unwrap(), cmd);
        }
    }
}
