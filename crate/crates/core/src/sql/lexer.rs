use super::SqlError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// Identifier or keyword: `[A-Za-z0-9_]+` not purely numeric, or backquoted.
    Word(String),
    /// Decimal literal text, e.g. `42`, `31.7917`.
    Number(String),
    /// Single-quoted literal with escapes resolved.
    Str(String),
    /// Double-quoted literal with escapes resolved.
    QStr(String),
    Sym(char),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

/// 1-based line and column of a byte offset.
pub(crate) fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub(crate) fn syntax_error(src: &str, offset: usize, message: impl Into<String>) -> SqlError {
    let (line, column) = line_col(src, offset);
    SqlError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

const SYMBOLS: &str = "(),.=;*<>:-+!/%";

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, SqlError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1).map(|p| p.1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
        } else if is_word_char(c) {
            let start = i;
            while i < chars.len() && is_word_char(chars[i].1) {
                i += 1;
            }
            let mut text: String = chars[start..i].iter().map(|p| p.1).collect();
            let numeric = text.bytes().all(|b| b.is_ascii_digit());
            if numeric
                && chars.get(i).map(|p| p.1) == Some('.')
                && chars.get(i + 1).is_some_and(|p| p.1.is_ascii_digit())
                && !matches!(
                    out.last(),
                    Some(Token {
                        tok: Tok::Sym('.'),
                        ..
                    })
                )
            {
                text.push('.');
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    text.push(chars[i].1);
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Number(text),
                    offset,
                });
            } else if numeric {
                out.push(Token {
                    tok: Tok::Number(text),
                    offset,
                });
            } else {
                out.push(Token {
                    tok: Tok::Word(text),
                    offset,
                });
            }
        } else if c == '`' {
            let start = i;
            i += 1;
            let mut text = String::new();
            loop {
                match chars.get(i) {
                    None => {
                        return Err(syntax_error(
                            src,
                            chars[start].0,
                            "unterminated quoted identifier",
                        ))
                    }
                    Some((_, '`')) => {
                        i += 1;
                        break;
                    }
                    Some((_, ch)) => {
                        text.push(*ch);
                        i += 1;
                    }
                }
            }
            out.push(Token {
                tok: Tok::Word(text),
                offset,
            });
        } else if c == '\'' || c == '"' {
            let (text, next) = read_quoted(src, &chars, i)?;
            i = next;
            let tok = if c == '\'' {
                Tok::Str(text)
            } else {
                Tok::QStr(text)
            };
            out.push(Token { tok, offset });
        } else if SYMBOLS.contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                offset,
            });
            i += 1;
        } else {
            return Err(syntax_error(
                src,
                offset,
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}

/// Reads a quoted literal starting at `chars[start]`. Backslash escapes
/// follow Hive: `\n`, `\t`, `\0`, three-digit octal, any other character
/// stands for itself. A doubled quote is one quote.
fn read_quoted(
    src: &str,
    chars: &[(usize, char)],
    start: usize,
) -> Result<(String, usize), SqlError> {
    let quote = chars[start].1;
    let mut i = start + 1;
    let mut text = String::new();
    loop {
        let Some(&(_, c)) = chars.get(i) else {
            return Err(syntax_error(
                src,
                chars[start].0,
                "unterminated string literal",
            ));
        };
        if c == quote {
            if chars.get(i + 1).map(|p| p.1) == Some(quote) {
                text.push(quote);
                i += 2;
                continue;
            }
            return Ok((text, i + 1));
        }
        if c == '\\' {
            let Some(&(_, e)) = chars.get(i + 1) else {
                return Err(syntax_error(
                    src,
                    chars[start].0,
                    "unterminated string literal",
                ));
            };
            let octal: String = chars[i + 1..]
                .iter()
                .take(3)
                .map(|p| p.1)
                .take_while(|d| ('0'..='7').contains(d))
                .collect();
            if octal.len() == 3 {
                let code = u32::from_str_radix(&octal, 8).unwrap_or(0);
                text.push(char::from_u32(code).unwrap_or('\0'));
                i += 4;
                continue;
            }
            text.push(match e {
                'n' => '\n',
                't' => '\t',
                'r' => '\r',
                '0' => '\0',
                other => other,
            });
            i += 2;
            continue;
        }
        text.push(c);
        i += 1;
    }
}

/// Splits a script into statements at `;` outside quotes and comments.
/// Whitespace-only pieces are dropped.
pub fn split_statements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    let mut quote: Option<char> = None;
    while let Some(c) = chars.next() {
        match quote {
            Some(q) => {
                current.push(c);
                if c == '\\' {
                    if let Some(n) = chars.next() {
                        current.push(n);
                    }
                } else if c == q {
                    quote = None;
                }
            }
            None => match c {
                '\'' | '"' | '`' => {
                    quote = Some(c);
                    current.push(c);
                }
                '-' if chars.peek() == Some(&'-') => {
                    for n in chars.by_ref() {
                        if n == '\n' {
                            current.push('\n');
                            break;
                        }
                    }
                }
                ';' => {
                    if !current.trim().is_empty() {
                        out.push(current.trim().to_string());
                    }
                    current.clear();
                }
                _ => current.push(c),
            },
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn digit_leading_identifiers() {
        assert_eq!(
            toks("c.03_31_2020"),
            vec![
                Tok::Word("c".into()),
                Tok::Sym('.'),
                Tok::Word("03_31_2020".into())
            ]
        );
        assert_eq!(
            toks("31.7917 -7"),
            vec![
                Tok::Number("31.7917".into()),
                Tok::Sym('-'),
                Tok::Number("7".into())
            ]
        );
    }

    #[test]
    fn literal_escapes() {
        assert_eq!(toks(r"'\~'"), vec![Tok::Str("~".into())]);
        assert_eq!(toks(r"'\002'"), vec![Tok::Str("\u{2}".into())]);
        assert_eq!(toks("'it''s'"), vec![Tok::Str("it's".into())]);
        assert_eq!(toks(r#""a\"b""#), vec![Tok::QStr("a\"b".into())]);
        assert_eq!(toks("`x y`"), vec![Tok::Word("x y".into())]);
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(
            toks("a -- note\nb"),
            vec![Tok::Word("a".into()), Tok::Word("b".into())]
        );
    }

    #[test]
    fn errors_carry_position() {
        let err = tokenize("SELECT *\nFROM t WHERE x = 'open").unwrap_err();
        assert_eq!(
            err.to_string(),
            "syntax error at line 2, column 18: unterminated string literal"
        );
        assert!(tokenize("a # b").is_err());
    }

    #[test]
    fn splits_outside_quotes() {
        let parts =
            split_statements("DROP TABLE t;\n\nCREATE x 'a;b' \"c;d\";\n-- done;\nDESCRIBE t ;  ");
        assert_eq!(
            parts,
            ["DROP TABLE t", "CREATE x 'a;b' \"c;d\"", "DESCRIBE t"]
        );
        assert_eq!(split_statements(r"x '\';' y; z"), [r"x '\';' y", "z"]);
        assert!(split_statements(" ; ;\n").is_empty());
    }
}
