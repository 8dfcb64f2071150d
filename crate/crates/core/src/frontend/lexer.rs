use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

/// Splits a theory document into tokens; `#` starts a line comment.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().map_err(|_| {
                ParseError::new(
                    ParseErrorKind::Syntax {
                        expected: vec!["integer literal".into()],
                        found: src[start..i].to_string(),
                    },
                    src,
                    start,
                )
            })?;
            out.push(Token { tok: Tok::Int(n), offset: start });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                offset: start,
            });
        } else if c == b'"' {
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                i += 1;
            }
            if i >= bytes.len() || bytes[i] != b'"' {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax {
                        expected: vec!["closing `\"`".into()],
                        found: "end of line".into(),
                    },
                    src,
                    i.min(src.len()),
                ));
            }
            out.push(Token {
                tok: Tok::Str(src[start + 1..i].to_string()),
                offset: start,
            });
            i += 1;
        } else if c == b'-' && bytes.get(i + 1) == Some(&b'>') {
            out.push(Token { tok: Tok::Arrow, offset: i });
            i += 2;
        } else if b"+-*/^()[]{};:,=".contains(&c) {
            out.push(Token { tok: Tok::Sym(c as char), offset: i });
            i += 1;
        } else {
            let ch = src[i..].chars().next().expect("in bounds");
            return Err(ParseError::new(
                ParseErrorKind::Syntax {
                    expected: vec!["a token".into()],
                    found: format!("`{ch}`"),
                },
                src,
                i,
            ));
        }
    }
    out.push(Token { tok: Tok::Eof, offset: src.len() });
    Ok(out)
}
