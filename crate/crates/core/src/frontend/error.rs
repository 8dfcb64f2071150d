use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// What went wrong while reading a theory file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownIdentifier { name: String },
    IndexArityMismatch { name: String, expected: usize, found: usize },
    GradingInconsistency { detail: String },
    IndexOutOfRange { name: String, value: usize, bound: usize },
    UnboundIndex { name: String },
    Evaluation { detail: String },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::UnknownIdentifier { name } => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::IndexArityMismatch {
                name,
                expected,
                found,
            } => write!(f, "`{name}` takes {expected} indices, found {found}"),
            ParseErrorKind::GradingInconsistency { detail } => {
                write!(f, "grading inconsistency: {detail}")
            }
            ParseErrorKind::IndexOutOfRange { name, value, bound } => {
                write!(f, "index {value} of `{name}` is out of range 0..{bound}")
            }
            ParseErrorKind::UnboundIndex { name } => write!(f, "index `{name}` is neither bound nor summed"),
            ParseErrorKind::Evaluation { detail } => write!(f, "{detail}"),
        }
    }
}

/// A parse failure with its byte offset and a one-line caret excerpt.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{kind} (byte {offset})\n{excerpt}")]
pub struct ParseError {
    #[serde(flatten)]
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub excerpt: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, source: &str, offset: usize) -> Self {
        let offset = offset.min(source.len());
        let start = source[..offset].rfind('\n').map_or(0, |i| i + 1);
        let end = source[offset..]
            .find('\n')
            .map_or(source.len(), |i| offset + i);
        let line_text = &source[start..end];
        let column = source[start..offset].chars().count();
        let line = source[..offset].matches('\n').count() + 1;
        let excerpt = format!("{line_text}\n{}^", " ".repeat(column));
        ParseError {
            kind,
            offset,
            line,
            column: column + 1,
            excerpt,
        }
    }
}
