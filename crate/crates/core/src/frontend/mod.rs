//! Theory files, printing and the command-line driver.

mod ast;
pub mod cli;
mod error;
mod lexer;
mod parser;
pub mod print;

pub use error::{ParseError, ParseErrorKind};
pub use parser::parse;
pub use print::{print_model, render, render_latex, render_var};
