//! Text formats: `.bnet` networks, `.prob` MAP problems, and CSV reports.
//!
//! Every parser is total: any input yields a value or a [`ParseError`]
//! carrying a 1-based line and column.

mod lexer;
mod network;
mod problem;
mod report;

use std::fmt;

pub use network::{parse_network, serialize_network};
pub use problem::{parse_problem, serialize_problem};
pub use report::{read_report, write_report, ReportRow, REPORT_COLUMNS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn at(tok: &lexer::Spanned, message: impl Into<String>) -> Self {
        Self::new(tok.line, tok.column, message)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}
