//! Text formats: DIMACS CNF with weight comments, factor files, the JSON
//! decomposition document and the JSON run report.

mod decomp_file;
mod dimacs;
mod factor_file;
mod report;

use thiserror::Error;

use crate::formula::FormulaError;
use crate::semiring::SemiringError;

pub use decomp_file::{parse_decomp, serialize_decomp, DecompDoc, DecompKind};
pub use dimacs::{parse_dimacs, serialize_dimacs};
pub use factor_file::{parse_factor_file, serialize_factor_file};
pub use report::{emit_stats, RunReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: clause contains variable {var} in both polarities")]
    Tautology { line: usize, var: u32 },
    #[error("header declares {declared} clauses but {found} were read")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("line {line}: factor scope mentions variable {var} outside 1..={num_vars}")]
    ScopeOutOfRange { line: usize, var: i64, num_vars: usize },
    #[error("line {line}: table has {found} entries, scope needs {expected}")]
    TableLengthMismatch { line: usize, expected: usize, found: usize },
    #[error("expected a {expected} decomposition, found {found}")]
    KindMismatch { expected: DecompKind, found: DecompKind },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}
