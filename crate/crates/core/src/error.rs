use std::fmt;

use thiserror::Error;

/// One violated invariant found while validating a raw algebra description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyCarrier,
    DuplicateElement(String),
    InvalidIdentifier(String),
    DuplicateSymbol(String),
    TableSizeMismatch { symbol: String, expected: usize, found: usize },
    UnknownElement { symbol: String, element: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyCarrier => write!(f, "empty carrier"),
            Violation::DuplicateElement(e) => write!(f, "duplicate urelement `{e}`"),
            Violation::InvalidIdentifier(s) => write!(f, "invalid identifier `{s}`"),
            Violation::DuplicateSymbol(s) => write!(f, "duplicate symbol `{s}`"),
            Violation::TableSizeMismatch { symbol, expected, found } => write!(
                f,
                "table size mismatch for `{symbol}`: expected {expected}, found {found}"
            ),
            Violation::UnknownElement { symbol, element } => {
                write!(f, "unknown element `{element}` in table of `{symbol}`")
            }
        }
    }
}

/// Every invariant a candidate algebra violates, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub algebra: String,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra `{}` is invalid: ", self.algebra)?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A positioned parse or validation error in one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    Parse(ParseError),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element index {index} out of range for carrier of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("missing symbols: {}", .0.join(", "))]
    MissingSymbols(Vec<String>),
    #[error("arity mismatch for `{symbol}`: expected {expected}, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("map is not total: {0}")]
    NonTotalMap(String),
    #[error("not a subuniverse: `{symbol}` applied to ({}) gives `{output}`", .args.join(", "))]
    NotSubuniverse { symbol: String, args: Vec<String>, output: String },
    #[error("leg {leg} is not a homomorphism")]
    LegNotHomomorphism { leg: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("empty period")]
    EmptyPeriod,
    #[error("sequences over different base algebras")]
    MixedBases,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
