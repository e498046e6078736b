//! Error types. Hand-rolled so the crate stays `no_std`.

use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// A math delimiter without its partner; the offset points at the
    /// delimiter that could not be matched.
    UnbalancedDelimiter { offset: usize },
    /// Input bytes are not UTF-8; `offset` is the first invalid byte.
    InvalidEncoding { offset: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnbalancedDelimiter { offset } => {
                write!(f, "unbalanced math delimiter at byte {offset}")
            }
            ParseError::InvalidEncoding { offset } => {
                write!(f, "invalid UTF-8 at byte {offset}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

impl ParseError {
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::UnbalancedDelimiter { offset } | ParseError::InvalidEncoding { offset } => {
                offset
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaError {
    /// The formula source has no symbols once whitespace is removed.
    EmptyFormula,
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::EmptyFormula => f.write_str("formula is empty"),
        }
    }
}

impl core::error::Error for FormulaError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyError {
    ZeroMinMatch { field: &'static str },
    ZeroFormulaWeight,
}

impl fmt::Display for PolicyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyError::ZeroMinMatch { field } => write!(f, "{field} must be at least 1"),
            PolicyError::ZeroFormulaWeight => f.write_str("formula weight must be at least 1"),
        }
    }
}

impl core::error::Error for PolicyError {}
