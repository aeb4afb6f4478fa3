//! SMILES reading and writing: lexer, parser, writer, canonical form and
//! seeded random equivalents.

mod canon;
mod lexer;
mod parser;
mod writer;

pub use canon::{canonical_order, canonicalize, random_equivalent};
pub use lexer::{tokenize, SmilesToken, TokenKind};
pub use parser::{parse, parse_bytes};
pub use writer::{write, write_kekule};

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    UnclosedRing,
    UnbalancedBranch,
    BadBracketAtom,
    ValenceViolation,
    UnknownElement,
    EmptyInput,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::UnclosedRing => "UnclosedRing",
            DiagnosticKind::UnbalancedBranch => "UnbalancedBranch",
            DiagnosticKind::BadBracketAtom => "BadBracketAtom",
            DiagnosticKind::ValenceViolation => "ValenceViolation",
            DiagnosticKind::UnknownElement => "UnknownElement",
            DiagnosticKind::EmptyInput => "EmptyInput",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a SMILES string was rejected, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub kind: DiagnosticKind,
    /// Byte offset into the input; never past its end.
    pub position: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub(crate) fn new(kind: DiagnosticKind, position: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            kind,
            position,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at byte {}: {}", self.kind, self.position, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}
