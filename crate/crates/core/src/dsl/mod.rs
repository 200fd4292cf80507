//! Universe description files.
//!
//! ```text
//! universe U            # optional, at most once
//! object a b c          # may repeat; objects must be declared before use
//! concept F = { a b }
//! relation R = { (a,b) (b,c) }
//! ```
//!
//! Declarations are line oriented and may come in any order, except that an
//! object must be declared on an earlier line than any use of it.

mod lexer;
mod parser;
mod writer;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::model::Universe;

pub use parser::parse_universe;
pub use writer::write_universe;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Location {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    /// The offending token, empty at end of line.
    pub token: String,
    pub message: String,
}

impl Diagnostic {
    pub fn location(&self) -> Location {
        Location {
            line: self.line,
            column: self.column,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Semantic => "semantic error",
        };
        write!(f, "{}:{}: {kind}: {}", self.line, self.column, self.message)?;
        if self.token.is_empty() {
            f.write_str(" (at end of line)")
        } else {
            write!(f, " (at `{}`)", self.token)
        }
    }
}

/// Every diagnostic produced while reading one document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<Diagnostic>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            d.fmt(f)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

/// Names a declaration for the location map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Declaration {
    Universe,
    Object(String),
    Concept(String),
    Relation(String),
}

/// A parsed file: its text, the universe it describes, and where each
/// declaration was found.
#[derive(Clone, Debug)]
pub struct UniverseDocument {
    pub source: String,
    pub universe: Universe,
    pub locations: BTreeMap<Declaration, Location>,
}

impl UniverseDocument {
    pub fn location(&self, decl: &Declaration) -> Option<Location> {
        self.locations.get(decl).copied()
    }
}
