//! Text formats: the theory language and the token layer shared with the
//! brain description format.
//!
//! ```text
//! theory GROUP eq {
//!   sort X;
//!   op mul : X, X -> X;
//!   op inv : X -> X;
//!   op u : -> X;
//!   axiom mul(x, u) = x;
//! }
//! theory P prop { letters x, y; axiom or(x, y); axiom not(and(x, y)); }
//! ```
//!
//! Connectives are prefix keywords (`not`, `and`, `or`, `implies`, and
//! `iff`, which is desugared to a conjunction of implications). Identifiers
//! in equations that are not declared ops are variables; their sorts are
//! inferred from the positions they occupy. `#` comments run to end of line.

pub(crate) mod lexer;
mod parser;
mod printer;

pub use parser::{parse_theories, parse_theory};
pub use printer::{print_theories, print_theory};

use crate::theory::Diagnostics;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Position of a token or construct. Lines and columns are 1-based;
/// `start..end` are byte offsets into the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum DslError {
    #[error("{span}: syntax error: {message}")]
    Syntax { message: String, span: SourceSpan },
    #[error("{0}")]
    Invalid(Diagnostics),
}

impl DslError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, DslError::Syntax { .. })
    }

    /// Every span this error points at.
    pub fn spans(&self) -> Vec<SourceSpan> {
        match self {
            DslError::Syntax { span, .. } => vec![*span],
            DslError::Invalid(d) => {
                d.0.iter()
                    .filter_map(|d| match d.location {
                        crate::theory::Location::Span(s) => Some(s),
                        crate::theory::Location::Path(_) => None,
                    })
                    .collect()
            }
        }
    }
}
