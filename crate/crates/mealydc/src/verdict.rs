//! Verdicts and input errors.
//!
//! A failed law is data, not an error: checkers return a [`Verdict`] carrying
//! the label of the first violated law and a JSON witness with the arguments
//! at which it fails. [`Error`] is reserved for ill-formed input (mismatched
//! boundaries, out-of-range indices, blown enumeration budgets).

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of a law check: pass, or the first violation in canonical order.
///
/// Witnesses are ordered: checkers scan their argument space
/// lexicographically (words by length, then letters), so the reported
/// counterexample is stable across runs and platforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Label of the violated law, e.g. `"ma_2"`, when `pass` is false.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<String>,
    /// Arguments at which the law fails, with both evaluated sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            pass: true,
            law: None,
            witness: None,
        }
    }

    pub fn fail(law: &str, witness: Value) -> Self {
        Verdict {
            pass: false,
            law: Some(law.to_string()),
            witness: Some(witness),
        }
    }

    /// Short-circuiting conjunction: keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        if self.pass {
            other()
        } else {
            self
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Boundaries of an operation do not match (codomains, alphabets, ...).
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    /// A table entry or argument is out of range.
    #[error("bad index at {path}: {message}")]
    Index { path: String, message: String },
    /// Structurally invalid input (label counts, non-endo machine, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An enumeration would exceed the configured candidate budget.
    #[error("enumeration budget exceeded: about {estimate} candidate tables (limit {limit})")]
    Budget { estimate: u128, limit: u128 },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn index(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Index {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Exit class for the CLI: violations are 1, every input error is 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, Error>;
