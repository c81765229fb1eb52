//! Subcommands of the `wvu` tool as library functions, so they can be driven
//! from tests without spawning a process.

pub mod estimate;
pub mod output;
pub mod report;
pub mod sweep;
pub mod verify;

use serde::Serialize;
use wvu_core::Error;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Success = 0,
    InvalidInput = 1,
    PropertyViolation = 2,
    DegenerateInput = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A computed value, or the named reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Entry<T> {
    Value(T),
    Error { kind: String, message: String },
}

impl<T> Entry<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Entry::Value(v) => Some(v),
            Entry::Error { .. } => None,
        }
    }

    pub fn error_kind(&self) -> Option<&str> {
        match self {
            Entry::Value(_) => None,
            Entry::Error { kind, .. } => Some(kind),
        }
    }
}

impl<T> From<Result<T, Error>> for Entry<T> {
    fn from(r: Result<T, Error>) -> Self {
        match r {
            Ok(v) => Entry::Value(v),
            Err(e) => Entry::Error { kind: e.kind().to_string(), message: e.to_string() },
        }
    }
}
