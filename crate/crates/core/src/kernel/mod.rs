//! Proof objects and their checkers.

pub mod nd;
pub mod sequent;

use std::fmt;

use serde::Serialize;

/// Result of a check. `path` lists child indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Fail { path: Vec<usize>, reason: String },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub(crate) fn fail(path: &[usize], reason: impl Into<String>) -> Verdict {
        Verdict::Fail { path: path.to_vec(), reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => write!(f, "ok"),
            Verdict::Fail { path, reason } => write!(f, "fail at {path:?}: {reason}"),
        }
    }
}

/// Runs `f` on a fresh stack segment when the current one runs low.
pub(crate) fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(128 * 1024, 4 * 1024 * 1024, f)
}
