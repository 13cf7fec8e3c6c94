use crate::om::ObjectModel;
use crate::scope::Scope;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Consistent(ObjectModel),
    Inconsistent,
    UnknownWithinScope,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Consistent(_) => "CONSISTENT",
            Outcome::Inconsistent => "INCONSISTENT",
            Outcome::UnknownWithinScope => "UNKNOWN_WITHIN_SCOPE",
        }
    }

    pub fn witness(&self) -> Option<&ObjectModel> {
        match self {
            Outcome::Consistent(w) => Some(w),
            _ => None,
        }
    }

    /// Same verdict, ignoring the witness.
    pub fn agrees(&self, other: &Outcome) -> bool {
        self.label() == other.label()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub variables: usize,
    pub clauses: usize,
    pub conflicts: u64,
    /// Candidate models examined by the enumerator.
    pub candidates: u64,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub scope: Scope,
    pub exhaustive: bool,
    /// The solver stopped at its conflict limit.
    pub resource_limited: bool,
    pub stats: Stats,
}
