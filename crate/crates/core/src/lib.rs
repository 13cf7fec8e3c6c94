//! Consistency of class diagrams and object diagrams under configurable
//! semantics.
//!
//! A pair is consistent when some object model belongs to the semantics of
//! both diagrams. Two engines decide this inside a bounded scope: a
//! brute-force enumerator ([`enumerate`]) and a propositional encoding
//! solved with a CDCL solver ([`sat`]). [`alloy`] renders the same problem
//! as an Alloy module for inspection.

pub mod alloy;
pub mod config;
pub mod diagram;
pub mod enumerate;
mod error;
pub mod fixtures;
pub mod om;
pub mod sat;
pub mod scope;
pub mod semantics;
pub mod verdict;

pub use config::{enumerate_valid, parse_config, validate, SemanticConfig};
pub use diagram::{parse_cd, parse_od, resolve, ResolvedPair};
pub use error::{Error, Result};
pub use om::{ObjectModel, Value};
pub use scope::{compute_scope, Scope};
pub use semantics::{in_sem_cd, in_sem_od};
pub use verdict::{Outcome, Verdict};
