//! Propositional encoding of bounded consistency, solved with a CDCL
//! solver.

pub mod cnf;
mod dimacs;
mod encode;
mod solve;

pub use dimacs::to_dimacs;
pub use encode::{decode, encode, Encoding};
pub use solve::{conflict_limit, solve_cnf, SolveOutcome, SolveStats, DEFAULT_CONFLICT_LIMIT};

use crate::config::{validate, SemanticConfig};
use crate::diagram::ResolvedPair;
use crate::error::{Error, Result};
use crate::om::{ObjType, Value};
use crate::scope::{compute_scope, Scope};
use crate::semantics::{in_sem_cd, in_sem_od};
use crate::verdict::{Outcome, Stats, Verdict};
use std::fmt;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarMeaning {
    Exists { slot: usize },
    Type { slot: usize, ty: ObjType },
    /// The slot's type lies in the closure of a class or interface.
    InClass { slot: usize, class: String },
    /// The slot holds an object of a class diagram class.
    Shown { slot: usize },
    HasAttr { slot: usize, attr: String },
    AttrValue { slot: usize, attr: String, value: Value },
    Link { source: usize, role: String, target: usize },
    Embed { object: String, slot: usize },
    Aux(String),
}

impl fmt::Display for VarMeaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarMeaning::Exists { slot } => write!(f, "exists(s{slot})"),
            VarMeaning::Type { slot, ty: ObjType::Class(c) } => write!(f, "type(s{slot}, {c})"),
            VarMeaning::Type { slot, ty: ObjType::Foreign(c) } => write!(f, "type(s{slot}, foreign {c})"),
            VarMeaning::InClass { slot, class } => write!(f, "in(s{slot}, {class})"),
            VarMeaning::Shown { slot } => write!(f, "cdTyped(s{slot})"),
            VarMeaning::HasAttr { slot, attr } => write!(f, "hasAttr(s{slot}, {attr})"),
            VarMeaning::AttrValue { slot, attr, value } => write!(f, "attrVal(s{slot}, {attr}, {value})"),
            VarMeaning::Link { source, role, target } => write!(f, "link(s{source}, {role}, s{target})"),
            VarMeaning::Embed { object, slot } => write!(f, "embed({object}, s{slot})"),
            VarMeaning::Aux(what) => write!(f, "aux {what}"),
        }
    }
}

/// Decides consistency with the propositional encoding. Uses the computed
/// scope, or `user` where the configuration allows it.
pub fn check_sat(pair: &ResolvedPair, config: &SemanticConfig, user: Option<&Scope>) -> Result<Verdict> {
    let violations = validate(config);
    if !violations.is_empty() {
        return Err(Error::InvalidConfig(violations));
    }
    let (scope, exhaustive) = compute_scope(pair, config, user)?;
    check_sat_in(pair, config, scope, exhaustive, conflict_limit())
}

pub fn check_sat_in(
    pair: &ResolvedPair,
    config: &SemanticConfig,
    scope: Scope,
    exhaustive: bool,
    limit: u64,
) -> Result<Verdict> {
    let start = Instant::now();
    let enc = encode(pair, config, &scope);
    let (result, solve_stats) = solve_cnf(&enc.cnf, &[], limit);
    let mut stats = Stats {
        variables: enc.cnf.num_vars(),
        clauses: enc.cnf.clauses.len(),
        conflicts: solve_stats.conflicts,
        ..Stats::default()
    };
    let mut resource_limited = false;
    let outcome = match result {
        SolveOutcome::Sat(model) => {
            let om = decode(&enc, &model);
            if !in_sem_cd(&om, &pair.cd, config) {
                return Err(Error::UnsoundWitness("class diagram membership failed".into()));
            }
            if !in_sem_od(&om, pair, config) {
                return Err(Error::UnsoundWitness("object diagram membership failed".into()));
            }
            Outcome::Consistent(om)
        }
        SolveOutcome::Unsat if exhaustive => Outcome::Inconsistent,
        SolveOutcome::Unsat => Outcome::UnknownWithinScope,
        SolveOutcome::ResourceLimit => {
            resource_limited = true;
            Outcome::UnknownWithinScope
        }
    };
    stats.micros = start.elapsed().as_micros() as u64;
    Ok(Verdict { outcome, scope, exhaustive, resource_limited, stats })
}
