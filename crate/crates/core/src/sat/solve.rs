use super::cnf::{Cnf, Lit};
use batsat::{lbool, Callbacks, ClauseKind, Solver, SolverInterface, SolverOpts};

pub const DEFAULT_CONFLICT_LIMIT: u64 = 1_000_000;

/// Conflict limit from `CDOD_CONFLICT_LIMIT`, or the default.
pub fn conflict_limit() -> u64 {
    std::env::var("CDOD_CONFLICT_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CONFLICT_LIMIT)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Truth value of every variable, indexed from variable 1 at position 0.
    Sat(Vec<bool>),
    Unsat,
    ResourceLimit,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub conflicts: u64,
}

struct ConflictBudget {
    learnt: u64,
    limit: u64,
}

impl Callbacks for ConflictBudget {
    fn on_new_clause(&mut self, _: &[batsat::Lit], kind: ClauseKind) {
        if let ClauseKind::Learnt = kind {
            self.learnt += 1;
        }
    }

    fn stop(&self) -> bool {
        self.learnt >= self.limit
    }
}

/// Runs the CDCL solver with deterministic options. Every learnt clause
/// comes from one conflict, so the callback count bounds conflicts.
pub fn solve_cnf(cnf: &Cnf, assumptions: &[Lit], limit: u64) -> (SolveOutcome, SolveStats) {
    let opts = SolverOpts { random_var_freq: 0.0, rnd_pol: false, rnd_init_act: false, ..SolverOpts::default() };
    let mut solver = Solver::new(opts, ConflictBudget { learnt: 0, limit });
    let vars: Vec<batsat::Var> = (0..cnf.num_vars()).map(|_| solver.new_var_default()).collect();
    let lit = |l: Lit| batsat::Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0);
    let mut ok = true;
    for c in &cnf.clauses {
        let mut lits: Vec<batsat::Lit> = c.iter().map(|&l| lit(l)).collect();
        if !solver.add_clause_reuse(&mut lits) {
            ok = false;
            break;
        }
    }
    if !ok {
        return (SolveOutcome::Unsat, SolveStats::default());
    }
    let assumps: Vec<batsat::Lit> = assumptions.iter().map(|&l| lit(l)).collect();
    let result = solver.solve_limited(&assumps);
    let stats = SolveStats { conflicts: solver.num_conflicts() };
    let outcome = if result == lbool::TRUE {
        SolveOutcome::Sat(vars.iter().map(|&v| solver.value_var(v) == lbool::TRUE).collect())
    } else if result == lbool::FALSE {
        SolveOutcome::Unsat
    } else {
        SolveOutcome::ResourceLimit
    };
    (outcome, stats)
}
