//! Clause store with the gate and cardinality encodings the consistency
//! encoding is built from. Literals are DIMACS-style signed integers.

use super::VarMeaning;

pub type Lit = i32;

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub meanings: Vec<VarMeaning>,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn num_vars(&self) -> usize {
        self.meanings.len()
    }

    pub fn var(&mut self, meaning: VarMeaning) -> Lit {
        self.meanings.push(meaning);
        self.meanings.len() as Lit
    }

    fn aux(&mut self, what: &str) -> Lit {
        self.var(VarMeaning::Aux(what.to_string()))
    }

    pub fn clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        self.clauses.push(lits.into_iter().collect());
    }

    /// `out ↔ (l1 ∨ … ∨ ln)`.
    pub fn define_or(&mut self, out: Lit, lits: &[Lit]) {
        for &l in lits {
            self.clause([-l, out]);
        }
        self.clause(std::iter::once(-out).chain(lits.iter().copied()));
    }

    /// Fresh variable equivalent to `a ∧ b`.
    pub fn and(&mut self, a: Lit, b: Lit, what: &str) -> Lit {
        let out = self.aux(what);
        self.clause([-out, a]);
        self.clause([-out, b]);
        self.clause([out, -a, -b]);
        out
    }

    /// `guard → at most k of lits`.
    pub fn at_most(&mut self, lits: &[Lit], k: usize, guard: Option<Lit>) {
        let g: Vec<Lit> = guard.map(|g| -g).into_iter().collect();
        let n = lits.len();
        if k >= n {
            return;
        }
        if k == 0 {
            for &l in lits {
                self.clause(g.iter().copied().chain([-l]));
            }
            return;
        }
        if k == 1 && n <= 6 {
            for i in 0..n {
                for j in i + 1..n {
                    self.clause(g.iter().copied().chain([-lits[i], -lits[j]]));
                }
            }
            return;
        }
        // Sequential counter: s[i][j] holds when at least j+1 of the first
        // i+1 literals are true.
        let mut prev: Vec<Lit> = (0..k).map(|_| self.aux("counter")).collect();
        self.clause([-lits[0], prev[0]]);
        for &s in &prev[1..] {
            self.clause([-s]);
        }
        for (i, &x) in lits.iter().enumerate().skip(1) {
            // Overflow: x while k already counted.
            self.clause(g.iter().copied().chain([-x, -prev[k - 1]]));
            if i == n - 1 {
                break;
            }
            let cur: Vec<Lit> = (0..k).map(|_| self.aux("counter")).collect();
            self.clause([-x, cur[0]]);
            for j in 0..k {
                self.clause([-prev[j], cur[j]]);
                if j > 0 {
                    self.clause([-x, -prev[j - 1], cur[j]]);
                }
            }
            prev = cur;
        }
    }

    /// `guard → at least k of lits`.
    pub fn at_least(&mut self, lits: &[Lit], k: usize, guard: Option<Lit>) {
        if k == 0 {
            return;
        }
        if k > lits.len() {
            self.clause(guard.map(|g| -g));
            return;
        }
        if k == 1 {
            self.clause(guard.map(|g| -g).into_iter().chain(lits.iter().copied()));
            return;
        }
        let negated: Vec<Lit> = lits.iter().map(|l| -l).collect();
        self.at_most(&negated, lits.len() - k, guard);
    }

    pub fn exactly_one(&mut self, lits: &[Lit], guard: Option<Lit>) {
        self.at_least(lits, 1, guard);
        self.at_most(lits, 1, guard);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::solve::{solve_cnf, SolveOutcome};

    /// Assignments to the first `n` variables that extend to a model.
    fn projected_models(cnf: &Cnf, n: usize) -> Vec<u32> {
        (0u32..1 << n)
            .filter(|m| {
                let assumptions: Vec<Lit> =
                    (0..n).map(|v| if m >> v & 1 == 1 { v as Lit + 1 } else { -(v as Lit + 1) }).collect();
                matches!(solve_cnf(cnf, &assumptions, u64::MAX).0, SolveOutcome::Sat(_))
            })
            .collect()
    }

    fn base(n: usize) -> (Cnf, Vec<Lit>) {
        let mut cnf = Cnf::default();
        let lits = (0..n).map(|i| cnf.var(VarMeaning::Aux(format!("x{i}")))).collect();
        (cnf, lits)
    }

    #[test]
    fn at_most_matches_popcount() {
        for n in 1..=7 {
            for k in 0..=n {
                let (mut cnf, lits) = base(n);
                cnf.at_most(&lits, k, None);
                let models = projected_models(&cnf, n);
                let expected: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize <= k).collect();
                assert_eq!(models, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn at_least_matches_popcount() {
        for n in 1..=6 {
            for k in 0..=n + 1 {
                let (mut cnf, lits) = base(n);
                cnf.at_least(&lits, k, None);
                let models = projected_models(&cnf, n);
                let expected: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() as usize >= k).collect();
                assert_eq!(models, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn guard_disables_bound() {
        let (mut cnf, lits) = base(4);
        let g = lits[3];
        cnf.at_most(&lits[..3], 1, Some(g));
        let models = projected_models(&cnf, 4);
        for m in 0u32..16 {
            let ok = m & 8 == 0 || (m & 7).count_ones() <= 1;
            assert_eq!(models.contains(&m), ok, "m={m:04b}");
        }
    }
}
