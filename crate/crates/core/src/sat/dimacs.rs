use super::cnf::Cnf;
use std::fmt::Write;

/// DIMACS CNF text. Comment lines name what each variable stands for.
pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    for (i, m) in cnf.meanings.iter().enumerate() {
        writeln!(out, "c {} {}", i + 1, m).unwrap();
    }
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}
