//! Acceptance run: one PASS/FAIL line per criterion.

use cdod_core::alloy::{emit_cd_pred, emit_od_pred, normalize};
use cdod_core::config::{enumerate_valid, preset, validate};
use cdod_core::enumerate::check_enum;
use cdod_core::fixtures::{self, PAIRS};
use cdod_core::sat::{check_sat_in, conflict_limit};
use cdod_core::scope::{compute_scope, is_exhaustive, oracle_scope};
use cdod_core::{in_sem_cd, in_sem_od, SemanticConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

#[path = "../../core/tests/support/random.rs"]
mod random;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, n: u8, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {n}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cdod")).args(["configs", "count"]).output();
    let cli = out.map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string()).unwrap_or_default();
    let mut raw = BTreeSet::new();
    for bits in 0u16..512 {
        let f: [bool; 9] = std::array::from_fn(|i| bits >> (8 - i) & 1 == 1);
        let ok = (f[2] || f[7]) && (f[4] || !f[5]) && (f[0] == f[3]);
        if ok {
            raw.insert(SemanticConfig::from_flags(f).key());
        }
    }
    let lib: BTreeSet<String> = enumerate_valid().iter().map(|c| c.key()).collect();
    let t = start.elapsed();
    let ok = cli == "144" && raw.len() == 144 && raw == lib && t < Duration::from_secs(1);
    (ok, format!("configs count = {cli}, raw filter = {}, sets equal = {}, {}", raw.len(), raw == lib, secs(t)))
}

fn criterion_2() -> (bool, String) {
    let base = preset("test").unwrap();
    let cases: [(u8, SemanticConfig); 3] = [
        (1, SemanticConfig { cd_classes_complete: false, od_types_complete: false, ..base }),
        (2, SemanticConfig { od_objects_complete: false, od_links_complete: true, ..base }),
        (3, SemanticConfig { cd_empty_om_invalid: true, od_empty_om_invalid: false, ..base }),
    ];
    let mut ok = validate(&base).is_empty();
    let mut got = Vec::new();
    for (want, c) in cases {
        let v: Vec<u8> = validate(&c).iter().map(|v| v.constraint).collect();
        ok &= v == vec![want];
        got.push(format!("{v:?}"));
    }
    (ok, format!("violations {}", got.join(" ")))
}

fn criterion_3() -> (bool, String) {
    let mut codegen = preset("codegen").unwrap();
    let mut invalid_empty = codegen;
    invalid_empty.cd_empty_om_invalid = true;
    invalid_empty.od_empty_om_invalid = true;
    codegen.cd_empty_om_invalid = false;
    let cases = [
        ("cd1/od1 elicit", fixtures::CD1, fixtures::OD1, preset("elicit").unwrap(), "CONSISTENT"),
        ("cd1p/od1 evolve", fixtures::CD1P, fixtures::OD1, preset("evolve").unwrap(), "CONSISTENT"),
        ("cd1p/od1 test", fixtures::CD1P, fixtures::OD1, preset("test").unwrap(), "INCONSISTENT"),
        ("cd2/od2 elicit", fixtures::CD2, fixtures::OD2, preset("elicit").unwrap(), "CONSISTENT"),
        ("cd2/od2 test", fixtures::CD2, fixtures::OD2, preset("test").unwrap(), "INCONSISTENT"),
        ("cd1/empty emptyOM=valid", fixtures::CD1, fixtures::OD_EMPTY, codegen, "CONSISTENT"),
        ("cd1/empty emptyOM=invalid", fixtures::CD1, fixtures::OD_EMPTY, invalid_empty, "INCONSISTENT"),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, cd, od, config, want) in cases {
        let pair = fixtures::pair(cd, od);
        let start = Instant::now();
        let (scope, exhaustive) = compute_scope(&pair, &config, None).unwrap();
        let e = check_enum(&pair, &config, &scope).unwrap();
        let s = check_sat_in(&pair, &config, scope, exhaustive, conflict_limit()).unwrap();
        let t = start.elapsed();
        slowest = slowest.max(t);
        let mut good = exhaustive && e.outcome.label() == want && s.outcome.label() == want && t < Duration::from_secs(5);
        if name == "cd2/od2 elicit" {
            good &= [&e.outcome, &s.outcome]
                .iter()
                .all(|o| o.witness().and_then(|w| w.object("dana")).is_some_and(|d| d.ty.name() == "Mgr"));
        }
        if !good {
            notes.push(format!("{name}: sat {} enum {} (want {want})", s.outcome, e.outcome));
        }
        ok &= good;
    }
    let detail = if notes.is_empty() {
        format!("7 scenarios match on both engines, slowest {}", secs(slowest))
    } else {
        notes.join("; ")
    };
    (ok, detail)
}

/// Oracle equivalence and witness soundness over the fixture sweep.
fn criteria_4_and_5() -> ((bool, String), (bool, String)) {
    let start = Instant::now();
    let configs = enumerate_valid();
    let jobs: Vec<(usize, SemanticConfig)> =
        (0..PAIRS.len()).flat_map(|p| configs.iter().map(move |c| (p, *c))).collect();
    let results: Vec<(bool, usize, usize, Option<String>)> = jobs
        .par_iter()
        .map(|&(p, config)| {
            let (name, cd, od) = PAIRS[p];
            let pair = fixtures::pair(cd, od);
            let scope = oracle_scope(&pair, &config).unwrap();
            let exhaustive = is_exhaustive(&pair, &config, &scope);
            let e = check_enum(&pair, &config, &scope).unwrap();
            let s = check_sat_in(&pair, &config, scope, exhaustive, conflict_limit());
            let s = match s {
                Ok(v) => v.outcome,
                Err(err) => return (false, 0, 1, Some(format!("{name} {}: {err}", config.key()))),
            };
            let agree = e.outcome.agrees(&s);
            let witnesses: Vec<_> = [e.outcome.witness(), s.witness()].into_iter().flatten().collect();
            let bad = witnesses.iter().filter(|w| !(in_sem_cd(w, &pair.cd, &config) && in_sem_od(w, &pair, &config))).count();
            let note = (!agree).then(|| format!("{name} {}: enum {} sat {}", config.key(), e.outcome, s));
            (agree, witnesses.len(), bad, note)
        })
        .collect();
    let t = start.elapsed();
    let divergences: Vec<&String> = results.iter().filter_map(|r| r.3.as_ref()).collect();
    let witnesses: usize = results.iter().map(|r| r.1).sum();
    let unsound: usize = results.iter().map(|r| r.2).sum();
    let ok4 = results.len() == 864 && divergences.is_empty() && t < Duration::from_secs(600);
    let mut d4 = format!("{} runs, {} divergences, {}", results.len(), divergences.len(), secs(t));
    if let Some(first) = divergences.first() {
        d4.push_str(&format!(", first: {first}"));
    }
    let consistent = results.iter().filter(|r| r.1 > 0).count();
    let ok5 = unsound == 0 && witnesses > 0;
    let d5 = format!("{witnesses} witnesses from {consistent} consistent runs, {unsound} rejected by the membership predicates");
    ((ok4, d4), (ok5, d5))
}

fn criterion_6() -> (bool, String) {
    let start = Instant::now();
    let configs = enumerate_valid();
    let order: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|i| (0..configs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| configs[j].relaxes(&configs[i]))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2011);
    let triples: Vec<_> = (0..1000).map(|_| random::random_triple(&mut rng)).collect();
    let outcomes: Vec<(usize, usize)> = triples
        .par_iter()
        .map(|(pair, om)| {
            let cd: Vec<bool> = configs.iter().map(|c| in_sem_cd(om, &pair.cd, c)).collect();
            let od: Vec<bool> = configs.iter().map(|c| in_sem_od(om, pair, c)).collect();
            let violations = order.iter().filter(|&&(i, j)| (cd[i] && !cd[j]) || (od[i] && !od[j])).count();
            (violations, cd.iter().zip(&od).filter(|(a, b)| **a && **b).count())
        })
        .collect();
    let violations: usize = outcomes.iter().map(|o| o.0).sum();
    let members: usize = outcomes.iter().map(|o| o.1).sum();
    (
        violations == 0,
        format!(
            "1000 triples x {} ordered pairs, {violations} violations, {members} memberships in both, {}",
            order.len(),
            secs(start.elapsed())
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let golden = |name: &str| {
        let path = format!("{}/../core/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
        std::fs::read_to_string(path).unwrap_or_default()
    };
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let od = normalize(&emit_od_pred(&pair, &preset("elicit").unwrap())) == normalize(&golden("od2_elicit.als"));
    let cd = normalize(&emit_cd_pred(&pair, &preset("test").unwrap())) == normalize(&golden("cd2_test.als"));
    let module = normalize(&cdod_core::alloy::emit_module(&pair, &preset("elicit").unwrap()).unwrap());
    let libs = module.contains(&normalize(&golden("od_features.als")))
        && module.contains(&normalize(&golden("cd_features.als")));
    (od && cd && libs, format!("od2 pred {od}, cd2 pred {cd}, feature libraries {libs}"))
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    let (ok, d) = criterion_1();
    r.line(1, ok, d);
    let (ok, d) = criterion_2();
    r.line(2, ok, d);
    let (ok, d) = criterion_3();
    r.line(3, ok, d);
    let ((ok4, d4), (ok5, d5)) = criteria_4_and_5();
    r.line(4, ok4, d4);
    r.line(5, ok5, d5);
    let (ok, d) = criterion_6();
    r.line(6, ok, d);
    let (ok, d) = criterion_7();
    r.line(7, ok, d);
    println!("NOTE criterion 8: tool-integration experience and Alloy Analyzer timings are not reproduced; criteria 4-6 stand in for them");
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
