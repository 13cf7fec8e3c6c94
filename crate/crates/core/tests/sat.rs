use cdod_core::config::preset;
use cdod_core::fixtures;
use cdod_core::sat::{check_sat, encode, to_dimacs};
use cdod_core::scope::compute_scope;
use cdod_core::{in_sem_cd, in_sem_od, parse_cd, resolve, Outcome};

#[test]
fn witness_survives_reencoding_as_complete_diagram() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let v = check_sat(&pair, &preset("elicit").unwrap(), None).unwrap();
    let w = v.outcome.witness().unwrap().clone();
    let od = w.to_od("again");
    let again = resolve(&parse_cd(fixtures::CD2).unwrap(), &od).unwrap();
    let test = preset("test").unwrap();
    let v2 = check_sat(&again, &test, None).unwrap();
    let w2 = v2.outcome.witness().expect("a fully complete diagram of a witness is consistent");
    assert_eq!(w2.normalized(), w.normalized());
    assert!(in_sem_cd(w2, &again.cd, &test) && in_sem_od(w2, &again, &test));
}

#[test]
fn empty_diagram_and_empty_om_flag() {
    let pair = fixtures::pair(fixtures::CD1, fixtures::OD_EMPTY);
    let test = preset("test").unwrap();
    let v = check_sat(&pair, &test, None).unwrap();
    assert_eq!(v.outcome, Outcome::Inconsistent);
    assert!(v.exhaustive);
    let v = check_sat(&pair, &preset("codegen").unwrap(), None).unwrap();
    assert!(v.outcome.witness().unwrap().is_empty());
}

#[test]
fn solving_is_deterministic() {
    for (_, cd, od) in fixtures::PAIRS {
        let pair = fixtures::pair(cd, od);
        let c = preset("elicit").unwrap();
        let a = check_sat(&pair, &c, None).unwrap();
        let b = check_sat(&pair, &c, None).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!((a.stats.variables, a.stats.clauses), (b.stats.variables, b.stats.clauses));
    }
}

#[test]
fn evolved_class_diagram_gets_missing_attributes() {
    let pair = fixtures::pair(fixtures::CD1P, fixtures::OD1);
    let v = check_sat(&pair, &preset("evolve").unwrap(), None).unwrap();
    let w = v.outcome.witness().unwrap();
    for id in ["dana", "bob"] {
        let o = w.object(id).unwrap();
        assert!(o.attributes.contains_key("name") && o.attributes.contains_key("gender"), "{o:?}");
    }
    assert!(w.object("t1").unwrap().attributes.contains_key("priority"));
}

#[test]
fn dimacs_matches_encoding() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let c = preset("elicit").unwrap();
    let (scope, _) = compute_scope(&pair, &c, None).unwrap();
    let enc = encode(&pair, &c, &scope);
    let text = to_dimacs(&enc.cnf);
    let header = format!("p cnf {} {}", enc.cnf.num_vars(), enc.cnf.clauses.len());
    assert!(text.lines().any(|l| l == header));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).collect();
    assert_eq!(body.len(), enc.cnf.clauses.len());
    assert!(body.iter().all(|l| l.ends_with('0')));
    assert_eq!(text.lines().filter(|l| l.starts_with("c ")).count(), enc.cnf.num_vars());
}

#[test]
fn invalid_config_rejected() {
    let pair = fixtures::pair(fixtures::CD1, fixtures::OD1);
    let bad = cdod_core::SemanticConfig::from_index(0);
    assert!(matches!(check_sat(&pair, &bad, None), Err(cdod_core::Error::InvalidConfig(_))));
}
