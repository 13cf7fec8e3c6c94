use cdod_core::alloy::{emit_cd_pred, emit_module, emit_od_pred, normalize};
use cdod_core::config::{enumerate_valid, preset};
use cdod_core::fixtures::{self, PAIRS};
use cdod_core::{Error, SemanticConfig};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn od2_predicate_under_elicit() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let text = emit_od_pred(&pair, &preset("elicit").unwrap());
    assert_eq!(normalize(&text), normalize(&golden("od2_elicit.als")), "{text}");
}

#[test]
fn od2_predicate_without_attribute_values() {
    let mut od = cdod_core::parse_od(fixtures::OD2).unwrap();
    for o in &mut od.objects {
        o.attributes.clear();
    }
    let cd = cdod_core::parse_cd(fixtures::CD2).unwrap();
    let pair = cdod_core::resolve(&cd, &od).unwrap();
    let text = emit_od_pred(&pair, &preset("elicit").unwrap());
    assert_eq!(normalize(&text), normalize(&golden("od2_elicit_no_values.als")), "{text}");
}

#[test]
fn cd2_predicate_under_complete_cd_flags() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let text = emit_cd_pred(&pair, &preset("test").unwrap());
    assert_eq!(normalize(&text), normalize(&golden("cd2_test.als")), "{text}");
}

#[test]
fn module_carries_feature_libraries() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let module = normalize(&emit_module(&pair, &preset("elicit").unwrap()).unwrap());
    assert!(module.contains(&normalize(&golden("od_features.als"))));
    assert!(module.contains(&normalize(&golden("cd_features.als"))));
    for needle in [
        "nonStrictTypingOD[dana + bob, EmpSubs]",
        "allObjectsShownOD[dana + bob + t1 + t2]",
        "ObjLUAttrib[EmpSubs, worksOn, TskSubs, 0, 2]",
        "pred consistentCDOD { cd2 and od2 }",
        "fun EmpSubs: set Obj { Emp + Mgr }",
        "but 4 Int",
    ] {
        assert!(module.contains(&normalize(needle)), "missing {needle}");
    }
}

#[test]
fn empty_om_feature_only_when_selected() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let mut config = preset("elicit").unwrap();
    config.cd_empty_om_invalid = false;
    config.od_empty_om_invalid = false;
    assert!(!emit_od_pred(&pair, &config).contains("emptyOMNotValidOD"));
    assert!(!emit_cd_pred(&pair, &config).contains("emptyOMNotValidCD"));
}

#[test]
fn empty_diagram_under_complete_objects() {
    let pair = fixtures::pair(fixtures::CD1, fixtures::OD_EMPTY);
    let text = emit_od_pred(&pair, &preset("test").unwrap());
    assert!(normalize(&text).contains(&normalize("no Obj - (FName + auxiliary + Val + EnumVal + Int)")));
    assert!(!text.contains("allObjectsShownOD"));
}

#[test]
fn incomplete_links_use_inclusion() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let mut config = preset("elicit").unwrap();
    config.od_links_complete = false;
    config.od_objects_complete = false;
    let text = emit_od_pred(&pair, &config);
    assert!(text.contains("allLinksShownODIncmlt[dana, worksOn, {t1 + t2}]"));
    assert!(!text.contains("allLinksShownOD["));
    assert!(!text.contains("allObjectsShownOD"));
}

#[test]
fn strict_typing_names_the_class() {
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    let text = emit_od_pred(&pair, &preset("test").unwrap());
    assert!(text.contains("strictTypingOD[dana + bob, Emp]"));
    assert!(text.contains("allAttribShownOD[t1, sDate]"));
    assert!(text.contains("allAttribShownOD[dana, none]"));
}

#[test]
fn emission_total_and_deterministic() {
    for (name, cd, od) in PAIRS {
        let pair = fixtures::pair(cd, od);
        for config in enumerate_valid() {
            let a = emit_module(&pair, &config).unwrap_or_else(|e| panic!("{name} {}: {e}", config.key()));
            let b = emit_module(&pair, &config).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.matches('{').count(), a.matches('}').count(), "{name} {}", config.key());
        }
    }
}

#[test]
fn invalid_configuration_rejected() {
    let pair = fixtures::pair(fixtures::CD1, fixtures::OD1);
    let bad = SemanticConfig::from_index(0);
    assert!(!bad.is_valid());
    assert!(matches!(emit_module(&pair, &bad), Err(Error::InvalidConfig(_))));
}
