use cdod_core::config::{compatibility, enumerate_valid, parse_config, parse_config_file, preset, validate, PRESETS};
use cdod_core::{fixtures, SemanticConfig};
use std::collections::BTreeSet;

/// The three constraints restated over raw flag vectors, in field order.
fn admissible(f: [bool; 9]) -> bool {
    let [cd_empty, _cd_attrs, cd_classes, od_empty, od_objects, od_links, _od_attrs, od_types, _strict] = f;
    let c1 = cd_classes || od_types;
    let c2 = od_objects || !od_links;
    let c3 = cd_empty == od_empty;
    c1 && c2 && c3
}

#[test]
fn valid_set_matches_truth_table() {
    let mut raw = 0;
    let mut expected = BTreeSet::new();
    for bits in 0u16..512 {
        raw += 1;
        let f: [bool; 9] = std::array::from_fn(|i| bits >> (8 - i) & 1 == 1);
        if admissible(f) {
            expected.insert(SemanticConfig::from_flags(f).key());
        }
    }
    assert_eq!(raw, 512);
    let got: BTreeSet<String> = enumerate_valid().iter().map(|c| c.key()).collect();
    assert_eq!(got.len(), 144);
    assert_eq!(got, expected);
    assert!(enumerate_valid().iter().all(|c| validate(c).is_empty() && c.is_valid()));
}

fn with(f: impl FnOnce(&mut SemanticConfig)) -> SemanticConfig {
    let mut c = preset("test").unwrap();
    f(&mut c);
    c
}

#[test]
fn each_constraint_reported_alone() {
    let c = with(|c| {
        c.cd_classes_complete = false;
        c.od_types_complete = false;
    });
    assert_eq!(validate(&c).iter().map(|v| v.constraint).collect::<Vec<_>>(), vec![1]);
    let c = with(|c| c.od_objects_complete = false);
    assert_eq!(validate(&c).iter().map(|v| v.constraint).collect::<Vec<_>>(), vec![2]);
    let c = with(|c| c.od_empty_om_invalid = false);
    assert_eq!(validate(&c).iter().map(|v| v.constraint).collect::<Vec<_>>(), vec![3]);
}

#[test]
fn presets_have_documented_flags() {
    let t = preset("test").unwrap();
    assert!(t.flags().iter().all(|&f| f));
    let e = preset("elicit").unwrap();
    assert!(!e.od_attributes_complete && !e.od_strict_typing);
    assert!(e.od_objects_complete && e.od_links_complete && e.od_types_complete);
    let ev = preset("evolve").unwrap();
    assert_eq!(ev, SemanticConfig { cd_attributes_complete: false, ..e });
    let g = preset("codegen").unwrap();
    assert!(!g.cd_empty_om_invalid && !g.od_empty_om_invalid);
    assert!(g.flags()[1..3].iter().chain(&g.flags()[4..]).all(|&f| f));
    for (name, _) in PRESETS {
        assert!(preset(name).unwrap().is_valid(), "{name}");
    }
}

#[test]
fn text_roundtrip_and_key_order() {
    for c in enumerate_valid() {
        let text = c.to_text("x");
        let file = parse_config_file(&text).unwrap();
        assert_eq!(file.config, c);
        assert_eq!(file.name, "x");
    }
    let shuffled = r#"config "s" {
        od.typing = strict; od.types = complete; od.attributes = complete; od.links = complete;
        od.objects = complete; od.emptyOM = invalid; cd.classes = complete; cd.attributes = complete;
        cd.emptyOM = invalid;
    }"#;
    assert_eq!(parse_config(shuffled).unwrap(), preset("test").unwrap());
}

#[test]
fn malformed_config_files() {
    let full = preset("test").unwrap().to_text("t");
    let missing: String = full.lines().filter(|l| !l.contains("od.typing")).collect::<Vec<_>>().join("\n");
    let err = parse_config(&missing).unwrap_err();
    assert!(err.to_string().contains("od.typing"), "{err}");
    let unknown = full.replace("od.typing = strict;", "od.typing = strict; od.colour = red;");
    assert!(parse_config(&unknown).is_err());
    let bad_value = full.replace("od.typing = strict", "od.typing = complete");
    assert!(parse_config(&bad_value).is_err());
    let dup = full.replace("od.typing = strict;", "od.typing = strict; od.typing = nonstrict;");
    assert!(parse_config(&dup).is_err());
    assert!(parse_config("config { }").is_err());
}

#[test]
fn compatibility_notes() {
    let pair = fixtures::pair(fixtures::CD2, "objectdiagram U { o1; }");
    let notes = compatibility(&preset("test").unwrap(), &pair);
    assert_eq!(notes, vec!["untyped object `o1` under types=complete"]);
    let pair = fixtures::pair(fixtures::CD2, fixtures::OD2);
    assert!(compatibility(&preset("elicit").unwrap(), &pair).is_empty());
    let pair = fixtures::pair(fixtures::CD2, "objectdiagram R { x:Robot; }");
    let notes = compatibility(&preset("test").unwrap(), &pair);
    assert!(notes[0].contains("unknown type `Robot`"));
}

#[test]
fn relaxation_is_subset_of_set_flags() {
    let strict = preset("test").unwrap();
    for c in enumerate_valid() {
        assert!(c.relaxes(&strict));
        assert!(c.relaxes(&c));
    }
    let elicit = preset("elicit").unwrap();
    assert!(!strict.relaxes(&elicit));
}
