//! Small random class diagram, object diagram and object model triples.
//! Shared by the core property tests and the acceptance harness.

use cdod_core::diagram::*;
use cdod_core::om::{Link, ObjInstance, ObjType, ObjectModel, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

const MULTS: [Multiplicity; 5] = [
    Multiplicity { lower: 0, upper: None },
    Multiplicity { lower: 0, upper: Some(1) },
    Multiplicity { lower: 1, upper: Some(1) },
    Multiplicity { lower: 0, upper: Some(2) },
    Multiplicity { lower: 1, upper: None },
];

fn attr_pool() -> Vec<Attribute> {
    vec![
        Attribute { name: "n".into(), ty: AttrType::Int },
        Attribute { name: "s".into(), ty: AttrType::String },
        Attribute { name: "e".into(), ty: AttrType::Enum("Colour".into()) },
    ]
}

fn random_value(rng: &mut impl Rng, name: &str) -> Value {
    let pick = if rng.gen_bool(0.85) { name } else { ["n", "s", "e", "b"][rng.gen_range(0..4)] };
    match pick {
        "n" => Value::Int(rng.gen_range(0..2)),
        "s" => Value::Str(["a", "b"][rng.gen_range(0..2)].into()),
        "e" => Value::Enum { ty: "Colour".into(), literal: ["red", "green"][rng.gen_range(0..2)].into() },
        _ => Value::Bool(rng.gen()),
    }
}

pub fn random_cd(rng: &mut impl Rng) -> ResolvedCd {
    loop {
        let n = rng.gen_range(1..=3);
        let mut classes = Vec::new();
        for i in 0..n {
            let mut c = ClassDecl::new(format!("C{i}"));
            if i > 0 && rng.gen_bool(0.3) {
                c.superclass = Some(format!("C{}", rng.gen_range(0..i)));
            }
            match rng.gen_range(0..10) {
                0 | 1 => c.is_abstract = true,
                2 => c.is_singleton = true,
                _ => {}
            }
            for a in attr_pool() {
                if rng.gen_bool(0.4) {
                    c.attributes.push(a);
                }
            }
            classes.push(c);
        }
        let associations = (0..rng.gen_range(0..=2))
            .map(|k| {
                let kind = if rng.gen_bool(0.2) { AssocKind::Composition } else { AssocKind::Plain };
                let nav = [Navigability::LeftToRight, Navigability::RightToLeft, Navigability::Both][rng.gen_range(0..3)];
                AssocDecl {
                    kind,
                    left: AssocEnd {
                        class: format!("C{}", rng.gen_range(0..n)),
                        role: format!("a{k}"),
                        mult: *MULTS.choose(rng).unwrap(),
                    },
                    right: AssocEnd {
                        class: format!("C{}", rng.gen_range(0..n)),
                        role: format!("b{k}"),
                        mult: *MULTS.choose(rng).unwrap(),
                    },
                    navigability: nav,
                }
            })
            .collect();
        let enums = vec![EnumDecl { name: "Colour".into(), literals: vec!["red".into(), "green".into()] }];
        let cd = ClassDiagram { name: "R".into(), classes, interfaces: vec![], enums, associations };
        if let Ok(r) = ResolvedCd::new(cd) {
            return r;
        }
    }
}

fn roles(cd: &ResolvedCd) -> Vec<String> {
    let mut out: Vec<String> = cd
        .cd
        .associations
        .iter()
        .flat_map(|a| [a.left.role.clone(), a.right.role.clone()])
        .collect();
    out.push("zz".into());
    out
}

pub fn random_od(rng: &mut impl Rng, cd: &ResolvedCd) -> ObjectDiagram {
    let class_names: Vec<String> = cd.cd.classes.iter().map(|c| c.name.clone()).collect();
    let objects: Vec<ObjDecl> = (0..rng.gen_range(0..=3))
        .map(|i| {
            let ty = match rng.gen_range(0..10) {
                0 => None,
                1 => Some("Robot".to_string()),
                _ => Some(class_names.choose(rng).unwrap().clone()),
            };
            let mut attributes = Vec::new();
            for a in ["n", "s", "e"] {
                if rng.gen_bool(0.3) {
                    attributes.push((a.to_string(), random_value(rng, a).to_literal()));
                }
            }
            ObjDecl { name: format!("o{i}"), ty, attributes }
        })
        .collect();
    let roles = roles(cd);
    let mut links: Vec<OdLink> = Vec::new();
    if !objects.is_empty() {
        for _ in 0..rng.gen_range(0..=3) {
            let l = OdLink::new(
                roles.choose(rng).unwrap(),
                &objects.choose(rng).unwrap().name,
                &objects.choose(rng).unwrap().name,
            );
            if !links.contains(&l) {
                links.push(l);
            }
        }
    }
    ObjectDiagram { name: "D".into(), objects, links }
}

/// Either a free random model or one grown from the object diagram, which
/// lands in both semantics far more often.
pub fn random_om(rng: &mut impl Rng, pair: &ResolvedPair) -> ObjectModel {
    let cd = &pair.cd;
    let mut objects = Vec::new();
    let mut links = Vec::new();
    if rng.gen_bool(0.5) {
        for (o, decl) in pair.od.objects.iter().enumerate() {
            let ty = match &pair.od_types[o] {
                OdType::Resolved(t) => {
                    let subs: Vec<&String> = cd.closure[t].iter().collect();
                    match subs.choose(rng) {
                        Some(c) if rng.gen_bool(0.9) => ObjType::Class((*c).clone()),
                        _ => ObjType::Class(t.clone()),
                    }
                }
                OdType::Unknown(u) => ObjType::Foreign(u.clone()),
                OdType::Untyped => match cd.concrete.choose(rng) {
                    Some(c) => ObjType::Class(c.clone()),
                    None => ObjType::Foreign("Other".into()),
                },
            };
            let mut attributes: BTreeMap<String, Value> =
                decl.attributes.iter().map(|(k, l)| (k.clone(), Value::from(l))).collect();
            if let Some(c) = ty.class() {
                for a in cd.attrs(c) {
                    attributes.entry(a.name.clone()).or_insert_with(|| random_value(rng, &a.name));
                }
            }
            objects.push(ObjInstance { id: decl.name.clone(), ty, attributes });
        }
        for l in &pair.shown_links {
            links.push(Link::new(&pair.od.objects[l.source].name, &l.role, &pair.od.objects[l.target].name));
        }
        if rng.gen_bool(0.3) {
            let c = cd.concrete.choose(rng).cloned();
            if let Some(c) = c {
                let attributes = cd.attrs(&c).iter().map(|a| (a.name.clone(), random_value(rng, &a.name))).collect();
                objects.push(ObjInstance { id: "extra".into(), ty: ObjType::Class(c), attributes });
            }
        }
    } else {
        let class_names: Vec<String> = cd.cd.classes.iter().map(|c| c.name.clone()).collect();
        for i in 0..rng.gen_range(0..=4) {
            let ty = match rng.gen_range(0..8) {
                0 => ObjType::Foreign("Robot".into()),
                1 => ObjType::Foreign("Other".into()),
                _ => ObjType::Class(class_names.choose(rng).unwrap().clone()),
            };
            let mut attributes = BTreeMap::new();
            for a in ["n", "s", "e"] {
                if rng.gen_bool(0.6) {
                    attributes.insert(a.to_string(), random_value(rng, a));
                }
            }
            objects.push(ObjInstance { id: format!("m{i}"), ty, attributes });
        }
    }
    if !objects.is_empty() {
        let roles = roles(cd);
        for _ in 0..rng.gen_range(0..=3) {
            let l = Link::new(&objects.choose(rng).unwrap().id, roles.choose(rng).unwrap(), &objects.choose(rng).unwrap().id);
            links.push(l);
        }
    }
    links.sort();
    links.dedup();
    ObjectModel { objects, links }
}

pub fn random_triple(rng: &mut impl Rng) -> (ResolvedPair, ObjectModel) {
    loop {
        let cd = random_cd(rng);
        let od = random_od(rng, &cd);
        if let Ok(pair) = resolve_with(cd, &od) {
            let om = random_om(rng, &pair);
            return (pair, om);
        }
    }
}
