//! Alloy module text for a pair under a configuration. The module is for
//! inspection in the Alloy Analyzer; nothing here executes it.
//!
//! Subclassing is expressed through `<Class>Subs` functions instead of
//! `extends`, field access goes through the ternary `get` relation, and each
//! selected semantic feature instantiates one library predicate from inside
//! `pred cd` or `pred od`.

use crate::config::{validate, SemanticConfig};
use crate::diagram::{AttrType, End, Literal, Multiplicity, Navigability, OdType, ResolvedPair};
use crate::error::{Error, Result};
use crate::scope::compute_scope;
use std::fmt::Write;

const FOUNDATION: &str = "\
// Foundational signatures
abstract sig FName {}
abstract sig Obj { get: FName -> Obj }
abstract sig Val extends Obj {}
abstract sig EnumVal extends Obj {}
sig auxiliary {}

// Values carry no fields and only exist when some object refers to them.
fact valuesHaveNoFields { no (Val + EnumVal).get }
fact valuesAreReferenced { all v: Val + EnumVal | some o: Obj - Val - EnumVal | v in o.get[FName] }
";

const STRUCTURE_LIBRARY: &str = "\
// Multiplicity and direction predicates (reconstructed)
pred ObjAttrib[objs: set Obj, fName: one FName, fType: set Obj] {
  objs.get[fName] in fType
  all o: objs | one o.get[fName] }

pred ObjLUAttrib[objs: set Obj, fName: one FName, fType: set Obj, low: Int, up: Int] {
  all o: objs | #(o.get[fName] & fType) >= low and #(o.get[fName] & fType) <= up }

pred ObjLAttrib[objs: set Obj, fName: one FName, fType: set Obj, low: Int] {
  all o: objs | #(o.get[fName] & fType) >= low }

pred ObjLU[objs: set Obj, fName: one FName, fType: set Obj, low: Int, up: Int] {
  all r: objs | #{ l: fType | r in l.get[fName] } >= low and #{ l: fType | r in l.get[fName] } <= up }

pred ObjL[objs: set Obj, fName: one FName, fType: set Obj, low: Int] {
  all r: objs | #{ l: fType | r in l.get[fName] } >= low }

pred BidiAssoc[left: set Obj, lFName: one FName, right: set Obj, rFName: one FName] {
  all l: left | all r: l.get[lFName] & right | l in r.get[rFName]
  all r: right | all l: r.get[rFName] & left | r in l.get[lFName] }

pred Composition[wholes: set Obj, fName: one FName, parts: set Obj] {
  all p: parts | lone w: wholes | p in w.get[fName] }

pred attribOfEnumValue[objs: set Obj, fName: one FName] {
  some e: EnumVal | all o: objs | o.get[fName] = e }
";

const OD_LIBRARY: &str = "\
// Semantic variation feature: empty OM
pred emptyOMNotValidOD { some Obj }

// Semantic variation feature: OD completeness
pred allObjectsShownOD[objs: set univ] {
  univ = (objs + FName + auxiliary + Val + EnumVal + Int) }

pred allLinksShownOD[obj: Obj, roleNames: set FName] {
  no {obj.get[FName - roleNames] - Val - EnumVal } }
pred allLinksShownODCmplt[obj: Obj, roleName: one FName,
  partners: set Obj] { obj.get[roleName] = partners }
pred allLinksShownODIncmlt[obj: Obj, roleName: one FName,
  partners: set Obj] { partners in obj.get[roleName] }

pred allAttribShownOD[obj: Obj, definedAttrs: set FName] {
  obj.get.(Val + EnumVal) = definedAttrs }

// Semantic variation feature: object typing
pred strictTypingOD[obj: univ, type: set univ] {
  obj in type }

pred nonStrictTypingOD[obj: univ, subtypes: set univ] {
  obj in subtypes }
";

const CD_LIBRARY: &str = "\
// Semantic variation feature: empty OM
pred emptyOMNotValidCD { some Obj }

// Semantic variation feature: CD completeness
pred allAttribShownCD[objs: set Obj, fName:set FName] {
  no objs.get[FName - fName] }

pred allowMoreAttribCD[objs: set Obj, fName:set FName] {
  all f : (FName - fName) | (
    (no objs.get[f])
    or (one v : Val | all o : objs | o.get[f] = v)
    or attribOfEnumValue[objs, f] ) }

pred allClassesShownCD[objs: set Obj] {
  univ = (objs + FName + auxiliary + Val + EnumVal + Int) }
";

/// The fixed predicate library every module carries.
pub fn library() -> String {
    format!("{STRUCTURE_LIBRARY}\n{OD_LIBRARY}\n{CD_LIBRARY}")
}

/// Removes `//` comments and all whitespace, for comparison.
pub fn normalize(text: &str) -> String {
    text.lines()
        .map(|l| l.split("//").next().unwrap())
        .flat_map(|l| l.chars().filter(|c| !c.is_whitespace()))
        .collect()
}

fn type_sig(ty: &AttrType) -> String {
    match ty {
        AttrType::Int => "type_Int".into(),
        AttrType::Boolean => "type_Boolean".into(),
        AttrType::String => "type_String".into(),
        AttrType::Date => "type_Date".into(),
        AttrType::Enum(e) => format!("{e}Enum"),
    }
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

/// Atom standing for a shown literal, and the signature it extends.
fn literal_atom(lit: &Literal) -> (String, String) {
    match lit {
        Literal::Int(n) if *n < 0 => (format!("Int_m{}", n.unsigned_abs()), "type_Int".into()),
        Literal::Int(n) => (format!("Int_{n}"), "type_Int".into()),
        Literal::Bool(b) => (format!("Boolean_{b}"), "type_Boolean".into()),
        Literal::Str(s) => (format!("String_{}", sanitize(s)), "type_String".into()),
        Literal::Date(s) => (format!("Date_{}", sanitize(s)), "type_Date".into()),
        Literal::Enum { ty, literal } => (format!("{ty}_{literal}"), format!("{ty}Enum")),
    }
}

fn join(items: &[String], sep: &str) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(sep)
    }
}

fn subs(name: &str) -> String {
    format!("{name}Subs")
}

fn mult_args(m: Multiplicity) -> (bool, String) {
    match m.upper {
        Some(u) => (true, format!("{}, {u}", m.lower)),
        None => (false, m.lower.to_string()),
    }
}

/// Body of `pred cd`, named after the class diagram.
pub fn emit_cd_pred(pair: &ResolvedPair, config: &SemanticConfig) -> String {
    let cd = &pair.cd;
    let mut lines: Vec<String> = vec!["// Definition of class attributes".into()];
    for c in &cd.cd.classes {
        for a in cd.attrs(&c.name) {
            lines.push(format!("ObjAttrib[{}, {}, {}]", c.name, a.name, type_sig(&a.ty)));
        }
    }
    lines.push("// Associations".into());
    for a in &cd.cd.associations {
        let (l, r) = (a.end(End::Left), a.end(End::Right));
        if a.navigability == Navigability::Both {
            lines.push(format!("BidiAssoc[{}, {}, {}, {}]", subs(&l.class), r.role, subs(&r.class), l.role));
            for (from, to) in [(r, l), (l, r)] {
                let (bounded, args) = mult_args(to.mult);
                let p = if bounded { "ObjLUAttrib" } else { "ObjLAttrib" };
                lines.push(format!("{p}[{}, {}, {}, {args}]", subs(&from.class), to.role, subs(&to.class)));
            }
        } else {
            let source = if a.navigability.from_end(End::Left) { End::Left } else { End::Right };
            let (from, to) = (a.end(source), a.end(source.other()));
            let (bounded, args) = mult_args(to.mult);
            let p = if bounded { "ObjLUAttrib" } else { "ObjLAttrib" };
            lines.push(format!("{p}[{}, {}, {}, {args}]", subs(&from.class), to.role, subs(&to.class)));
            let (bounded, args) = mult_args(from.mult);
            let p = if bounded { "ObjLU" } else { "ObjL" };
            lines.push(format!("{p}[{}, {}, {}, {args}]", subs(&to.class), to.role, subs(&from.class)));
        }
        if let Some(whole) = a.whole_end() {
            let (w, part) = (a.end(whole), a.end(whole.other()));
            lines.push(format!("Composition[{}, {}, {}]", subs(&w.class), part.role, subs(&part.class)));
        }
    }
    let singletons: Vec<&str> =
        cd.cd.classes.iter().filter(|c| c.is_singleton).map(|c| c.name.as_str()).collect();
    if !singletons.is_empty() {
        lines.push("// Singleton classes".into());
        for s in singletons {
            lines.push(format!("(some Obj) implies one {s}"));
        }
    }
    lines.push("// Semantic variation feature: cd completeness".into());
    for c in &cd.cd.classes {
        let mut fields: Vec<String> = cd.attrs(&c.name).iter().map(|a| a.name.clone()).collect();
        fields.extend(cd.navigable_roles(&c.name).into_iter().map(String::from));
        let p = if config.cd_attributes_complete { "allAttribShownCD" } else { "allowMoreAttribCD" };
        lines.push(format!("{p}[{}, {}]", c.name, join(&fields, "+")));
    }
    if config.cd_classes_complete {
        lines.push(format!("allClassesShownCD[{}]", join(&cd.concrete, "+")));
    }
    if config.cd_empty_om_invalid {
        lines.push("// Semantic variation feature: empty OM".into());
        lines.push("emptyOMNotValidCD".into());
    }
    render_pred(&cd.cd.name, &lines, None)
}

/// Body of `pred od`, named after the object diagram.
pub fn emit_od_pred(pair: &ResolvedPair, config: &SemanticConfig) -> String {
    let od = &pair.od;
    let names: Vec<String> = od.objects.iter().map(|o| o.name.clone()).collect();
    let mut lines: Vec<String> = Vec::new();

    // Typing, grouped by predicate and type in first-occurrence order.
    let mut groups: Vec<((&str, String), Vec<String>)> = Vec::new();
    for (o, decl) in od.objects.iter().enumerate() {
        let key = match &pair.od_types[o] {
            OdType::Resolved(t) if config.od_strict_typing => {
                let target = if pair.cd.class(t).is_some() { t.clone() } else { "none".into() };
                ("strictTypingOD", target)
            }
            OdType::Resolved(t) => ("nonStrictTypingOD", subs(t)),
            OdType::Unknown(u) => ("strictTypingOD", u.clone()),
            OdType::Untyped if config.od_types_complete => ("nonStrictTypingOD", "none".into()),
            OdType::Untyped => continue,
        };
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, objs)) => objs.push(decl.name.clone()),
            None => groups.push((key, vec![decl.name.clone()])),
        }
    }
    if !groups.is_empty() {
        lines.push("// Semantic variation feature: object typing".into());
        for ((p, ty), objs) in groups {
            lines.push(format!("{p}[{}, {ty}]", objs.join(" + ")));
        }
    }

    let shown: Vec<String> = od
        .objects
        .iter()
        .flat_map(|o| {
            o.attributes.iter().map(|(a, lit)| format!("{}.get[{a}] = {}", o.name, literal_atom(lit).0))
        })
        .collect();
    if !shown.is_empty() {
        lines.push("// Attribute values shown in the object diagram".into());
        lines.extend(shown);
    }

    let mut completeness = Vec::new();
    if config.od_links_complete {
        for (o, name) in names.iter().enumerate() {
            let roles: Vec<String> = pair.roles_leaving(o).into_iter().map(String::from).collect();
            completeness.push(format!("allLinksShownOD[{}, {}]", name, join(&roles, " + ")));
        }
    }
    let mut seen: Vec<(usize, &str)> = Vec::new();
    for l in &pair.shown_links {
        if seen.contains(&(l.source, l.role.as_str())) {
            continue;
        }
        seen.push((l.source, &l.role));
        let partners: Vec<String> = pair
            .shown_links
            .iter()
            .filter(|x| x.source == l.source && x.role == l.role)
            .map(|x| names[x.target].clone())
            .collect();
        let partners = if partners.len() == 1 { partners[0].clone() } else { format!("{{{}}}", partners.join(" + ")) };
        let p = if config.od_links_complete { "allLinksShownODCmplt" } else { "allLinksShownODIncmlt" };
        completeness.push(format!("{p}[{}, {}, {partners}]", names[l.source], l.role));
    }
    if config.od_attributes_complete {
        for o in &od.objects {
            let attrs: Vec<String> = o.attributes.iter().map(|(a, _)| a.clone()).collect();
            completeness.push(format!("allAttribShownOD[{}, {}]", o.name, join(&attrs, " + ")));
        }
    }
    if config.od_objects_complete {
        if names.is_empty() {
            completeness.push("no Obj - (FName + auxiliary + Val + EnumVal + Int)".into());
        } else {
            completeness.push(format!("allObjectsShownOD[{}]", names.join(" + ")));
        }
    }
    if !completeness.is_empty() {
        lines.push("// Semantic variation feature: OD completeness".into());
        lines.extend(completeness);
    }
    if config.od_empty_om_invalid {
        lines.push("// Semantic variation feature: empty OM".into());
        lines.push("emptyOMNotValidOD".into());
    }

    let head = (!names.is_empty()).then(|| {
        let some: Vec<String> = names.iter().map(|n| format!("some {n}: Obj")).collect();
        format!("{} |\n  # {{{}}} = {}", some.join(" | "), names.join(" + "), names.len())
    });
    render_pred(&od.name, &lines, head)
}

/// Lays out a predicate. With a quantifier head every clause is joined by
/// `and`; otherwise clauses are juxtaposed.
fn render_pred(name: &str, lines: &[String], head: Option<String>) -> String {
    let mut out = format!("pred {name} {{\n");
    let conjoin = head.is_some();
    if let Some(h) = head {
        writeln!(out, "  {h}").unwrap();
    }
    let mut first = !conjoin;
    let last_clause = lines.iter().rposition(|l| !l.starts_with("//"));
    for (i, l) in lines.iter().enumerate() {
        if l.starts_with("//") {
            writeln!(out, "  {l}").unwrap();
            continue;
        }
        let prefix = if conjoin && !first { "and " } else { "" };
        first = false;
        let close = if Some(i) == last_clause { " }" } else { "" };
        writeln!(out, "  {prefix}{l}{close}").unwrap();
    }
    if last_clause.is_none() {
        out.push_str("}\n");
    }
    out
}

/// The complete module: signatures, subclass functions, the predicate
/// library, both diagram predicates and the run command.
pub fn emit_module(pair: &ResolvedPair, config: &SemanticConfig) -> Result<String> {
    let violations = validate(config);
    if !violations.is_empty() {
        return Err(Error::InvalidConfig(violations));
    }
    let (scope, _) = compute_scope(pair, config, None)?;
    let cd = &pair.cd;
    let od = &pair.od;
    let mut out = String::new();
    writeln!(out, "module {}_{}\n", sanitize(&cd.cd.name), sanitize(&od.name)).unwrap();
    out.push_str(FOUNDATION);

    let mut fields: Vec<String> = Vec::new();
    let mut add = |f: &str| {
        if !fields.iter().any(|x| x == f) {
            fields.push(f.to_string());
        }
    };
    for c in &cd.cd.classes {
        for a in cd.attrs(&c.name) {
            add(&a.name);
        }
    }
    for a in &cd.cd.associations {
        add(&a.end(End::Left).role);
        add(&a.end(End::Right).role);
    }
    for o in &od.objects {
        for (name, _) in &o.attributes {
            add(name);
        }
    }
    for l in &od.links {
        add(&l.role);
    }
    out.push_str("\n// Attribute and role names\n");
    if !fields.is_empty() {
        writeln!(out, "one sig {} extends FName {{}}", fields.join(", ")).unwrap();
    }

    out.push_str("\n// Value types\nsig type_Int, type_Boolean, type_String, type_Date extends Val {}\n");
    for e in &cd.cd.enums {
        writeln!(out, "abstract sig {}Enum extends EnumVal {{}}", e.name).unwrap();
        let atoms: Vec<String> = e.literals.iter().map(|l| format!("{}_{l}", e.name)).collect();
        if !atoms.is_empty() {
            writeln!(out, "one sig {} extends {}Enum {{}}", atoms.join(", "), e.name).unwrap();
        }
    }
    let mut atoms: Vec<(String, String)> = Vec::new();
    for o in &od.objects {
        for (_, lit) in &o.attributes {
            let atom = literal_atom(lit);
            let is_enum_literal = matches!(lit, Literal::Enum { .. });
            if !is_enum_literal && !atoms.contains(&atom) {
                atoms.push(atom);
            }
        }
    }
    for (atom, parent) in &atoms {
        writeln!(out, "one sig {atom} extends {parent} {{}}").unwrap();
    }

    out.push_str("\n// Classes\n");
    for c in &cd.cd.classes {
        let kw = if c.is_abstract { "abstract sig" } else { "sig" };
        writeln!(out, "{kw} {} extends Obj {{}}", c.name).unwrap();
    }
    let unknown = pair.unknown_types();
    if !unknown.is_empty() {
        out.push_str("// Object types the class diagram does not declare\n");
        for u in unknown {
            writeln!(out, "sig {u} extends Obj {{}}").unwrap();
        }
    }
    out.push_str("\n// Subclass functions\n");
    for (name, members) in &cd.closure {
        let members: Vec<String> =
            cd.concrete.iter().filter(|c| members.contains(*c)).cloned().collect();
        writeln!(out, "fun {}: set Obj {{ {} }}", subs(name), join(&members, " + ")).unwrap();
    }

    out.push('\n');
    out.push_str(&library());
    out.push('\n');
    out.push_str(&emit_cd_pred(pair, config));
    out.push('\n');
    out.push_str(&emit_od_pred(pair, config));
    writeln!(out, "\npred consistentCDOD {{ {} and {} }}\n", cd.cd.name, od.name).unwrap();

    let values = scope.values.int.len()
        + 2
        + scope.values.string.len()
        + scope.values.date.len()
        + cd.cd.enums.iter().map(|e| e.literals.len()).sum::<usize>();
    let overall = (scope.max_objects() + values).max(1);
    let mut bounds: Vec<String> = cd
        .concrete
        .iter()
        .map(|c| format!("{} {c}", scope.bound(c).min(scope.max_objects())))
        .collect();
    bounds.insert(0, "4 Int".into());
    writeln!(out, "run consistentCDOD for {overall} but {}", bounds.join(", ")).unwrap();
    Ok(out)
}
