//! Recursive-descent parsers for the class diagram and object diagram
//! grammars, plus the well-formedness checks that run after parsing.

use super::ast::*;
use super::error::{Diagnostic, DiagnosticKind, Diagnostics, Pos};
use super::lexer::{Cursor, Tok};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Source positions of declarations, indexed like the AST member lists.
#[derive(Debug, Default, Clone)]
pub struct CdSpans {
    pub classes: Vec<Pos>,
    pub interfaces: Vec<Pos>,
    pub enums: Vec<Pos>,
    pub associations: Vec<Pos>,
}

pub fn parse_cd(text: &str) -> Result<ClassDiagram, Diagnostics> {
    let (cd, spans) = parse_cd_syntax(text)?;
    let diags = validate_cd(&cd, Some(&spans));
    if diags.is_empty() {
        Ok(cd)
    } else {
        Err(Diagnostics(diags))
    }
}

fn parse_cd_syntax(text: &str) -> Result<(ClassDiagram, CdSpans), Diagnostic> {
    let mut cur = Cursor::new(text)?;
    let mut spans = CdSpans::default();
    cur.expect_keyword("classdiagram")?;
    let (name, _) = cur.ident()?;
    cur.expect(Tok::LBrace)?;
    let mut cd = ClassDiagram { name, ..Default::default() };

    while *cur.peek() != Tok::RBrace {
        let pos = cur.pos();
        if cur.accept_keyword("enum") {
            let (name, _) = cur.ident()?;
            cur.expect(Tok::LBrace)?;
            let mut literals = vec![cur.ident()?.0];
            while cur.accept(&Tok::Comma) {
                literals.push(cur.ident()?.0);
            }
            cur.expect(Tok::Semi)?;
            cur.expect(Tok::RBrace)?;
            cd.enums.push(EnumDecl { name, literals });
            spans.enums.push(pos);
        } else if cur.accept_keyword("interface") {
            let (name, _) = cur.ident()?;
            let mut extends = Vec::new();
            if cur.accept_keyword("extends") {
                extends = id_list(&mut cur)?;
            }
            cur.expect(Tok::Semi)?;
            cd.interfaces.push(InterfaceDecl { name, extends });
            spans.interfaces.push(pos);
        } else if cur.is_keyword("class") || cur.is_keyword("abstract") || cur.is_keyword("singleton") {
            cd.classes.push(class_decl(&mut cur)?);
            spans.classes.push(pos);
        } else if let Some(kind) = assoc_kind(&cur) {
            cur.next();
            cd.associations.push(assoc_decl(&mut cur, kind)?);
            spans.associations.push(pos);
        } else {
            return Err(cur.unexpected("`class`, `interface`, `enum`, or an association"));
        }
    }
    cur.expect(Tok::RBrace)?;
    cur.expect_eof()?;
    Ok((cd, spans))
}

fn id_list(cur: &mut Cursor) -> Result<Vec<String>, Diagnostic> {
    let mut ids = vec![cur.ident()?.0];
    while cur.accept(&Tok::Comma) {
        ids.push(cur.ident()?.0);
    }
    Ok(ids)
}

fn assoc_kind(cur: &Cursor) -> Option<AssocKind> {
    [AssocKind::Plain, AssocKind::Aggregation, AssocKind::Composition]
        .into_iter()
        .find(|k| cur.is_keyword(k.keyword()))
}

fn class_decl(cur: &mut Cursor) -> Result<ClassDecl, Diagnostic> {
    let is_abstract = cur.accept_keyword("abstract");
    let is_singleton = !is_abstract && cur.accept_keyword("singleton");
    cur.expect_keyword("class")?;
    let (name, _) = cur.ident()?;
    let mut class = ClassDecl::new(name);
    class.is_abstract = is_abstract;
    class.is_singleton = is_singleton;
    if cur.accept_keyword("extends") {
        class.superclass = Some(cur.ident()?.0);
    }
    if cur.accept_keyword("implements") {
        class.interfaces = id_list(cur)?;
    }
    if cur.accept(&Tok::Semi) {
        return Ok(class);
    }
    cur.expect(Tok::LBrace)?;
    while !cur.accept(&Tok::RBrace) {
        let (ty_name, _) = cur.ident()?;
        let ty = match ty_name.as_str() {
            "int" => AttrType::Int,
            "boolean" => AttrType::Boolean,
            "String" => AttrType::String,
            "Date" => AttrType::Date,
            _ => AttrType::Enum(ty_name),
        };
        let (name, _) = cur.ident()?;
        cur.expect(Tok::Semi)?;
        class.attributes.push(Attribute { name, ty });
    }
    Ok(class)
}

fn multiplicity(cur: &mut Cursor) -> Result<Multiplicity, Diagnostic> {
    cur.expect(Tok::LBracket)?;
    if cur.accept(&Tok::Star) {
        cur.expect(Tok::RBracket)?;
        return Ok(Multiplicity::MANY);
    }
    let lower = nat(cur)?;
    let upper = if cur.accept(&Tok::DotDot) {
        if cur.accept(&Tok::Star) {
            None
        } else {
            Some(nat(cur)?)
        }
    } else {
        Some(lower)
    };
    cur.expect(Tok::RBracket)?;
    Ok(Multiplicity { lower, upper })
}

fn nat(cur: &mut Cursor) -> Result<u32, Diagnostic> {
    match *cur.peek() {
        Tok::Int(n) if n >= 0 && n <= u32::MAX as i64 => {
            cur.next();
            Ok(n as u32)
        }
        _ => Err(cur.unexpected("natural number")),
    }
}

fn assoc_decl(cur: &mut Cursor, kind: AssocKind) -> Result<AssocDecl, Diagnostic> {
    let left_mult = if *cur.peek() == Tok::LBracket { multiplicity(cur)? } else { Multiplicity::MANY };
    let (left_class, _) = cur.ident()?;
    cur.expect(Tok::LParen)?;
    let (left_role, _) = cur.ident()?;
    cur.expect(Tok::RParen)?;
    let navigability = match cur.next().tok {
        Tok::Arrow => Navigability::LeftToRight,
        Tok::BackArrow => Navigability::RightToLeft,
        Tok::BiArrow => Navigability::Both,
        other => {
            return Err(Diagnostic::new(
                DiagnosticKind::Syntax,
                format!("expected `->`, `<-`, or `<->`, found {}", other.describe()),
            )
            .at(cur.pos()))
        }
    };
    cur.expect(Tok::LParen)?;
    let (right_role, _) = cur.ident()?;
    cur.expect(Tok::RParen)?;
    let (right_class, _) = cur.ident()?;
    let right_mult = if *cur.peek() == Tok::LBracket { multiplicity(cur)? } else { Multiplicity::MANY };
    cur.expect(Tok::Semi)?;
    Ok(AssocDecl {
        kind,
        left: AssocEnd { class: left_class, role: left_role, mult: left_mult },
        right: AssocEnd { class: right_class, role: right_role, mult: right_mult },
        navigability,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DeclKind {
    Class,
    Interface,
    Enum,
}

/// Checks every class diagram invariant that does not need the role table.
pub fn validate_cd(cd: &ClassDiagram, spans: Option<&CdSpans>) -> Vec<Diagnostic> {
    let class_pos = |i: usize| spans.and_then(|s| s.classes.get(i).copied());
    let iface_pos = |i: usize| spans.and_then(|s| s.interfaces.get(i).copied());
    let enum_pos = |i: usize| spans.and_then(|s| s.enums.get(i).copied());
    let assoc_pos = |i: usize| spans.and_then(|s| s.associations.get(i).copied());
    let mut diags = Vec::new();
    let err = |kind, msg: String, pos| Diagnostic::new(kind, msg).at_opt(pos);

    let mut kinds: HashMap<&str, DeclKind> = HashMap::new();
    let decls = cd
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.as_str(), DeclKind::Class, class_pos(i)))
        .chain(cd.interfaces.iter().enumerate().map(|(i, d)| (d.name.as_str(), DeclKind::Interface, iface_pos(i))))
        .chain(cd.enums.iter().enumerate().map(|(i, e)| (e.name.as_str(), DeclKind::Enum, enum_pos(i))));
    let mut ordered: Vec<_> = decls.collect();
    ordered.sort_by_key(|(_, _, p)| *p);
    for (name, kind, pos) in ordered {
        if is_primitive(name) {
            diags.push(err(DiagnosticKind::DuplicateName, format!("`{name}` is a primitive type name"), pos));
        } else if kinds.insert(name, kind).is_some() {
            diags.push(err(DiagnosticKind::DuplicateName, format!("duplicate declaration of `{name}`"), pos));
        }
    }

    for (i, e) in cd.enums.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for lit in &e.literals {
            if !seen.insert(lit) {
                diags.push(err(
                    DiagnosticKind::DuplicateName,
                    format!("duplicate literal `{lit}` in enum `{}`", e.name),
                    enum_pos(i),
                ));
            }
        }
    }

    let expect_kind = |name: &str, want: DeclKind, what: &str, pos, diags: &mut Vec<Diagnostic>| {
        match kinds.get(name) {
            Some(k) if *k == want => {}
            Some(_) => diags.push(err(
                DiagnosticKind::UnresolvedReference,
                format!("`{name}` is not {what}"),
                pos,
            )),
            None => diags.push(err(
                DiagnosticKind::UnresolvedReference,
                format!("unresolved reference to `{name}`"),
                pos,
            )),
        }
    };

    for (i, c) in cd.classes.iter().enumerate() {
        let pos = class_pos(i);
        if c.is_abstract && c.is_singleton {
            diags.push(err(
                DiagnosticKind::InvalidModifier,
                format!("class `{}` cannot be both abstract and singleton", c.name),
                pos,
            ));
        }
        if let Some(sup) = &c.superclass {
            expect_kind(sup, DeclKind::Class, "a class", pos, &mut diags);
        }
        for iface in &c.interfaces {
            expect_kind(iface, DeclKind::Interface, "an interface", pos, &mut diags);
        }
        let mut seen = BTreeSet::new();
        for attr in &c.attributes {
            if !seen.insert(attr.name.as_str()) {
                diags.push(err(
                    DiagnosticKind::DuplicateAttribute,
                    format!("duplicate attribute `{}` in class `{}`", attr.name, c.name),
                    pos,
                ));
            }
            if let AttrType::Enum(e) = &attr.ty {
                expect_kind(e, DeclKind::Enum, "an enum or primitive type", pos, &mut diags);
            }
        }
    }
    for (i, d) in cd.interfaces.iter().enumerate() {
        for sup in &d.extends {
            expect_kind(sup, DeclKind::Interface, "an interface", iface_pos(i), &mut diags);
        }
    }
    for (i, a) in cd.associations.iter().enumerate() {
        let pos = assoc_pos(i);
        for end in [&a.left, &a.right] {
            match kinds.get(end.class.as_str()) {
                Some(DeclKind::Class | DeclKind::Interface) => {}
                Some(DeclKind::Enum) => diags.push(err(
                    DiagnosticKind::UnresolvedReference,
                    format!("association end `{}` is an enum", end.class),
                    pos,
                )),
                None => diags.push(err(
                    DiagnosticKind::UnresolvedReference,
                    format!("unresolved reference to `{}`", end.class),
                    pos,
                )),
            }
            if end.mult.upper.is_some_and(|u| u < end.mult.lower) {
                diags.push(err(
                    DiagnosticKind::InvalidMultiplicity,
                    format!("multiplicity {} has lower bound above upper bound", end.mult),
                    pos,
                ));
            }
        }
    }
    if !diags.is_empty() {
        return diags;
    }

    // Cycles, then flattened attribute consistency (which assumes acyclicity).
    let class_index: BTreeMap<&str, usize> =
        cd.classes.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    for (i, c) in cd.classes.iter().enumerate() {
        let mut seen = BTreeSet::from([c.name.as_str()]);
        let mut cur = c.superclass.as_deref();
        while let Some(sup) = cur {
            if !seen.insert(sup) {
                diags.push(err(
                    DiagnosticKind::InheritanceCycle,
                    format!("inheritance cycle through class `{}`", c.name),
                    class_pos(i),
                ));
                break;
            }
            cur = cd.classes[class_index[sup]].superclass.as_deref();
        }
    }
    let iface_index: BTreeMap<&str, usize> =
        cd.interfaces.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
    for (i, d) in cd.interfaces.iter().enumerate() {
        if iface_reaches(cd, &iface_index, &d.name, &d.name, &mut BTreeSet::new()) {
            diags.push(err(
                DiagnosticKind::InheritanceCycle,
                format!("inheritance cycle through interface `{}`", d.name),
                iface_pos(i),
            ));
        }
    }
    if !diags.is_empty() {
        return diags;
    }

    for (i, c) in cd.classes.iter().enumerate() {
        let mut types: BTreeMap<&str, &AttrType> = BTreeMap::new();
        let mut cur = Some(c);
        while let Some(class) = cur {
            for attr in &class.attributes {
                match types.get(attr.name.as_str()) {
                    Some(t) if *t != &attr.ty => diags.push(err(
                        DiagnosticKind::DuplicateAttribute,
                        format!(
                            "class `{}` redeclares inherited attribute `{}` with a different type",
                            c.name, attr.name
                        ),
                        class_pos(i),
                    )),
                    Some(_) => {}
                    None => {
                        types.insert(&attr.name, &attr.ty);
                    }
                }
            }
            cur = class.superclass.as_deref().map(|s| &cd.classes[class_index[s]]);
        }
    }

    for (i, a) in cd.associations.iter().enumerate() {
        if a.kind == AssocKind::Composition {
            let whole = a.end(a.whole_end().unwrap_or(End::Left));
            if whole.mult.upper.is_some_and(|u| u == 0) {
                diags.push(err(
                    DiagnosticKind::InvalidComposition,
                    format!("composition whole `{}` has multiplicity {}", whole.class, whole.mult),
                    assoc_pos(i),
                ));
            }
        }
    }
    diags
}

fn iface_reaches<'a>(
    cd: &'a ClassDiagram,
    index: &BTreeMap<&str, usize>,
    from: &'a str,
    goal: &str,
    visited: &mut BTreeSet<&'a str>,
) -> bool {
    for sup in &cd.interfaces[index[from]].extends {
        if sup == goal {
            return true;
        }
        if visited.insert(sup) && iface_reaches(cd, index, sup, goal, visited) {
            return true;
        }
    }
    false
}

pub fn is_primitive(name: &str) -> bool {
    matches!(name, "int" | "boolean" | "String" | "Date")
}

pub fn parse_od(text: &str) -> Result<ObjectDiagram, Diagnostics> {
    let (od, diags) = parse_od_syntax(text)?;
    if diags.is_empty() {
        Ok(od)
    } else {
        Err(Diagnostics(diags))
    }
}

fn parse_od_syntax(text: &str) -> Result<(ObjectDiagram, Vec<Diagnostic>), Diagnostic> {
    let mut cur = Cursor::new(text)?;
    if !cur.accept_keyword("objectdiagram") && !cur.accept_keyword("witness") {
        return Err(cur.unexpected("`objectdiagram`"));
    }
    let (name, _) = cur.ident()?;
    cur.expect(Tok::LBrace)?;
    let mut od = ObjectDiagram { name, ..Default::default() };
    let mut obj_pos: BTreeMap<String, Pos> = BTreeMap::new();
    let mut link_pos = Vec::new();
    let mut diags = Vec::new();

    while *cur.peek() != Tok::RBrace {
        // `link` is a keyword only when followed by `role source ->`.
        let is_link = cur.is_keyword("link")
            && matches!(cur.peek_at(1), Tok::Ident(_))
            && matches!(cur.peek_at(2), Tok::Ident(_));
        if is_link {
            let pos = cur.next().pos;
            let (role, _) = cur.ident()?;
            let (source, _) = cur.ident()?;
            cur.expect(Tok::Arrow)?;
            let (target, _) = cur.ident()?;
            cur.expect(Tok::Semi)?;
            od.links.push(OdLink { role, source, target });
            link_pos.push(pos);
            continue;
        }
        let (name, pos) = cur.ident()?;
        let ty = if cur.accept(&Tok::Colon) { Some(cur.ident()?.0) } else { None };
        let mut attributes: Vec<(String, Literal)> = Vec::new();
        if !cur.accept(&Tok::Semi) {
            cur.expect(Tok::LBrace)?;
            while !cur.accept(&Tok::RBrace) {
                let (attr, apos) = cur.ident()?;
                cur.expect(Tok::Eq)?;
                let lit = literal(&mut cur)?;
                cur.expect(Tok::Semi)?;
                if attributes.iter().any(|(a, _)| *a == attr) {
                    diags.push(
                        Diagnostic::new(
                            DiagnosticKind::DuplicateAttribute,
                            format!("attribute `{attr}` assigned twice on object `{name}`"),
                        )
                        .at(apos),
                    );
                }
                attributes.push((attr, lit));
            }
        }
        if obj_pos.contains_key(&name) {
            diags.push(
                Diagnostic::new(DiagnosticKind::DuplicateName, format!("duplicate object `{name}`")).at(pos),
            );
        } else {
            obj_pos.insert(name.clone(), pos);
        }
        od.objects.push(ObjDecl { name, ty, attributes });
    }
    cur.expect(Tok::RBrace)?;
    cur.expect_eof()?;

    for (link, pos) in od.links.iter().zip(link_pos) {
        for end in [&link.source, &link.target] {
            if !obj_pos.contains_key(end) {
                diags.push(
                    Diagnostic::new(
                        DiagnosticKind::UnresolvedReference,
                        format!("link `{}` refers to undeclared object `{end}`", link.role),
                    )
                    .at(pos),
                );
            }
        }
    }
    Ok((od, diags))
}

fn literal(cur: &mut Cursor) -> Result<Literal, Diagnostic> {
    match cur.peek().clone() {
        Tok::Int(n) => {
            cur.next();
            Ok(Literal::Int(n))
        }
        Tok::Str(s) => {
            cur.next();
            Ok(if is_iso_date(&s) { Literal::Date(s) } else { Literal::Str(s) })
        }
        Tok::Ident(id) if id == "true" || id == "false" => {
            cur.next();
            Ok(Literal::Bool(id == "true"))
        }
        Tok::Ident(ty) => {
            cur.next();
            cur.expect(Tok::Dot)?;
            let (literal, _) = cur.ident()?;
            Ok(Literal::Enum { ty, literal })
        }
        _ => Err(cur.unexpected("literal")),
    }
}

/// Checks object diagram invariants on a programmatically built AST.
pub fn validate_od(od: &ObjectDiagram) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut names = BTreeSet::new();
    for o in &od.objects {
        if !names.insert(o.name.as_str()) {
            diags.push(Diagnostic::new(DiagnosticKind::DuplicateName, format!("duplicate object `{}`", o.name)));
        }
        let mut attrs = BTreeSet::new();
        for (a, _) in &o.attributes {
            if !attrs.insert(a) {
                diags.push(Diagnostic::new(
                    DiagnosticKind::DuplicateAttribute,
                    format!("attribute `{a}` assigned twice on object `{}`", o.name),
                ));
            }
        }
    }
    for l in &od.links {
        for end in [&l.source, &l.target] {
            if !names.contains(end.as_str()) {
                diags.push(Diagnostic::new(
                    DiagnosticKind::UnresolvedReference,
                    format!("link `{}` refers to undeclared object `{end}`", l.role),
                ));
            }
        }
    }
    diags
}
