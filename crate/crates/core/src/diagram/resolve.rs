//! Name resolution: subclass closures, flattened attributes, the role
//! table, and classification of object diagram types.

use super::ast::*;
use super::error::{Diagnostic, DiagnosticKind, Diagnostics};
use super::parse::{is_primitive, validate_cd, validate_od};
use std::collections::{BTreeMap, BTreeSet};

/// How a link labeled with some role is realized by an association.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoleRef {
    pub assoc: usize,
    /// End the link leaves from; the role names the other end.
    pub source: End,
    pub navigable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedCd {
    pub cd: ClassDiagram,
    /// Concrete class names in declaration order.
    pub concrete: Vec<String>,
    /// Every class and interface mapped to its concrete descendants.
    pub closure: BTreeMap<String, BTreeSet<String>>,
    /// Reflexive supertypes (classes and interfaces) of every class.
    pub ancestors: BTreeMap<String, BTreeSet<String>>,
    pub flattened: BTreeMap<String, Vec<Attribute>>,
    pub roles: BTreeMap<(String, String), RoleRef>,
}

impl ResolvedCd {
    pub fn new(cd: ClassDiagram) -> Result<Self, Diagnostics> {
        let diags = validate_cd(&cd, None);
        if !diags.is_empty() {
            return Err(Diagnostics(diags));
        }
        let class_by_name: BTreeMap<&str, &ClassDecl> = cd.classes.iter().map(|c| (c.name.as_str(), c)).collect();
        let iface_by_name: BTreeMap<&str, &InterfaceDecl> =
            cd.interfaces.iter().map(|i| (i.name.as_str(), i)).collect();

        let mut iface_ancestors: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for i in &cd.interfaces {
            let mut set = BTreeSet::new();
            let mut stack = vec![i.name.as_str()];
            while let Some(n) = stack.pop() {
                if set.insert(n.to_string()) {
                    stack.extend(iface_by_name[n].extends.iter().map(String::as_str));
                }
            }
            iface_ancestors.insert(i.name.clone(), set);
        }

        let mut ancestors = BTreeMap::new();
        let mut flattened = BTreeMap::new();
        for c in &cd.classes {
            let mut set = BTreeSet::new();
            let mut attrs: Vec<Attribute> = Vec::new();
            let mut cur = Some(*class_by_name.get(c.name.as_str()).unwrap());
            while let Some(class) = cur {
                set.insert(class.name.clone());
                for i in &class.interfaces {
                    set.extend(iface_ancestors[i].iter().cloned());
                }
                for a in &class.attributes {
                    if !attrs.iter().any(|x| x.name == a.name) {
                        attrs.push(a.clone());
                    }
                }
                cur = class.superclass.as_deref().map(|s| class_by_name[s]);
            }
            ancestors.insert(c.name.clone(), set);
            flattened.insert(c.name.clone(), attrs);
        }

        let concrete: Vec<String> = cd.classes.iter().filter(|c| c.is_concrete()).map(|c| c.name.clone()).collect();
        let mut closure: BTreeMap<String, BTreeSet<String>> = cd
            .classes
            .iter()
            .map(|c| &c.name)
            .chain(cd.interfaces.iter().map(|i| &i.name))
            .map(|n| (n.clone(), BTreeSet::new()))
            .collect();
        for c in &concrete {
            for a in &ancestors[c] {
                closure.get_mut(a).unwrap().insert(c.clone());
            }
        }

        // Every subtype of an association end's class owns the role naming
        // the opposite end.
        let types: Vec<&str> =
            cd.classes.iter().map(|c| c.name.as_str()).chain(cd.interfaces.iter().map(|i| i.name.as_str())).collect();
        let is_subtype = |t: &str, of: &str| match ancestors.get(t) {
            Some(set) => set.contains(of),
            None => iface_ancestors[t].contains(of),
        };
        let mut roles = BTreeMap::new();
        let mut diags = Vec::new();
        for (idx, a) in cd.associations.iter().enumerate() {
            for source in [End::Left, End::Right] {
                let from = a.end(source);
                let role = &a.end(source.other()).role;
                for t in &types {
                    if !is_subtype(t, &from.class) {
                        continue;
                    }
                    let key = (t.to_string(), role.clone());
                    let rr = RoleRef { assoc: idx, source, navigable: a.navigability.from_end(source) };
                    if roles.insert(key, rr).is_some() {
                        diags.push(Diagnostic::new(
                            DiagnosticKind::RoleClash,
                            format!("role `{role}` is defined more than once for `{t}`"),
                        ));
                    }
                    if flattened.get(*t).is_some_and(|attrs: &Vec<Attribute>| attrs.iter().any(|x| &x.name == role)) {
                        diags.push(Diagnostic::new(
                            DiagnosticKind::RoleClash,
                            format!("role `{role}` clashes with an attribute of `{t}`"),
                        ));
                    }
                }
            }
        }
        if !diags.is_empty() {
            return Err(Diagnostics(diags));
        }
        Ok(ResolvedCd { cd, concrete, closure, ancestors, flattened, roles })
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.cd.classes.iter().find(|c| c.name == name)
    }

    pub fn is_class_or_interface(&self, name: &str) -> bool {
        self.closure.contains_key(name)
    }

    pub fn is_concrete(&self, name: &str) -> bool {
        self.class(name).is_some_and(|c| c.is_concrete())
    }

    /// Whether concrete class `c` lies in the closure of `of`.
    pub fn conforms(&self, c: &str, of: &str) -> bool {
        self.ancestors.get(c).is_some_and(|a| a.contains(of))
    }

    pub fn attrs(&self, class: &str) -> &[Attribute] {
        self.flattened.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn role(&self, ty: &str, role: &str) -> Option<RoleRef> {
        self.roles.get(&(ty.to_string(), role.to_string())).copied()
    }

    /// Navigable roles leaving `ty`, in association declaration order.
    pub fn navigable_roles(&self, ty: &str) -> Vec<&str> {
        let mut out = Vec::new();
        for a in &self.cd.associations {
            for source in [End::Left, End::Right] {
                let role = &a.end(source.other()).role;
                if a.navigability.from_end(source) && self.role(ty, role).is_some_and(|r| r.source == source) {
                    out.push(role.as_str());
                }
            }
        }
        out
    }

    pub fn enum_decl(&self, name: &str) -> Option<&EnumDecl> {
        self.cd.enums.iter().find(|e| e.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OdType {
    Resolved(String),
    Unknown(String),
    Untyped,
}

/// A link the object diagram requires, by object index. Implied links are
/// the reverse direction of a shown link over a bidirectional association.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShownLink {
    pub source: usize,
    pub role: String,
    pub target: usize,
    pub implied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPair {
    pub cd: ResolvedCd,
    pub od: ObjectDiagram,
    pub od_types: Vec<OdType>,
    pub shown_links: Vec<ShownLink>,
}

impl ResolvedPair {
    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.od.objects.iter().position(|o| o.name == name)
    }

    /// Distinct roles shown leaving object `o`, in first-occurrence order.
    pub fn roles_leaving(&self, o: usize) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for l in self.shown_links.iter().filter(|l| l.source == o) {
            if !out.contains(&l.role.as_str()) {
                out.push(&l.role);
            }
        }
        out
    }

    pub fn unknown_types(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.od_types {
            if let OdType::Unknown(u) = t {
                if !out.contains(&u.as_str()) {
                    out.push(u);
                }
            }
        }
        out
    }
}

pub fn resolve(cd: &ClassDiagram, od: &ObjectDiagram) -> Result<ResolvedPair, Diagnostics> {
    resolve_with(ResolvedCd::new(cd.clone())?, od)
}

pub fn resolve_with(cd: ResolvedCd, od: &ObjectDiagram) -> Result<ResolvedPair, Diagnostics> {
    let mut diags = validate_od(od);
    let mut od_types = Vec::new();
    for o in &od.objects {
        od_types.push(match &o.ty {
            None => OdType::Untyped,
            Some(t) if cd.is_class_or_interface(t) => OdType::Resolved(t.clone()),
            Some(t) if is_primitive(t) || cd.enum_decl(t).is_some() => {
                diags.push(Diagnostic::new(
                    DiagnosticKind::UnresolvedReference,
                    format!("object `{}` is typed with the value type `{t}`", o.name),
                ));
                OdType::Untyped
            }
            Some(t) => OdType::Unknown(t.clone()),
        });
    }
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }
    let index = |n: &str| od.objects.iter().position(|o| o.name == n).unwrap();
    let mut shown_links: Vec<ShownLink> = Vec::new();
    let push = |l: ShownLink, list: &mut Vec<ShownLink>| {
        if !list.iter().any(|x| x.source == l.source && x.role == l.role && x.target == l.target) {
            list.push(l);
        }
    };
    for l in &od.links {
        let l = ShownLink { source: index(&l.source), role: l.role.clone(), target: index(&l.target), implied: false };
        push(l, &mut shown_links);
    }
    let explicit = shown_links.clone();
    for l in &explicit {
        let (OdType::Resolved(ts), OdType::Resolved(_)) = (&od_types[l.source], &od_types[l.target]) else {
            continue;
        };
        let Some(rr) = cd.role(ts, &l.role) else { continue };
        let a = &cd.cd.associations[rr.assoc];
        if a.navigability != Navigability::Both {
            continue;
        }
        let back = a.end(rr.source).role.clone();
        push(ShownLink { source: l.target, role: back, target: l.source, implied: true }, &mut shown_links);
    }
    Ok(ResolvedPair { cd, od: od.clone(), od_types, shown_links })
}
