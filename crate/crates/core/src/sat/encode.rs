// Slot-indexed loops read more plainly than zipped iterators here.
#![allow(clippy::needless_range_loop)]

use super::cnf::{Cnf, Lit};
use super::VarMeaning;
use crate::config::SemanticConfig;
use crate::diagram::{AssocKind, End, Multiplicity, Navigability, OdType, ResolvedPair};
use crate::om::{Link, ObjInstance, ObjType, ObjectModel, Value};
use crate::scope::{anonymous_foreign_tag, Scope};
use crate::semantics::value_conforms;
use std::collections::{BTreeMap, HashMap};

/// A CNF instance over `n` object slots together with what is needed to
/// read a model back. Slots are filled from slot 0 upwards.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub cnf: Cnf,
    kinds: Vec<ObjType>,
    ex: Vec<Lit>,
    ty: Vec<Vec<Lit>>,
    attrs: Vec<String>,
    values: Vec<Vec<Value>>,
    val: Vec<Vec<Vec<Lit>>>,
    roles: Vec<String>,
    lk: Vec<Vec<Vec<Lit>>>,
    em: Vec<Vec<Lit>>,
    od_names: Vec<String>,
}

impl Encoding {
    pub fn slots(&self) -> usize {
        self.ex.len()
    }
}

struct Builder<'a> {
    pair: &'a ResolvedPair,
    cnf: Cnf,
    kinds: Vec<ObjType>,
    n_classes: usize,
    ty: Vec<Vec<Lit>>,
    in_cache: HashMap<(usize, String), Lit>,
}

impl Builder<'_> {
    /// Literal for "slot `s` holds an instance of some subtype of `class`".
    fn in_class(&mut self, s: usize, class: &str) -> Lit {
        if let Some(&l) = self.in_cache.get(&(s, class.to_string())) {
            return l;
        }
        let members: Vec<Lit> = self.kinds[..self.n_classes]
            .iter()
            .enumerate()
            .filter(|(_, k)| self.pair.cd.conforms(k.name(), class))
            .map(|(i, _)| self.ty[s][i])
            .collect();
        let v = self.cnf.var(VarMeaning::InClass { slot: s, class: class.to_string() });
        self.cnf.define_or(v, &members);
        self.in_cache.insert((s, class.to_string()), v);
        v
    }

    fn within(&mut self, terms: &[Lit], mult: Multiplicity, guard: Lit) {
        self.cnf.at_least(terms, mult.lower as usize, Some(guard));
        if let Some(u) = mult.upper {
            self.cnf.at_most(terms, u as usize, Some(guard));
        }
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

pub fn encode(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope) -> Encoding {
    let cd = &pair.cd;
    let n = scope.max_objects();
    let mut kinds: Vec<ObjType> = cd.concrete.iter().map(|c| ObjType::Class(c.clone())).collect();
    let n_classes = kinds.len();
    if !config.cd_classes_complete && scope.foreign_max > 0 {
        kinds.extend(pair.unknown_types().into_iter().map(|u| ObjType::Foreign(u.to_string())));
        kinds.push(ObjType::Foreign(anonymous_foreign_tag(pair)));
    }

    let mut cnf = Cnf::default();
    let ex: Vec<Lit> = (0..n).map(|slot| cnf.var(VarMeaning::Exists { slot })).collect();
    let ty: Vec<Vec<Lit>> = (0..n)
        .map(|slot| kinds.iter().map(|k| cnf.var(VarMeaning::Type { slot, ty: k.clone() })).collect())
        .collect();
    let shown: Vec<Lit> = (0..n).map(|slot| cnf.var(VarMeaning::Shown { slot })).collect();
    for s in 0..n {
        cnf.at_least(&ty[s], 1, Some(ex[s]));
        cnf.at_most(&ty[s], 1, None);
        for &t in &ty[s] {
            cnf.clause([-t, ex[s]]);
        }
        cnf.define_or(shown[s], &ty[s][..n_classes]);
        if s + 1 < n {
            cnf.clause([-ex[s + 1], ex[s]]);
        }
    }
    for k in 0..n_classes {
        let lits: Vec<Lit> = (0..n).map(|s| ty[s][k]).collect();
        cnf.at_most(&lits, scope.bound(kinds[k].name()), None);
    }
    let foreign: Vec<Lit> = (0..n).flat_map(|s| ty[s][n_classes..].iter().copied()).collect();
    cnf.at_most(&foreign, scope.foreign_max, None);
    if config.cd_empty_om_invalid || config.od_empty_om_invalid {
        cnf.clause(ex.first().copied());
    }

    // Attribute values. The pool holds every name a witness could need.
    let mut attrs: Vec<String> = Vec::new();
    for c in &cd.concrete {
        for a in cd.attrs(c) {
            push_unique(&mut attrs, a.name.clone());
        }
    }
    for o in &pair.od.objects {
        for (name, _) in &o.attributes {
            push_unique(&mut attrs, name.clone());
        }
    }
    let mut values: Vec<Vec<Value>> = vec![Vec::new(); attrs.len()];
    for c in &cd.concrete {
        for a in cd.attrs(c) {
            let i = attrs.iter().position(|x| *x == a.name).unwrap();
            for v in scope.values.of(&a.ty) {
                if value_conforms(cd, &v, &a.ty) {
                    push_unique(&mut values[i], v);
                }
            }
        }
    }
    for o in &pair.od.objects {
        for (name, lit) in &o.attributes {
            let i = attrs.iter().position(|x| x == name).unwrap();
            if !values[i].iter().any(|v| v.matches(lit)) {
                values[i].push(Value::from(lit));
            }
        }
    }
    let mut val: Vec<Vec<Vec<Lit>>> = Vec::with_capacity(n);
    let mut has: Vec<Vec<Lit>> = Vec::with_capacity(n);
    for s in 0..n {
        let mut vs = Vec::new();
        let mut hs = Vec::new();
        for (a, name) in attrs.iter().enumerate() {
            let lits: Vec<Lit> = values[a]
                .iter()
                .map(|v| cnf.var(VarMeaning::AttrValue { slot: s, attr: name.clone(), value: v.clone() }))
                .collect();
            let h = cnf.var(VarMeaning::HasAttr { slot: s, attr: name.clone() });
            cnf.define_or(h, &lits);
            cnf.at_most(&lits, 1, None);
            cnf.clause([-h, ex[s]]);
            vs.push(lits);
            hs.push(h);
        }
        val.push(vs);
        has.push(hs);
    }
    for s in 0..n {
        for k in 0..n_classes {
            let class_attrs = cd.attrs(kinds[k].name());
            for (a, name) in attrs.iter().enumerate() {
                match class_attrs.iter().find(|x| &x.name == name) {
                    Some(attr) => {
                        cnf.clause([-ty[s][k], has[s][a]]);
                        for (v, value) in values[a].iter().enumerate() {
                            if !value_conforms(cd, value, &attr.ty) {
                                cnf.clause([-ty[s][k], -val[s][a][v]]);
                            }
                        }
                    }
                    None if config.cd_attributes_complete => cnf.clause([-ty[s][k], -has[s][a]]),
                    None => {}
                }
            }
        }
    }

    // Links.
    let mut roles: Vec<String> = Vec::new();
    for a in &cd.cd.associations {
        for source in [End::Left, End::Right] {
            if a.navigability.from_end(source) {
                push_unique(&mut roles, a.end(source.other()).role.clone());
            }
        }
    }
    for l in &pair.shown_links {
        push_unique(&mut roles, l.role.clone());
    }
    let role_index = |r: &str| roles.iter().position(|x| x == r).unwrap();
    let lk: Vec<Vec<Vec<Lit>>> = (0..n)
        .map(|s| {
            roles
                .iter()
                .map(|r| {
                    (0..n)
                        .map(|t| cnf.var(VarMeaning::Link { source: s, role: r.clone(), target: t }))
                        .collect()
                })
                .collect()
        })
        .collect();
    for s in 0..n {
        for r in 0..roles.len() {
            for t in 0..n {
                cnf.clause([-lk[s][r][t], ex[s]]);
                cnf.clause([-lk[s][r][t], ex[t]]);
            }
        }
    }

    let mut b = Builder { pair, cnf, kinds, n_classes, ty, in_cache: HashMap::new() };

    // Links between class objects must realize a navigable role, reach a
    // conforming target, and be mirrored over bidirectional associations.
    for s in 0..n {
        for k in 0..n_classes {
            let class = b.kinds[k].name().to_string();
            let tys = b.ty[s][k];
            for (r, role) in roles.iter().enumerate() {
                match cd.role(&class, role) {
                    Some(rr) if rr.navigable => {
                        let a = &cd.cd.associations[rr.assoc];
                        let target_class = &a.end(rr.source.other()).class;
                        let back = (a.navigability == Navigability::Both).then(|| role_index(&a.end(rr.source).role));
                        for t in 0..n {
                            let conf = b.in_class(t, target_class);
                            b.cnf.clause([-tys, -lk[s][r][t], -shown[t], conf]);
                            if let Some(back) = back {
                                b.cnf.clause([-tys, -lk[s][r][t], -shown[t], lk[t][back][s]]);
                            }
                        }
                    }
                    _ => {
                        for t in 0..n {
                            b.cnf.clause([-tys, -lk[s][r][t], -shown[t]]);
                        }
                    }
                }
            }
        }
    }

    for a in &cd.cd.associations {
        for source in [End::Left, End::Right] {
            if !a.navigability.from_end(source) {
                continue;
            }
            let (from, to) = (a.end(source), a.end(source.other()));
            let r = role_index(&to.role);
            let trivial = |m: Multiplicity| m.lower == 0 && m.upper.is_none();
            if !trivial(to.mult) {
                for s in 0..n {
                    let guard = b.in_class(s, &from.class);
                    let terms: Vec<Lit> = (0..n).map(|t| b.cnf.and(lk[s][r][t], shown[t], "leaving")).collect();
                    b.within(&terms, to.mult, guard);
                }
            }
            if !trivial(from.mult) {
                for t in 0..n {
                    let guard = b.in_class(t, &to.class);
                    let terms: Vec<Lit> = (0..n)
                        .map(|s| {
                            let src = b.in_class(s, &from.class);
                            b.cnf.and(lk[s][r][t], src, "arriving")
                        })
                        .collect();
                    b.within(&terms, from.mult, guard);
                }
            }
        }
    }

    for t in 0..n {
        let mut terms = Vec::new();
        for a in &cd.cd.associations {
            let Some(whole) = a.whole_end() else { continue };
            if a.kind != AssocKind::Composition || !a.navigability.from_end(whole) {
                continue;
            }
            let r = role_index(&a.end(whole.other()).role);
            for s in 0..n {
                let src = b.in_class(s, &a.end(whole).class);
                terms.push(b.cnf.and(lk[s][r][t], src, "owner"));
            }
        }
        b.cnf.at_most(&terms, 1, Some(shown[t]));
    }

    if n > 0 {
        for c in cd.cd.classes.iter().filter(|c| c.is_singleton && c.is_concrete()) {
            let k = cd.concrete.iter().position(|x| *x == c.name).unwrap();
            let lits: Vec<Lit> = (0..n).map(|s| b.ty[s][k]).collect();
            b.cnf.at_most(&lits, 1, None);
            b.cnf.at_least(&lits, 1, Some(ex[0]));
        }
    }

    // Embedding of the object diagram.
    let m = pair.od.objects.len();
    let em: Vec<Vec<Lit>> = (0..m)
        .map(|o| {
            let object = pair.od.objects[o].name.clone();
            (0..n).map(|slot| b.cnf.var(VarMeaning::Embed { object: object.clone(), slot })).collect()
        })
        .collect();
    for o in 0..m {
        b.cnf.exactly_one(&em[o], None);
    }
    for s in 0..n {
        let col: Vec<Lit> = (0..m).map(|o| em[o][s]).collect();
        b.cnf.at_most(&col, 1, None);
        for &e in &col {
            b.cnf.clause([-e, ex[s]]);
        }
        if config.od_objects_complete {
            b.cnf.clause(std::iter::once(-ex[s]).chain(col.iter().copied()));
        }
    }
    for o in 0..m {
        let decl = &pair.od.objects[o];
        for s in 0..n {
            let e = em[o][s];
            match &pair.od_types[o] {
                OdType::Resolved(t) if config.od_strict_typing => match cd.concrete.iter().position(|c| c == t) {
                    Some(k) => b.cnf.clause([-e, b.ty[s][k]]),
                    None => b.cnf.clause([-e]),
                },
                OdType::Resolved(t) => {
                    let l = b.in_class(s, t);
                    b.cnf.clause([-e, l]);
                }
                OdType::Unknown(u) => match b.kinds.iter().position(|k| *k == ObjType::Foreign(u.clone())) {
                    Some(k) => b.cnf.clause([-e, b.ty[s][k]]),
                    None => b.cnf.clause([-e]),
                },
                OdType::Untyped if config.od_types_complete => b.cnf.clause([-e]),
                OdType::Untyped => {}
            }
            for (name, lit) in &decl.attributes {
                let a = attrs.iter().position(|x| x == name).unwrap();
                let matching = values[a].iter().enumerate().filter(|(_, v)| v.matches(lit)).map(|(i, _)| val[s][a][i]);
                b.cnf.clause(std::iter::once(-e).chain(matching));
            }
            if config.od_attributes_complete {
                for (a, name) in attrs.iter().enumerate() {
                    if !decl.attributes.iter().any(|(x, _)| x == name) {
                        b.cnf.clause([-e, -has[s][a]]);
                    }
                }
            }
        }
    }
    for l in &pair.shown_links {
        let r = role_index(&l.role);
        for s in 0..n {
            for t in 0..n {
                if (l.source == l.target) != (s == t) {
                    continue;
                }
                b.cnf.clause([-em[l.source][s], -em[l.target][t], lk[s][r][t]]);
            }
        }
    }
    if config.od_links_complete {
        for o in 0..m {
            for (r, role) in roles.iter().enumerate() {
                let partners: Vec<usize> =
                    pair.shown_links.iter().filter(|l| l.source == o && l.role == *role).map(|l| l.target).collect();
                for s in 0..n {
                    for t in 0..n {
                        let allowed = partners.iter().map(|&p| em[p][t]);
                        b.cnf.clause([-em[o][s], -lk[s][r][t]].into_iter().chain(allowed));
                    }
                }
            }
        }
    }

    Encoding {
        cnf: b.cnf,
        kinds: b.kinds,
        ex,
        ty: b.ty,
        attrs,
        values,
        val,
        roles,
        lk,
        em,
        od_names: pair.od.objects.iter().map(|o| o.name.clone()).collect(),
    }
}

/// Reads the object model out of a satisfying assignment.
pub fn decode(enc: &Encoding, model: &[bool]) -> ObjectModel {
    let holds = |l: Lit| model[l as usize - 1];
    let n = enc.slots();
    let live: Vec<usize> = (0..n).filter(|&s| holds(enc.ex[s])).collect();
    let mut ids: BTreeMap<usize, String> = BTreeMap::new();
    for (o, row) in enc.em.iter().enumerate() {
        if let Some(s) = (0..n).find(|&s| holds(row[s])) {
            ids.insert(s, enc.od_names[o].clone());
        }
    }
    let mut objects = Vec::new();
    for &s in &live {
        let k = enc.ty[s].iter().position(|&l| holds(l)).expect("existing slot has a type");
        let ty = enc.kinds[k].clone();
        if !ids.contains_key(&s) {
            let stem = ty.name().to_lowercase();
            let id = (1..)
                .map(|i| format!("{stem}{i}"))
                .find(|c| !ids.values().any(|x| x == c) && !enc.od_names.contains(c))
                .unwrap();
            ids.insert(s, id);
        }
        let mut attributes = BTreeMap::new();
        for (a, name) in enc.attrs.iter().enumerate() {
            if let Some(v) = enc.val[s][a].iter().position(|&l| holds(l)) {
                attributes.insert(name.clone(), enc.values[a][v].clone());
            }
        }
        objects.push(ObjInstance { id: ids[&s].clone(), ty, attributes });
    }
    let mut links = Vec::new();
    for &s in &live {
        for (r, role) in enc.roles.iter().enumerate() {
            for &t in &live {
                if holds(enc.lk[s][r][t]) {
                    links.push(Link::new(&ids[&s], role, &ids[&t]));
                }
            }
        }
    }
    ObjectModel { objects, links }
}
