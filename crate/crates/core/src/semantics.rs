//! Membership predicates `om ∈ sem(cd)` and `om ∈ sem(od)` under a
//! configuration. Both engines are judged against these.

use crate::config::SemanticConfig;
use crate::diagram::{AssocKind, AttrType, End, Navigability, OdType, ResolvedCd, ResolvedPair};
use crate::om::{ObjType, ObjectModel, Value};
use std::collections::{BTreeSet, HashMap};

pub fn in_sem_cd(om: &ObjectModel, cd: &ResolvedCd, config: &SemanticConfig) -> bool {
    if config.cd_empty_om_invalid && om.is_empty() {
        return false;
    }
    if config.cd_classes_complete && om.objects.iter().any(|o| matches!(o.ty, ObjType::Foreign(_))) {
        return false;
    }

    for o in &om.objects {
        let Some(class) = o.ty.class() else { continue };
        if !cd.is_concrete(class) {
            return false;
        }
        let attrs = cd.attrs(class);
        for a in attrs {
            match o.attributes.get(&a.name) {
                Some(v) if value_conforms(cd, v, &a.ty) => {}
                _ => return false,
            }
        }
        if config.cd_attributes_complete && o.attributes.keys().any(|k| !attrs.iter().any(|a| &a.name == k)) {
            return false;
        }
    }

    let class_of: HashMap<&str, &str> =
        om.objects.iter().filter_map(|o| o.ty.class().map(|c| (o.id.as_str(), c))).collect();
    // CD links with the association and source end they realize.
    let mut cd_links = Vec::new();
    for l in &om.links {
        let (Some(&ts), Some(&tt)) = (class_of.get(l.source.as_str()), class_of.get(l.target.as_str())) else {
            continue;
        };
        let Some(rr) = cd.role(ts, &l.role) else { return false };
        let a = &cd.cd.associations[rr.assoc];
        if !rr.navigable || !cd.conforms(tt, &a.end(rr.source.other()).class) {
            return false;
        }
        cd_links.push((l, rr));
    }

    let triples: BTreeSet<(&str, &str, &str)> =
        om.links.iter().map(|l| (l.source.as_str(), l.role.as_str(), l.target.as_str())).collect();
    for (l, rr) in &cd_links {
        let a = &cd.cd.associations[rr.assoc];
        if a.navigability == Navigability::Both {
            let back = &a.end(rr.source).role;
            if !triples.contains(&(l.target.as_str(), back.as_str(), l.source.as_str())) {
                return false;
            }
        }
    }

    for (idx, a) in cd.cd.associations.iter().enumerate() {
        for source in [End::Left, End::Right] {
            if !a.navigability.from_end(source) {
                continue;
            }
            let (from, to) = (a.end(source), a.end(source.other()));
            let realizes = |rr: &crate::diagram::RoleRef| rr.assoc == idx && rr.source == source;
            for (id, class) in &class_of {
                if cd.conforms(class, &from.class) {
                    let leaving = cd_links.iter().filter(|(l, rr)| realizes(rr) && l.source == *id).count();
                    if !to.mult.admits(leaving) {
                        return false;
                    }
                }
                if cd.conforms(class, &to.class) {
                    let arriving = cd_links.iter().filter(|(l, rr)| realizes(rr) && l.target == *id).count();
                    if !from.mult.admits(arriving) {
                        return false;
                    }
                }
            }
        }
    }

    let mut owners: HashMap<&str, usize> = HashMap::new();
    for (l, rr) in &cd_links {
        let a = &cd.cd.associations[rr.assoc];
        if a.kind == AssocKind::Composition && a.whole_end() == Some(rr.source) {
            let n = owners.entry(l.target.as_str()).or_default();
            *n += 1;
            if *n > 1 {
                return false;
            }
        }
    }

    if !om.is_empty() {
        for c in cd.cd.classes.iter().filter(|c| c.is_singleton) {
            if om.objects.iter().filter(|o| o.ty.class() == Some(c.name.as_str())).count() != 1 {
                return false;
            }
        }
    }
    true
}

pub fn value_conforms(cd: &ResolvedCd, v: &Value, ty: &AttrType) -> bool {
    if !v.has_type(ty) {
        return false;
    }
    match v {
        Value::Enum { ty, literal } => cd.enum_decl(ty).is_some_and(|e| e.literals.contains(literal)),
        _ => true,
    }
}

/// Whether om object `x` may be the image of OD object `o`, ignoring links.
pub fn object_admissible(om: &ObjectModel, x: usize, pair: &ResolvedPair, o: usize, config: &SemanticConfig) -> bool {
    let obj = &om.objects[x];
    let ok_type = match &pair.od_types[o] {
        OdType::Resolved(t) if config.od_strict_typing => {
            pair.cd.is_concrete(t) && obj.ty.class() == Some(t.as_str())
        }
        OdType::Resolved(t) => obj.ty.class().is_some_and(|c| pair.cd.closure.get(t).is_some_and(|cs| cs.contains(c))),
        OdType::Unknown(u) => obj.ty == ObjType::Foreign(u.clone()),
        OdType::Untyped => !config.od_types_complete,
    };
    if !ok_type {
        return false;
    }
    let shown = &pair.od.objects[o].attributes;
    if !shown.iter().all(|(name, lit)| obj.attributes.get(name).is_some_and(|v| v.matches(lit))) {
        return false;
    }
    if config.od_attributes_complete
        && (obj.attributes.len() != shown.len() || !obj.attributes.keys().all(|k| shown.iter().any(|(n, _)| n == k)))
    {
        return false;
    }
    true
}

pub fn in_sem_od(om: &ObjectModel, pair: &ResolvedPair, config: &SemanticConfig) -> bool {
    find_embedding(om, pair, config).is_some()
}

/// An injective embedding of the OD's objects into `om` witnessing
/// membership, as om object indices in OD object order.
pub fn find_embedding(om: &ObjectModel, pair: &ResolvedPair, config: &SemanticConfig) -> Option<Vec<usize>> {
    let n = pair.od.objects.len();
    if config.od_empty_om_invalid && om.is_empty() {
        return None;
    }
    if config.od_objects_complete && om.objects.len() != n {
        return None;
    }
    if n > om.objects.len() {
        return None;
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|o| (0..om.objects.len()).filter(|&x| object_admissible(om, x, pair, o, config)).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let index: HashMap<&str, usize> = om.objects.iter().enumerate().map(|(i, o)| (o.id.as_str(), i)).collect();
    let links: BTreeSet<(usize, &str, usize)> = om
        .links
        .iter()
        .filter_map(|l| Some((*index.get(l.source.as_str())?, l.role.as_str(), *index.get(l.target.as_str())?)))
        .collect();
    let mut search = Embedding { pair, config, candidates, links, mu: vec![usize::MAX; n], used: vec![false; om.objects.len()] };
    if search.extend(0) {
        Some(search.mu)
    } else {
        None
    }
}

struct Embedding<'a> {
    pair: &'a ResolvedPair,
    config: &'a SemanticConfig,
    candidates: Vec<Vec<usize>>,
    links: BTreeSet<(usize, &'a str, usize)>,
    mu: Vec<usize>,
    used: Vec<bool>,
}

impl Embedding<'_> {
    fn extend(&mut self, o: usize) -> bool {
        if o == self.mu.len() {
            return !self.config.od_links_complete || self.links_exact();
        }
        for i in 0..self.candidates[o].len() {
            let x = self.candidates[o][i];
            if self.used[x] {
                continue;
            }
            self.mu[o] = x;
            if self.shown_links_hold(o) {
                self.used[x] = true;
                if self.extend(o + 1) {
                    return true;
                }
                self.used[x] = false;
            }
        }
        self.mu[o] = usize::MAX;
        false
    }

    /// Shown links whose endpoints are both mapped once `o` is mapped.
    fn shown_links_hold(&self, o: usize) -> bool {
        self.pair.shown_links.iter().all(|l| {
            let (s, t) = (l.source, l.target);
            if s > o || t > o || (s != o && t != o) {
                return true;
            }
            self.links.contains(&(self.mu[s], l.role.as_str(), self.mu[t]))
        })
    }

    fn links_exact(&self) -> bool {
        for (o, &x) in self.mu.iter().enumerate() {
            let expected: BTreeSet<(&str, usize)> = self
                .pair
                .shown_links
                .iter()
                .filter(|l| l.source == o)
                .map(|l| (l.role.as_str(), self.mu[l.target]))
                .collect();
            let actual: BTreeSet<(&str, usize)> =
                self.links.iter().filter(|(s, _, _)| *s == x).map(|(_, r, t)| (*r, *t)).collect();
            if expected != actual {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_cd, parse_od, resolve};
    use crate::om::{Link, ObjInstance};
    use std::collections::BTreeMap;

    fn obj(id: &str, ty: &str, attrs: &[(&str, Value)]) -> ObjInstance {
        ObjInstance {
            id: id.into(),
            ty: ObjType::Class(ty.into()),
            attributes: attrs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
        }
    }

    #[test]
    fn composition_single_owner() {
        let cd = parse_cd("classdiagram C { class W; class P; composition W (w) -> (p) P; }").unwrap();
        let pair = resolve(&cd, &parse_od("objectdiagram E { }").unwrap()).unwrap();
        let cfg = SemanticConfig::from_index(0);
        let mut om = ObjectModel {
            objects: vec![obj("w1", "W", &[]), obj("w2", "W", &[]), obj("p", "P", &[])],
            links: vec![Link::new("w1", "p", "p")],
        };
        assert!(in_sem_cd(&om, &pair.cd, &cfg));
        om.links.push(Link::new("w2", "p", "p"));
        assert!(!in_sem_cd(&om, &pair.cd, &cfg));
    }

    #[test]
    fn singleton_exactly_one() {
        let cd = parse_cd("classdiagram S { singleton class Reg; class A; }").unwrap();
        let pair = resolve(&cd, &parse_od("objectdiagram E { }").unwrap()).unwrap();
        let cfg = SemanticConfig::from_index(0);
        assert!(in_sem_cd(&ObjectModel::default(), &pair.cd, &cfg));
        let one = ObjectModel { objects: vec![obj("a", "A", &[])], links: vec![] };
        assert!(!in_sem_cd(&one, &pair.cd, &cfg));
        let two = ObjectModel { objects: vec![obj("a", "A", &[]), obj("r", "Reg", &[])], links: vec![] };
        assert!(in_sem_cd(&two, &pair.cd, &cfg));
    }

    #[test]
    fn non_navigable_label_rejected() {
        let cd = parse_cd("classdiagram N { class A; class B; association A (a) -> (b) B; }").unwrap();
        let pair = resolve(&cd, &parse_od("objectdiagram E { }").unwrap()).unwrap();
        let cfg = SemanticConfig::from_index(0);
        let fwd = ObjectModel { objects: vec![obj("x", "A", &[]), obj("y", "B", &[])], links: vec![Link::new("x", "b", "y")] };
        assert!(in_sem_cd(&fwd, &pair.cd, &cfg));
        let back = ObjectModel { objects: fwd.objects.clone(), links: vec![Link::new("y", "a", "x")] };
        assert!(!in_sem_cd(&back, &pair.cd, &cfg));
    }

    #[test]
    fn links_complete_forbids_extra_partners() {
        let cd = parse_cd("classdiagram N { class A; association A (a) -> (b) A; }").unwrap();
        let od = parse_od("objectdiagram O { x:A; y:A; link b x -> y; }").unwrap();
        let pair = resolve(&cd, &od).unwrap();
        let mut cfg = SemanticConfig::from_index(0);
        let om = ObjectModel {
            objects: vec![obj("x", "A", &[]), obj("y", "A", &[])],
            links: vec![Link::new("x", "b", "y"), Link::new("x", "b", "x")],
        };
        assert!(in_sem_od(&om, &pair, &cfg));
        cfg.od_objects_complete = true;
        cfg.od_links_complete = true;
        assert!(!in_sem_od(&om, &pair, &cfg));
    }
}
