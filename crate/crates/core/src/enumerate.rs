//! Brute-force bounded enumeration of candidate object models.
//!
//! The search is directed by the object diagram. Any model in both
//! semantics contains an injective image of the diagram's objects; naming
//! those images after the diagram objects loses nothing, so every candidate
//! contains the named objects with an admissible type and the shown
//! attribute values. Remaining objects are anonymous and interchangeable
//! within a class, so their valuations are generated in non-decreasing
//! order. Links are generated per source object with partner counts inside
//! the target multiplicity; links touching foreign objects are invisible
//! to the class diagram and are fixed to the shown ones.

use crate::config::SemanticConfig;
use crate::diagram::{End, Navigability, ResolvedPair};
use crate::error::{Error, Result};
use crate::om::{Link, ObjInstance, ObjType, ObjectModel, Value};
use crate::scope::{admissible_classes, admissible_foreign, anonymous_foreign_tag, hosts, is_exhaustive, Scope};
use crate::semantics::{in_sem_cd, in_sem_od, value_conforms};
use crate::verdict::{Outcome, Stats, Verdict};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone)]
struct Slot {
    id: String,
    ty: ObjType,
    /// Index of the OD object this slot hosts.
    named: Option<usize>,
}

type Valuation = BTreeMap<String, Value>;

/// Mixed-radix counter; `None` once every combination was produced.
#[derive(Debug, Clone)]
struct Odometer {
    radices: Vec<usize>,
    digits: Option<Vec<usize>>,
}

impl Odometer {
    fn new(radices: Vec<usize>) -> Self {
        let mut o = Odometer { radices, digits: None };
        o.reset();
        o
    }

    fn reset(&mut self) {
        self.digits = if self.radices.contains(&0) { None } else { Some(vec![0; self.radices.len()]) };
    }

    fn current(&self) -> Option<&[usize]> {
        self.digits.as_deref()
    }

    fn advance(&mut self) {
        let Some(d) = self.digits.as_mut() else { return };
        for i in (0..d.len()).rev() {
            d[i] += 1;
            if d[i] < self.radices[i] {
                return;
            }
            d[i] = 0;
        }
        self.digits = None;
    }
}

struct ShapeSpace {
    slots: Vec<Slot>,
    valuations: Vec<Vec<Valuation>>,
    /// Pairs of slots whose valuation digits must be non-decreasing.
    ordered: Vec<(usize, usize)>,
    /// Per (source slot, association, source end): candidate target sets.
    link_groups: Vec<(usize, usize, End, Vec<Vec<usize>>)>,
    fixed_links: Vec<Link>,
}

/// Lazily yields candidate object models in a deterministic order, smaller
/// models first.
pub struct OmStream<'a> {
    pair: &'a ResolvedPair,
    config: SemanticConfig,
    scope: Scope,
    shapes: Vec<Vec<Slot>>,
    next_shape: usize,
    space: Option<ShapeSpace>,
    vals: Odometer,
    links: Odometer,
}

pub fn enumerate_oms<'a>(pair: &'a ResolvedPair, config: &SemanticConfig, scope: &Scope) -> Result<OmStream<'a>> {
    if !hosts(pair, config, scope) {
        return Err(Error::ScopeTooSmall(format!(
            "the scope cannot hold the {} objects of `{}`",
            pair.od.objects.len(),
            pair.od.name
        )));
    }
    let shapes = shapes(pair, config, scope);
    Ok(OmStream {
        pair,
        config: *config,
        scope: scope.clone(),
        shapes,
        next_shape: 0,
        space: None,
        vals: Odometer::new(vec![0]),
        links: Odometer::new(vec![0]),
    })
}

fn shapes(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope) -> Vec<Vec<Slot>> {
    let n = pair.od.objects.len();
    let choices: Vec<Vec<ObjType>> = (0..n)
        .map(|o| {
            let mut c: Vec<ObjType> =
                admissible_classes(pair, config, o).into_iter().map(|c| ObjType::Class(c.to_string())).collect();
            if let Some(tag) = admissible_foreign(pair, config, o) {
                c.push(ObjType::Foreign(tag));
            }
            c
        })
        .collect();
    let classes = &pair.cd.concrete;
    let anon_tag = anonymous_foreign_tag(pair);
    let mut out: Vec<Vec<Slot>> = Vec::new();
    let mut named = Odometer::new(choices.iter().map(Vec::len).collect());
    while let Some(digits) = named.current() {
        let types: Vec<&ObjType> = digits.iter().enumerate().map(|(o, &d)| &choices[o][d]).collect();
        let used = |class: &str| types.iter().filter(|t| t.class() == Some(class)).count();
        let used_foreign = types.iter().filter(|t| t.class().is_none()).count();
        let fits = classes.iter().all(|c| used(c) <= scope.bound(c)) && used_foreign <= scope.foreign_max;
        if fits {
            let room = scope.total_max.map_or(usize::MAX, |t| t.saturating_sub(n));
            let mut radices: Vec<usize> = Vec::new();
            if !config.od_objects_complete && room > 0 {
                radices.extend(classes.iter().map(|c| scope.bound(c) - used(c) + 1));
                radices.push(scope.foreign_max - used_foreign + 1);
            }
            let mut anon = Odometer::new(radices);
            while let Some(counts) = anon.current() {
                if counts.iter().sum::<usize>() <= room {
                    let mut slots: Vec<Slot> = pair
                        .od
                        .objects
                        .iter()
                        .zip(&types)
                        .enumerate()
                        .map(|(o, (decl, ty))| Slot { id: decl.name.clone(), ty: (*ty).clone(), named: Some(o) })
                        .collect();
                    for (k, &count) in counts.iter().enumerate() {
                        let (ty, stem) = match classes.get(k) {
                            Some(c) => (ObjType::Class(c.clone()), c.to_lowercase()),
                            None => (ObjType::Foreign(anon_tag.clone()), "other".to_string()),
                        };
                        for i in 1..=count {
                            let mut id = format!("{stem}{i}");
                            while pair.od.object(&id).is_some() {
                                id.push('_');
                            }
                            slots.push(Slot { id, ty: ty.clone(), named: None });
                        }
                    }
                    out.push(slots);
                }
                anon.advance();
            }
        }
        named.advance();
    }
    // Stable: ties keep generation order.
    out.sort_by_key(Vec::len);
    out
}

fn valuations(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope, slot: &Slot) -> Vec<Valuation> {
    let shown: &[(String, crate::diagram::Literal)] = match slot.named {
        Some(o) => &pair.od.objects[o].attributes,
        None => &[],
    };
    let Some(class) = slot.ty.class() else {
        return vec![shown.iter().map(|(k, l)| (k.clone(), Value::from(l))).collect()];
    };
    let attrs = pair.cd.attrs(class);
    let mut base = Valuation::new();
    for (name, lit) in shown {
        if !attrs.iter().any(|a| &a.name == name) {
            if config.cd_attributes_complete {
                return vec![];
            }
            base.insert(name.clone(), Value::from(lit));
        }
    }
    let domains: Vec<Vec<Value>> = attrs
        .iter()
        .map(|a| {
            let dom = scope.values.of(&a.ty).into_iter().filter(|v| value_conforms(&pair.cd, v, &a.ty));
            match shown.iter().find(|(n, _)| *n == a.name) {
                Some((_, lit)) => dom.filter(|v| v.matches(lit)).collect(),
                None => dom.collect(),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut odo = Odometer::new(domains.iter().map(Vec::len).collect());
    while let Some(d) = odo.current() {
        let mut v = base.clone();
        for (k, a) in attrs.iter().enumerate() {
            v.insert(a.name.clone(), domains[k][d[k]].clone());
        }
        out.push(v);
        odo.advance();
    }
    // The image of an OD object shows every attribute it has.
    if slot.named.is_some() && config.od_attributes_complete {
        out.retain(|v| v.len() == shown.len() && v.keys().all(|k| shown.iter().any(|(n, _)| n == k)));
    }
    out
}

fn subsets(n: usize, lower: usize, upper: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| (lower..=upper).contains(&s.len()))
        .collect();
    out.sort_by_key(Vec::len);
    out
}

fn shown(pair: &ResolvedPair, source: usize, role: &str, target: usize) -> bool {
    pair.shown_links.iter().any(|l| l.source == source && l.role == role && l.target == target)
}

/// Whether the links from slot `src` to `option` (and their mirrors under
/// `back`) agree with the shown links when named slots are the images.
fn links_fit(
    pair: &ResolvedPair,
    config: &SemanticConfig,
    slots: &[Slot],
    src: usize,
    option: &[usize],
    role: &str,
    back: Option<&String>,
) -> bool {
    let from = slots[src].named;
    let slot_of = |o: usize| slots.iter().position(|s| s.named == Some(o));
    if let Some(o) = from {
        for l in pair.shown_links.iter().filter(|l| l.source == o && l.role == role) {
            if slot_of(l.target).is_some_and(|t| slots[t].ty.class().is_some() && !option.contains(&t)) {
                return false;
            }
        }
        if let Some(back) = back {
            for l in pair.shown_links.iter().filter(|l| l.target == o && l.role == *back) {
                if slot_of(l.source).is_some_and(|t| slots[t].ty.class().is_some() && !option.contains(&t)) {
                    return false;
                }
            }
        }
    }
    if config.od_links_complete {
        for &t in option {
            let to = slots[t].named;
            let forward_ok = match (from, to) {
                (Some(o), Some(p)) => shown(pair, o, role, p),
                (Some(_), None) => false,
                (None, _) => true,
            };
            let back_ok = match (back, to, from) {
                (None, _, _) | (Some(_), None, _) => true,
                (Some(b), Some(p), Some(o)) => shown(pair, p, b, o),
                (Some(_), Some(_), None) => false,
            };
            if !forward_ok || !back_ok {
                return false;
            }
        }
    }
    true
}

fn build_space(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope, slots: Vec<Slot>) -> ShapeSpace {
    let valuations = slots.iter().map(|s| valuations(pair, config, scope, s)).collect();
    let mut ordered = Vec::new();
    for i in 0..slots.len() {
        if slots[i].named.is_some() {
            continue;
        }
        if let Some(j) = (i + 1..slots.len()).find(|&j| slots[j].named.is_none()) {
            if slots[j].ty == slots[i].ty {
                ordered.push((i, j));
            }
        }
    }
    let mut link_groups = Vec::new();
    for (s, slot) in slots.iter().enumerate() {
        let Some(class) = slot.ty.class() else { continue };
        for (idx, a) in pair.cd.cd.associations.iter().enumerate() {
            for source in [End::Left, End::Right] {
                let primary = match a.navigability {
                    Navigability::Both => source == End::Left,
                    nav => nav.from_end(source),
                };
                if !primary || !pair.cd.conforms(class, &a.end(source).class) {
                    continue;
                }
                let to = a.end(source.other());
                let targets: Vec<usize> = (0..slots.len())
                    .filter(|&t| slots[t].ty.class().is_some_and(|c| pair.cd.conforms(c, &to.class)))
                    .collect();
                let upper = to.mult.upper.map_or(targets.len(), |u| (u as usize).min(targets.len()));
                let bidi = a.navigability == Navigability::Both;
                let options = if to.mult.lower as usize > targets.len() {
                    vec![]
                } else {
                    subsets(targets.len(), to.mult.lower as usize, upper)
                        .into_iter()
                        .map(|sub| sub.into_iter().map(|i| targets[i]).collect::<Vec<usize>>())
                        .filter(|option| {
                            links_fit(pair, config, &slots, s, option, &to.role, bidi.then_some(&a.end(source).role))
                        })
                        .collect()
                };
                link_groups.push((s, idx, source, options));
            }
        }
    }
    let id_of = |o: usize| slots.iter().find(|s| s.named == Some(o)).map(|s| s.id.clone()).unwrap();
    let fixed_links = pair
        .shown_links
        .iter()
        .filter(|l| {
            let foreign = |o: usize| slots.iter().any(|s| s.named == Some(o) && s.ty.class().is_none());
            foreign(l.source) || foreign(l.target)
        })
        .map(|l| Link::new(&id_of(l.source), &l.role, &id_of(l.target)))
        .collect();
    ShapeSpace { slots, valuations, ordered, link_groups, fixed_links }
}

impl Iterator for OmStream<'_> {
    type Item = ObjectModel;

    fn next(&mut self) -> Option<ObjectModel> {
        loop {
            if let Some(space) = &self.space {
                match (self.vals.current(), self.links.current()) {
                    (Some(v), Some(l)) if space.ordered.iter().all(|&(i, j)| v[i] <= v[j]) => {
                        let om = self.build(space, v, l);
                        self.links.advance();
                        return Some(om);
                    }
                    (Some(_), _) => {
                        self.vals.advance();
                        self.links.reset();
                        continue;
                    }
                    (None, _) => {}
                }
            }
            if self.next_shape >= self.shapes.len() {
                self.space = None;
                return None;
            }
            let slots = std::mem::take(&mut self.shapes[self.next_shape]);
            self.next_shape += 1;
            let space = build_space(self.pair, &self.config, &self.scope, slots);
            self.vals = Odometer::new(space.valuations.iter().map(Vec::len).collect());
            self.links = Odometer::new(space.link_groups.iter().map(|g| g.3.len()).collect());
            self.space = Some(space);
        }
    }
}

impl OmStream<'_> {
    fn build(&self, space: &ShapeSpace, vals: &[usize], links: &[usize]) -> ObjectModel {
        let objects = space
            .slots
            .iter()
            .zip(vals)
            .enumerate()
            .map(|(s, (slot, &v))| ObjInstance {
                id: slot.id.clone(),
                ty: slot.ty.clone(),
                attributes: space.valuations[s][v].clone(),
            })
            .collect();
        let mut om_links = space.fixed_links.clone();
        for ((src, idx, source, options), &choice) in space.link_groups.iter().zip(links) {
            let a = &self.pair.cd.cd.associations[*idx];
            let role = &a.end(source.other()).role;
            let back = &a.end(*source).role;
            for &t in &options[choice] {
                let (s_id, t_id) = (&space.slots[*src].id, &space.slots[t].id);
                om_links.push(Link::new(s_id, role, t_id));
                if a.navigability == Navigability::Both {
                    om_links.push(Link::new(t_id, back, s_id));
                }
            }
        }
        // Mirrored self-association links can repeat a generated triple.
        let mut seen = std::collections::BTreeSet::new();
        om_links.retain(|l| seen.insert(l.clone()));
        ObjectModel { objects, links: om_links }
    }
}

/// Decides consistency by enumeration; the first candidate in both
/// semantics is the witness.
pub fn check_enum(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope) -> Result<Verdict> {
    let start = Instant::now();
    let mut stats = Stats::default();
    let mut outcome = None;
    for om in enumerate_oms(pair, config, scope)? {
        stats.candidates += 1;
        if in_sem_cd(&om, &pair.cd, config) && in_sem_od(&om, pair, config) {
            outcome = Some(Outcome::Consistent(om));
            break;
        }
    }
    let exhaustive = is_exhaustive(pair, config, scope);
    let outcome = outcome.unwrap_or(if exhaustive { Outcome::Inconsistent } else { Outcome::UnknownWithinScope });
    stats.micros = start.elapsed().as_micros() as u64;
    Ok(Verdict { outcome, scope: scope.clone(), exhaustive, resource_limited: false, stats })
}
