//! Search bounds and the scope calculator.
//!
//! Attribute values are constrained only by type membership and by
//! equality with object diagram literals, so any domain holding those
//! literals plus one further value admits a witness whenever an unbounded
//! domain would. That is what makes the objects-complete scope exhaustive.

use crate::config::SemanticConfig;
use crate::diagram::{AttrType, Literal, OdType, ResolvedPair};
use crate::error::{Error, Result};
use crate::om::Value;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValueDomains {
    pub int: Vec<i64>,
    pub string: Vec<String>,
    pub date: Vec<String>,
    /// Literals per enum; defaults to every declared literal.
    pub enums: BTreeMap<String, Vec<String>>,
}

impl ValueDomains {
    pub fn of(&self, ty: &AttrType) -> Vec<Value> {
        match ty {
            AttrType::Int => self.int.iter().map(|&n| Value::Int(n)).collect(),
            AttrType::Boolean => vec![Value::Bool(false), Value::Bool(true)],
            AttrType::String => self.string.iter().map(|s| Value::Str(s.clone())).collect(),
            AttrType::Date => self.date.iter().map(|s| Value::Date(s.clone())).collect(),
            AttrType::Enum(e) => self
                .enums
                .get(e)
                .map(|ls| ls.iter().map(|l| Value::Enum { ty: e.clone(), literal: l.clone() }).collect())
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    /// Maximum number of objects of exactly each concrete class.
    pub class_bounds: BTreeMap<String, usize>,
    pub foreign_max: usize,
    /// Optional cap on the total number of objects.
    pub total_max: Option<usize>,
    pub values: ValueDomains,
}

impl Scope {
    pub fn bound(&self, class: &str) -> usize {
        self.class_bounds.get(class).copied().unwrap_or(0)
    }

    /// Largest number of objects any model within this scope can have.
    pub fn max_objects(&self) -> usize {
        let sum = self.class_bounds.values().sum::<usize>() + self.foreign_max;
        self.total_max.map_or(sum, |t| t.min(sum))
    }
}

/// Name used for foreign objects the object diagram does not name.
pub fn anonymous_foreign_tag(pair: &ResolvedPair) -> String {
    let mut tag = "Other".to_string();
    while pair.cd.is_class_or_interface(&tag) || pair.cd.enum_decl(&tag).is_some() || pair.unknown_types().contains(&tag.as_str())
    {
        tag.push('_');
    }
    tag
}

/// Concrete classes an OD object's image may have under the typing mode.
pub fn admissible_classes<'a>(pair: &'a ResolvedPair, config: &SemanticConfig, o: usize) -> Vec<&'a str> {
    match &pair.od_types[o] {
        OdType::Resolved(t) if config.od_strict_typing => {
            if pair.cd.is_concrete(t) {
                vec![pair.cd.concrete.iter().find(|c| *c == t).unwrap().as_str()]
            } else {
                vec![]
            }
        }
        OdType::Resolved(t) => pair.cd.concrete.iter().filter(|c| pair.cd.conforms(c, t)).map(String::as_str).collect(),
        OdType::Untyped if !config.od_types_complete => pair.cd.concrete.iter().map(String::as_str).collect(),
        _ => vec![],
    }
}

/// Foreign tag an OD object's image may have, if any.
pub fn admissible_foreign(pair: &ResolvedPair, config: &SemanticConfig, o: usize) -> Option<String> {
    if config.cd_classes_complete {
        return None;
    }
    match &pair.od_types[o] {
        OdType::Unknown(u) => Some(u.clone()),
        OdType::Untyped if !config.od_types_complete => Some(anonymous_foreign_tag(pair)),
        _ => None,
    }
}

fn required_bound(pair: &ResolvedPair, config: &SemanticConfig, class: &str) -> usize {
    (0..pair.od.objects.len()).filter(|&o| admissible_classes(pair, config, o).contains(&class)).count()
}

fn required_foreign(pair: &ResolvedPair, config: &SemanticConfig) -> usize {
    (0..pair.od.objects.len()).filter(|&o| admissible_foreign(pair, config, o).is_some()).count()
}

struct Literals {
    int: Vec<i64>,
    string: Vec<String>,
    date: Vec<String>,
}

fn literals(pair: &ResolvedPair) -> Literals {
    let mut lits = Literals { int: vec![], string: vec![], date: vec![] };
    fn add<T: PartialEq>(v: &mut Vec<T>, x: T) {
        if !v.contains(&x) {
            v.push(x);
        }
    }
    for o in &pair.od.objects {
        for (_, lit) in &o.attributes {
            match lit {
                Literal::Int(n) => add(&mut lits.int, *n),
                Literal::Str(s) => add(&mut lits.string, s.clone()),
                Literal::Date(s) => {
                    add(&mut lits.date, s.clone());
                    add(&mut lits.string, s.clone());
                }
                Literal::Bool(_) | Literal::Enum { .. } => {}
            }
        }
    }
    lits
}

/// Literals of the object diagram plus `fresh` new values per type.
pub fn value_domains(pair: &ResolvedPair, fresh: usize) -> ValueDomains {
    let lits = literals(pair);
    let mut int = lits.int.clone();
    let mut candidate = 0i64;
    while int.len() < lits.int.len() + fresh {
        if !int.contains(&candidate) {
            int.push(candidate);
        }
        candidate += 1;
    }
    let mut string = lits.string.clone();
    let mut k = 0;
    while string.len() < lits.string.len() + fresh {
        let s = format!("str{k}");
        if !string.contains(&s) {
            string.push(s);
        }
        k += 1;
    }
    let mut date = lits.date.clone();
    let mut day = 0u32;
    while date.len() < lits.date.len() + fresh {
        let s = format!("2000-{:02}-{:02}", day / 28 + 1, day % 28 + 1);
        if !date.contains(&s) {
            date.push(s);
        }
        day += 1;
    }
    let enums = pair.cd.cd.enums.iter().map(|e| (e.name.clone(), e.literals.clone())).collect();
    ValueDomains { int, string, date, enums }
}

fn merge_domains(base: &mut ValueDomains, extra: &ValueDomains) {
    fn merge<T: PartialEq + Clone>(a: &mut Vec<T>, b: &[T]) {
        for x in b {
            if !a.contains(x) {
                a.push(x.clone());
            }
        }
    }
    merge(&mut base.int, &extra.int);
    merge(&mut base.string, &extra.string);
    merge(&mut base.date, &extra.date);
    for (e, ls) in &extra.enums {
        merge(base.enums.entry(e.clone()).or_default(), ls);
    }
}

pub const DEFAULT_CLASS_BOUND: usize = 3;
pub const DEFAULT_FRESH: usize = 2;

/// Documented default for configurations where objects may be omitted:
/// three objects per concrete class (raised where the object diagram needs
/// more), one foreign object when classes may be omitted, and the object
/// diagram's literals plus two fresh values per type.
pub fn default_scope(pair: &ResolvedPair, config: &SemanticConfig) -> Scope {
    sized_scope(pair, config, DEFAULT_CLASS_BOUND, DEFAULT_FRESH, None)
}

fn sized_scope(pair: &ResolvedPair, config: &SemanticConfig, per_class: usize, fresh: usize, total: Option<usize>) -> Scope {
    let class_bounds =
        pair.cd.concrete.iter().map(|c| (c.clone(), per_class.max(required_bound(pair, config, c)))).collect();
    let foreign_max = if config.cd_classes_complete { 0 } else { required_foreign(pair, config).max(1) };
    Scope { class_bounds, foreign_max, total_max: total, values: value_domains(pair, fresh) }
}

/// The smaller scope used when cross-checking the two engines: one object
/// beyond what the object diagram needs per class, at most six objects in
/// total, and one fresh value per type.
pub fn oracle_scope(pair: &ResolvedPair, config: &SemanticConfig) -> Result<Scope> {
    if config.od_objects_complete {
        return compute_scope(pair, config, None).map(|(s, _)| s);
    }
    let class_bounds = pair.cd.concrete.iter().map(|c| (c.clone(), required_bound(pair, config, c) + 1)).collect();
    let foreign_max = if config.cd_classes_complete { 0 } else { required_foreign(pair, config) + 1 };
    let total = (pair.od.objects.len() + 1).min(6).max(pair.od.objects.len());
    Ok(Scope { class_bounds, foreign_max, total_max: Some(total), values: value_domains(pair, 1) })
}

/// Object bounds, set per field; unset fields keep the computed value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScopeOverrides {
    pub class_bounds: BTreeMap<String, usize>,
    pub foreign: Option<usize>,
    pub total: Option<usize>,
    pub fresh: Option<usize>,
}

impl ScopeOverrides {
    /// Parses `Emp=2,foreign=1,total=5,fresh=3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ScopeOverrides::default();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::ScopeSyntax(format!("`{item}` is not key=value")))?;
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::ScopeSyntax(format!("`{value}` is not a natural number")))?;
            match key.trim() {
                "foreign" => out.foreign = Some(n),
                "total" => out.total = Some(n),
                "fresh" => out.fresh = Some(n),
                class => {
                    out.class_bounds.insert(class.to_string(), n);
                }
            }
        }
        Ok(out)
    }

    pub fn to_scope(&self, pair: &ResolvedPair, config: &SemanticConfig) -> Result<Scope> {
        let mut scope = sized_scope(pair, config, DEFAULT_CLASS_BOUND, self.fresh.unwrap_or(DEFAULT_FRESH), self.total);
        for (class, &n) in &self.class_bounds {
            if !pair.cd.is_concrete(class) {
                return Err(Error::ScopeSyntax(format!("`{class}` is not a concrete class")));
            }
            scope.class_bounds.insert(class.clone(), n);
        }
        if let Some(f) = self.foreign {
            scope.foreign_max = f;
        }
        Ok(scope)
    }
}

/// Whether the scope leaves room for every OD object that has some
/// admissible type (objects without one make the pair inconsistent outright).
pub fn hosts(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope) -> bool {
    // Bipartite matching of OD objects onto bounded bins.
    let bins: Vec<(Option<&str>, usize)> = pair
        .cd
        .concrete
        .iter()
        .map(|c| (Some(c.as_str()), scope.bound(c)))
        .chain(std::iter::once((None, scope.foreign_max)))
        .collect();
    let slots: Vec<usize> = bins.iter().enumerate().flat_map(|(i, (_, cap))| std::iter::repeat_n(i, *cap)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; slots.len()];
    let options: Vec<Vec<usize>> = (0..pair.od.objects.len())
        .map(|o| {
            let classes = admissible_classes(pair, config, o);
            let foreign = admissible_foreign(pair, config, o).is_some();
            (0..slots.len())
                .filter(|&s| match bins[slots[s]].0 {
                    Some(c) => classes.contains(&c),
                    None => foreign,
                })
                .collect()
        })
        .collect();
    fn augment(o: usize, options: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &s in &options[o] {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if owner[s].is_none_or(|p| augment(p, options, owner, seen)) {
                owner[s] = Some(o);
                return true;
            }
        }
        false
    }
    let mut hostable = 0;
    for o in 0..pair.od.objects.len() {
        let has_type = !admissible_classes(pair, config, o).is_empty() || admissible_foreign(pair, config, o).is_some();
        if !has_type {
            continue;
        }
        if !augment(o, &options, &mut owner, &mut vec![false; slots.len()]) {
            return false;
        }
        hostable += 1;
    }
    scope.total_max.is_none_or(|t| t >= hostable)
}

/// Scope for a check, and whether it is provably exhaustive.
pub fn compute_scope(pair: &ResolvedPair, config: &SemanticConfig, user: Option<&Scope>) -> Result<(Scope, bool)> {
    if let Some(u) = user {
        if !hosts(pair, config, u) {
            return Err(Error::ScopeTooSmall(format!(
                "the scope cannot hold the {} objects of `{}`",
                pair.od.objects.len(),
                pair.od.name
            )));
        }
    }
    if !config.od_objects_complete {
        let mut scope = match user {
            Some(u) => u.clone(),
            None => default_scope(pair, config),
        };
        merge_domains(&mut scope.values, &value_domains(pair, 0));
        let exhaustive = is_exhaustive(pair, config, &scope);
        return Ok((scope, exhaustive));
    }
    let class_bounds = pair.cd.concrete.iter().map(|c| (c.clone(), required_bound(pair, config, c))).collect();
    let foreign_max = if config.cd_classes_complete { 0 } else { required_foreign(pair, config) };
    let mut values = value_domains(pair, 1);
    if let Some(u) = user {
        merge_domains(&mut values, &u.values);
    }
    let scope = Scope { class_bounds, foreign_max, total_max: Some(pair.od.objects.len()), values };
    Ok((scope, true))
}

/// True iff every model in the intersection can be matched by one inside
/// `scope`: objects are complete, every OD object's possible types fit,
/// and every value domain holds the literals and at least one value.
pub fn is_exhaustive(pair: &ResolvedPair, config: &SemanticConfig, scope: &Scope) -> bool {
    if !config.od_objects_complete {
        return false;
    }
    let counts_fit = pair.cd.concrete.iter().all(|c| scope.bound(c) >= required_bound(pair, config, c))
        && (config.cd_classes_complete || scope.foreign_max >= required_foreign(pair, config))
        && scope.total_max.is_none_or(|t| t >= pair.od.objects.len());
    let lits = literals(pair);
    let v = &scope.values;
    let domains_fit = lits.int.iter().all(|x| v.int.contains(x))
        && lits.string.iter().all(|x| v.string.contains(x))
        && lits.date.iter().all(|x| v.date.contains(x))
        && !v.int.is_empty()
        && !v.string.is_empty()
        && !v.date.is_empty()
        && pair
            .cd
            .cd
            .enums
            .iter()
            .all(|e| v.enums.get(&e.name).is_some_and(|ls| e.literals.iter().all(|l| ls.contains(l))));
    counts_fit && domains_fit
}
