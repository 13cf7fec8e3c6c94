//! Object models: the semantic domain both diagram kinds are interpreted in.

use crate::diagram::{print_od_with_header, AttrType, Literal, ObjDecl, ObjectDiagram, OdLink};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value")]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    Date(String),
    Enum { ty: String, literal: String },
}

impl Value {
    pub fn has_type(&self, ty: &AttrType) -> bool {
        matches!(
            (self, ty),
            (Value::Int(_), AttrType::Int)
                | (Value::Bool(_), AttrType::Boolean)
                | (Value::Str(_), AttrType::String)
                | (Value::Date(_), AttrType::Date)
        ) || matches!((self, ty), (Value::Enum { ty: e, .. }, AttrType::Enum(n)) if e == n)
    }

    /// Whether an object diagram literal denotes this value. A quoted date
    /// token also matches a string value with the same text.
    pub fn matches(&self, lit: &Literal) -> bool {
        match (lit, self) {
            (Literal::Int(a), Value::Int(b)) => a == b,
            (Literal::Bool(a), Value::Bool(b)) => a == b,
            (Literal::Str(a), Value::Str(b)) => a == b,
            (Literal::Date(a), Value::Date(b) | Value::Str(b)) => a == b,
            (Literal::Enum { ty, literal }, Value::Enum { ty: t2, literal: l2 }) => ty == t2 && literal == l2,
            _ => false,
        }
    }

    pub fn to_literal(&self) -> Literal {
        match self {
            Value::Int(n) => Literal::Int(*n),
            Value::Bool(b) => Literal::Bool(*b),
            Value::Str(s) => Literal::Str(s.clone()),
            Value::Date(s) => Literal::Date(s.clone()),
            Value::Enum { ty, literal } => Literal::Enum { ty: ty.clone(), literal: literal.clone() },
        }
    }
}

impl From<&Literal> for Value {
    fn from(lit: &Literal) -> Self {
        match lit {
            Literal::Int(n) => Value::Int(*n),
            Literal::Bool(b) => Value::Bool(*b),
            Literal::Str(s) => Value::Str(s.clone()),
            Literal::Date(s) => Value::Date(s.clone()),
            Literal::Enum { ty, literal } => Value::Enum { ty: ty.clone(), literal: literal.clone() },
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::diagram::literal_text(&self.to_literal()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name")]
pub enum ObjType {
    /// A concrete class of the class diagram.
    Class(String),
    /// A class the class diagram does not show.
    Foreign(String),
}

impl ObjType {
    pub fn name(&self) -> &str {
        match self {
            ObjType::Class(n) | ObjType::Foreign(n) => n,
        }
    }

    pub fn class(&self) -> Option<&str> {
        match self {
            ObjType::Class(n) => Some(n),
            ObjType::Foreign(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjInstance {
    pub id: String,
    #[serde(rename = "type")]
    pub ty: ObjType,
    pub attributes: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Link {
    pub source: String,
    pub role: String,
    pub target: String,
}

impl Link {
    pub fn new(source: &str, role: &str, target: &str) -> Self {
        Link { source: source.into(), role: role.into(), target: target.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ObjectModel {
    pub objects: Vec<ObjInstance>,
    pub links: Vec<Link>,
}

impl ObjectModel {
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, id: &str) -> Option<&ObjInstance> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    /// Object and link sets in a canonical order, for structural comparison.
    pub fn normalized(&self) -> ObjectModel {
        let mut om = self.clone();
        om.objects.sort_by(|a, b| a.id.cmp(&b.id));
        om.links.sort();
        om.links.dedup();
        om
    }

    /// The model as an object diagram with most-specific types.
    pub fn to_od(&self, name: &str) -> ObjectDiagram {
        ObjectDiagram {
            name: name.into(),
            objects: self
                .objects
                .iter()
                .map(|o| ObjDecl {
                    name: o.id.clone(),
                    ty: Some(o.ty.name().to_string()),
                    attributes: o.attributes.iter().map(|(k, v)| (k.clone(), v.to_literal())).collect(),
                })
                .collect(),
            links: self.links.iter().map(|l| OdLink::new(&l.role, &l.source, &l.target)).collect(),
        }
    }

    pub fn to_witness_text(&self, name: &str) -> String {
        print_od_with_header(&self.to_od(name), "witness")
    }
}

/// Distinct ids, existing link endpoints, and no repeated link triple.
pub fn om_well_formed(om: &ObjectModel) -> bool {
    let mut ids = BTreeSet::new();
    if !om.objects.iter().all(|o| ids.insert(o.id.as_str())) {
        return false;
    }
    let mut triples = BTreeSet::new();
    om.links
        .iter()
        .all(|l| ids.contains(l.source.as_str()) && ids.contains(l.target.as_str()) && triples.insert(l))
}
