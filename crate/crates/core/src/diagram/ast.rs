//! Abstract syntax of class diagrams and object diagrams.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassDiagram {
    pub name: String,
    pub classes: Vec<ClassDecl>,
    pub interfaces: Vec<InterfaceDecl>,
    pub enums: Vec<EnumDecl>,
    pub associations: Vec<AssocDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub name: String,
    pub is_abstract: bool,
    pub is_singleton: bool,
    pub superclass: Option<String>,
    pub interfaces: Vec<String>,
    pub attributes: Vec<Attribute>,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDecl {
            name: name.into(),
            is_abstract: false,
            is_singleton: false,
            superclass: None,
            interfaces: Vec::new(),
            attributes: Vec::new(),
        }
    }

    pub fn is_concrete(&self) -> bool {
        !self.is_abstract
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterfaceDecl {
    pub name: String,
    pub extends: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumDecl {
    pub name: String,
    pub literals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub ty: AttrType,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AttrType {
    Int,
    Boolean,
    String,
    Date,
    Enum(String),
}

impl fmt::Display for AttrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrType::Int => f.write_str("int"),
            AttrType::Boolean => f.write_str("boolean"),
            AttrType::String => f.write_str("String"),
            AttrType::Date => f.write_str("Date"),
            AttrType::Enum(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssocKind {
    Plain,
    Aggregation,
    Composition,
}

impl AssocKind {
    pub fn keyword(self) -> &'static str {
        match self {
            AssocKind::Plain => "association",
            AssocKind::Aggregation => "aggregation",
            AssocKind::Composition => "composition",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Navigability {
    LeftToRight,
    RightToLeft,
    Both,
}

impl Navigability {
    pub fn arrow(self) -> &'static str {
        match self {
            Navigability::LeftToRight => "->",
            Navigability::RightToLeft => "<-",
            Navigability::Both => "<->",
        }
    }

    /// Whether links may be followed starting at the given end.
    pub fn from_end(self, end: End) -> bool {
        matches!(
            (self, end),
            (Navigability::Both, _)
                | (Navigability::LeftToRight, End::Left)
                | (Navigability::RightToLeft, End::Right)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum End {
    Left,
    Right,
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Left => End::Right,
            End::Right => End::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multiplicity {
    pub lower: u32,
    /// `None` is unbounded (`*`).
    pub upper: Option<u32>,
}

impl Multiplicity {
    pub const MANY: Multiplicity = Multiplicity { lower: 0, upper: None };

    pub fn exactly(n: u32) -> Self {
        Multiplicity { lower: n, upper: Some(n) }
    }

    pub fn range(lower: u32, upper: Option<u32>) -> Self {
        Multiplicity { lower, upper }
    }

    pub fn admits(&self, count: usize) -> bool {
        count >= self.lower as usize && self.upper.is_none_or(|u| count <= u as usize)
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            None if self.lower == 0 => f.write_str("[*]"),
            None => write!(f, "[{}..*]", self.lower),
            Some(u) if u == self.lower => write!(f, "[{u}]"),
            Some(u) => write!(f, "[{}..{u}]", self.lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssocEnd {
    pub class: String,
    /// Names this end; labels links that arrive here.
    pub role: String,
    /// How many objects of this end relate to one object of the other end.
    pub mult: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssocDecl {
    pub kind: AssocKind,
    pub left: AssocEnd,
    pub right: AssocEnd,
    pub navigability: Navigability,
}

impl AssocDecl {
    pub fn end(&self, end: End) -> &AssocEnd {
        match end {
            End::Left => &self.left,
            End::Right => &self.right,
        }
    }

    /// For a composition, the end holding the whole.
    pub fn whole_end(&self) -> Option<End> {
        match (self.kind, self.navigability) {
            (AssocKind::Composition, Navigability::RightToLeft) => Some(End::Right),
            (AssocKind::Composition, _) => Some(End::Left),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ObjectDiagram {
    pub name: String,
    pub objects: Vec<ObjDecl>,
    pub links: Vec<OdLink>,
}

impl ObjectDiagram {
    pub fn object(&self, name: &str) -> Option<&ObjDecl> {
        self.objects.iter().find(|o| o.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjDecl {
    pub name: String,
    pub ty: Option<String>,
    pub attributes: Vec<(String, Literal)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OdLink {
    pub role: String,
    pub source: String,
    pub target: String,
}

impl OdLink {
    pub fn new(role: &str, source: &str, target: &str) -> Self {
        OdLink { role: role.into(), source: source.into(), target: target.into() }
    }
}

/// Attribute value written in an object diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Literal {
    Int(i64),
    Bool(bool),
    Str(String),
    /// A quoted `YYYY-MM-DD` token.
    Date(String),
    Enum { ty: String, literal: String },
}

/// Whether a quoted token has the shape of an ISO-8601 calendar date.
pub fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let digits = |r: std::ops::Range<usize>| b[r].iter().all(u8::is_ascii_digit);
    if !(digits(0..4) && digits(5..7) && digits(8..10)) {
        return false;
    }
    let month: u32 = s[5..7].parse().unwrap_or(0);
    let day: u32 = s[8..10].parse().unwrap_or(0);
    (1..=12).contains(&month) && (1..=31).contains(&day)
}
