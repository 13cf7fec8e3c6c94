//! Semantic configurations: nine binary choices and three cross-tree
//! constraints.

use crate::diagram::lexer::{Cursor, Tok};
use crate::diagram::{Diagnostic, DiagnosticKind, Diagnostics, OdType, ResolvedPair};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One valuation of the semantic choices. Every flag is the restrictive
/// reading: setting it never enlarges a diagram's semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemanticConfig {
    pub cd_empty_om_invalid: bool,
    pub cd_attributes_complete: bool,
    pub cd_classes_complete: bool,
    pub od_empty_om_invalid: bool,
    pub od_objects_complete: bool,
    pub od_links_complete: bool,
    pub od_attributes_complete: bool,
    pub od_types_complete: bool,
    pub od_strict_typing: bool,
}

/// Config-file keys in canonical field order, with their (set, unset) words.
pub const KEYS: [(&str, &str, &str); 9] = [
    ("cd.emptyOM", "invalid", "valid"),
    ("cd.attributes", "complete", "incomplete"),
    ("cd.classes", "complete", "incomplete"),
    ("od.emptyOM", "invalid", "valid"),
    ("od.objects", "complete", "incomplete"),
    ("od.links", "complete", "incomplete"),
    ("od.attributes", "complete", "incomplete"),
    ("od.types", "complete", "incomplete"),
    ("od.typing", "strict", "nonstrict"),
];

impl SemanticConfig {
    pub fn flags(&self) -> [bool; 9] {
        [
            self.cd_empty_om_invalid,
            self.cd_attributes_complete,
            self.cd_classes_complete,
            self.od_empty_om_invalid,
            self.od_objects_complete,
            self.od_links_complete,
            self.od_attributes_complete,
            self.od_types_complete,
            self.od_strict_typing,
        ]
    }

    pub fn from_flags(f: [bool; 9]) -> Self {
        SemanticConfig {
            cd_empty_om_invalid: f[0],
            cd_attributes_complete: f[1],
            cd_classes_complete: f[2],
            od_empty_om_invalid: f[3],
            od_objects_complete: f[4],
            od_links_complete: f[5],
            od_attributes_complete: f[6],
            od_types_complete: f[7],
            od_strict_typing: f[8],
        }
    }

    /// Position in the canonical order; the first field is the most
    /// significant bit.
    pub fn index(&self) -> u16 {
        self.flags().iter().fold(0, |acc, &b| (acc << 1) | b as u16)
    }

    pub fn from_index(i: u16) -> Self {
        let mut f = [false; 9];
        for (k, slot) in f.iter_mut().enumerate() {
            *slot = (i >> (8 - k)) & 1 == 1;
        }
        Self::from_flags(f)
    }

    /// Nine-character bit string in field order.
    pub fn key(&self) -> String {
        self.flags().iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_key(key: &str) -> Option<Self> {
        if key.len() != 9 || !key.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        u16::from_str_radix(key, 2).ok().map(Self::from_index)
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_empty()
    }

    /// Whether `self` is pointwise at least as permissive as `other`.
    pub fn relaxes(&self, other: &SemanticConfig) -> bool {
        self.flags().iter().zip(other.flags()).all(|(&mine, theirs)| !mine || theirs)
    }

    pub fn to_text(&self, name: &str) -> String {
        let mut out = format!("config {} {{\n", crate::diagram::quote(name));
        for ((key, set, unset), flag) in KEYS.iter().zip(self.flags()) {
            out.push_str(&format!("  {key} = {};\n", if flag { set } else { unset }));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for SemanticConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = KEYS
            .iter()
            .zip(self.flags())
            .map(|((key, set, unset), flag)| format!("{key}={}", if flag { set } else { unset }))
            .collect();
        f.write_str(&words.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigViolation {
    pub constraint: u8,
    pub message: String,
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constraint ({}) violated: {}", self.constraint, self.message)
    }
}

pub fn validate(c: &SemanticConfig) -> Vec<ConfigViolation> {
    let mut out = Vec::new();
    if !c.cd_classes_complete && !c.od_types_complete {
        out.push(ConfigViolation {
            constraint: 1,
            message: "cd.classes = incomplete and od.types = incomplete may not be combined".into(),
        });
    }
    if !c.od_objects_complete && c.od_links_complete {
        out.push(ConfigViolation {
            constraint: 2,
            message: "od.objects = incomplete requires od.links = incomplete".into(),
        });
    }
    if c.cd_empty_om_invalid != c.od_empty_om_invalid {
        out.push(ConfigViolation {
            constraint: 3,
            message: "cd.emptyOM and od.emptyOM must agree".into(),
        });
    }
    out
}

/// All valid configurations in canonical order.
pub fn enumerate_valid() -> Vec<SemanticConfig> {
    (0u16..512).map(SemanticConfig::from_index).filter(SemanticConfig::is_valid).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub name: String,
    pub config: SemanticConfig,
}

pub fn parse_config(text: &str) -> Result<SemanticConfig, Diagnostics> {
    parse_config_file(text).map(|f| f.config)
}

/// Parses a config file. Keys may appear in any order; each must appear
/// exactly once. The result is not checked against the constraints.
pub fn parse_config_file(text: &str) -> Result<ConfigFile, Diagnostics> {
    let mut cur = Cursor::new(text)?;
    cur.expect_keyword("config")?;
    let name = match cur.peek().clone() {
        Tok::Str(s) => {
            cur.next();
            s
        }
        Tok::Ident(s) => {
            cur.next();
            s
        }
        _ => return Err(cur.unexpected("configuration name").into()),
    };
    cur.expect(Tok::LBrace)?;
    let mut values: [Option<bool>; 9] = [None; 9];
    let mut diags = Vec::new();
    while !cur.accept(&Tok::RBrace) {
        let (scope, pos) = cur.ident()?;
        cur.expect(Tok::Dot)?;
        let (field, _) = cur.ident()?;
        cur.expect(Tok::Eq)?;
        let (value, vpos) = cur.ident()?;
        cur.expect(Tok::Semi)?;
        let key = format!("{scope}.{field}");
        let Some(k) = KEYS.iter().position(|(name, _, _)| *name == key) else {
            diags.push(Diagnostic::new(DiagnosticKind::Config, format!("unknown key `{key}`")).at(pos));
            continue;
        };
        let (_, set, unset) = KEYS[k];
        let flag = if value == set {
            true
        } else if value == unset {
            false
        } else {
            diags.push(
                Diagnostic::new(
                    DiagnosticKind::Config,
                    format!("invalid value `{value}` for `{key}`; expected `{set}` or `{unset}`"),
                )
                .at(vpos),
            );
            continue;
        };
        if values[k].replace(flag).is_some() {
            diags.push(Diagnostic::new(DiagnosticKind::Config, format!("key `{key}` given twice")).at(pos));
        }
    }
    cur.expect_eof()?;
    for (k, v) in values.iter().enumerate() {
        if v.is_none() {
            diags.push(Diagnostic::new(DiagnosticKind::Config, format!("missing key `{}`", KEYS[k].0)));
        }
    }
    if !diags.is_empty() {
        return Err(Diagnostics(diags));
    }
    Ok(ConfigFile { name, config: SemanticConfig::from_flags(values.map(Option::unwrap)) })
}

pub const PRESETS: [(&str, &str); 4] = [
    ("elicit", include_str!("../data/configs/elicit.cfg")),
    ("test", include_str!("../data/configs/test.cfg")),
    ("codegen", include_str!("../data/configs/codegen.cfg")),
    ("evolve", include_str!("../data/configs/evolve.cfg")),
];

/// Looks up a shipped preset; `testing` is accepted for `test`.
pub fn preset(name: &str) -> Option<SemanticConfig> {
    let name = if name == "testing" { "test" } else { name };
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_config(text).expect("shipped preset parses"))
}

/// Configuration/diagram mismatches that make a pair inconsistent before
/// any search.
pub fn compatibility(config: &SemanticConfig, pair: &ResolvedPair) -> Vec<String> {
    let mut out = Vec::new();
    for (o, t) in pair.od.objects.iter().zip(&pair.od_types) {
        match t {
            OdType::Untyped if config.od_types_complete => {
                out.push(format!("untyped object `{}` under types=complete", o.name));
            }
            OdType::Unknown(u) if config.cd_classes_complete => {
                out.push(format!("unknown type `{u}` of object `{}` under classes=complete", o.name));
            }
            _ => {}
        }
    }
    out
}
