//! Textual class diagram and object diagram languages.

pub mod ast;
pub mod error;
pub mod lexer;
mod parse;
mod print;
mod resolve;

pub use ast::*;
pub use error::{Diagnostic, DiagnosticKind, Diagnostics, Pos};
pub use parse::{is_primitive, parse_cd, parse_od, validate_cd, validate_od};
pub use print::{literal_text, print_cd, print_od, quote};
pub(crate) use print::print_od_with_header;
pub use resolve::{resolve, resolve_with, OdType, ResolvedCd, ResolvedPair, RoleRef, ShownLink};
