//! Canonical textual form of diagrams. `parse(print(x)) == x` for every
//! valid AST.

use super::ast::*;
use std::fmt::Write;

pub fn print_cd(cd: &ClassDiagram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "classdiagram {} {{", cd.name);
    for e in &cd.enums {
        let _ = writeln!(out, "  enum {} {{ {}; }}", e.name, e.literals.join(", "));
    }
    for i in &cd.interfaces {
        if i.extends.is_empty() {
            let _ = writeln!(out, "  interface {};", i.name);
        } else {
            let _ = writeln!(out, "  interface {} extends {};", i.name, i.extends.join(", "));
        }
    }
    for c in &cd.classes {
        out.push_str("  ");
        if c.is_abstract {
            out.push_str("abstract ");
        } else if c.is_singleton {
            out.push_str("singleton ");
        }
        let _ = write!(out, "class {}", c.name);
        if let Some(sup) = &c.superclass {
            let _ = write!(out, " extends {sup}");
        }
        if !c.interfaces.is_empty() {
            let _ = write!(out, " implements {}", c.interfaces.join(", "));
        }
        if c.attributes.is_empty() {
            out.push_str(";\n");
        } else {
            out.push_str(" {\n");
            for a in &c.attributes {
                let _ = writeln!(out, "    {} {};", a.ty, a.name);
            }
            out.push_str("  }\n");
        }
    }
    for a in &cd.associations {
        let _ = writeln!(
            out,
            "  {} {} {} ({}) {} ({}) {} {};",
            a.kind.keyword(),
            a.left.mult,
            a.left.class,
            a.left.role,
            a.navigability.arrow(),
            a.right.role,
            a.right.class,
            a.right.mult
        );
    }
    out.push_str("}\n");
    out
}

pub fn print_od(od: &ObjectDiagram) -> String {
    print_od_with_header(od, "objectdiagram")
}

pub(crate) fn print_od_with_header(od: &ObjectDiagram, header: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{header} {} {{", od.name);
    for o in &od.objects {
        let _ = write!(out, "  {}", o.name);
        if let Some(ty) = &o.ty {
            let _ = write!(out, ":{ty}");
        }
        if o.attributes.is_empty() {
            out.push_str(";\n");
        } else {
            out.push_str(" {");
            for (name, lit) in &o.attributes {
                let _ = write!(out, " {name} = {};", literal_text(lit));
            }
            out.push_str(" }\n");
        }
    }
    for l in &od.links {
        let _ = writeln!(out, "  link {} {} -> {};", l.role, l.source, l.target);
    }
    out.push_str("}\n");
    out
}

pub fn literal_text(lit: &Literal) -> String {
    match lit {
        Literal::Int(n) => n.to_string(),
        Literal::Bool(b) => b.to_string(),
        Literal::Str(s) | Literal::Date(s) => quote(s),
        Literal::Enum { ty, literal } => format!("{ty}.{literal}"),
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
