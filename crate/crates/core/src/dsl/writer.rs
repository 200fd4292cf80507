use std::fmt::Write;

use crate::model::Universe;

/// Canonical text for `u`: name, one object line, then concepts and relations
/// in declaration order with members sorted by ordinal. Comments and original
/// spacing are not preserved.
pub fn write_universe(u: &Universe) -> String {
    let mut out = String::new();
    if let Some(name) = u.name() {
        let _ = writeln!(out, "universe {name}");
    }
    if !u.objects().is_empty() {
        out.push_str("object");
        for o in u.objects() {
            let _ = write!(out, " {o}");
        }
        out.push('\n');
    }
    for c in u.concepts() {
        let _ = write!(out, "concept {} = {{", c.name());
        for o in c.members() {
            let _ = write!(out, " {o}");
        }
        out.push_str(" }\n");
    }
    for (name, r) in u.relations() {
        let _ = write!(out, "relation {name} = {{");
        for (s, t) in r {
            let _ = write!(out, " ({s},{t})");
        }
        out.push_str(" }\n");
    }
    out
}
