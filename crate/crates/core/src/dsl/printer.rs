use crate::theory::{Fragment, Theory};
use std::fmt::Write;

/// Renders `t` in the theory format. Output is deterministic: sorts, ops,
/// letters, axioms and rewrite rules each appear in declaration order.
pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theory {} {} {{", t.name, t.fragment);
    for s in &t.sorts {
        let _ = writeln!(out, "  sort {s};");
    }
    for f in &t.functions {
        let dom: Vec<&str> = f.domain.iter().map(|s| s.name()).collect();
        if dom.is_empty() {
            let _ = writeln!(out, "  op {} : -> {};", f.name, f.codomain);
        } else {
            let _ = writeln!(out, "  op {} : {} -> {};", f.name, dom.join(", "), f.codomain);
        }
    }
    if t.fragment == Fragment::Prop && !t.relations.is_empty() {
        let names: Vec<&str> = t.relations.iter().map(|r| r.name.as_str()).collect();
        let _ = writeln!(out, "  letters {};", names.join(", "));
    }
    for a in &t.axioms {
        let _ = writeln!(out, "  axiom {a};");
    }
    for r in &t.rewrites {
        let _ = writeln!(out, "  rewrite {} -> {};", r.lhs, r.rhs);
    }
    out.push_str("}\n");
    out
}

pub fn print_theories<'a>(ts: impl IntoIterator<Item = &'a Theory>) -> String {
    ts.into_iter().map(print_theory).collect::<Vec<_>>().join("\n")
}
