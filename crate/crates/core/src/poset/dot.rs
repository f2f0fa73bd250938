use std::fmt::Write;

use super::SubspacePoset;

/// Graphviz digraph of the Hasse diagram, edges pointing upward.
pub fn export_dot(p: &SubspacePoset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, s) in p.elements().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"dim {}\\n{}\"];", s.dim(), s.label());
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}
