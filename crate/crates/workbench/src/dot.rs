use std::fmt::Write;

use fanforge_core::CharSpace;

/// Graphviz text for the specialization order: one node per character,
/// labelled `d<depth>:<functional>`, edges from each character to its parent.
pub fn root_system_dot(x: &CharSpace) -> String {
    let label = |g| {
        let c = x.character(g);
        format!("d{}:{}", c.depth, c.functional)
    };
    let mut out = String::from("digraph rootsys {\n");
    for g in x.ids() {
        writeln!(out, "  \"{}\";", label(g)).unwrap();
    }
    for g in x.ids() {
        if let Some(p) = x.forest().parent(g.0) {
            writeln!(out, "  \"{}\" -> \"{}\";", label(g), label(fanforge_core::CharId(p))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
