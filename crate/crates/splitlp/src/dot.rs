//! Graphviz output for dependency graphs.

use std::fmt::Write;

use splitlp_core::text::format_atoms;
use splitlp_core::{DepGraph, Program, SuperDepGraph};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Atoms as nodes, one edge per arc, in id order.
pub fn dependency_dot(p: &Program, g: &DepGraph) -> String {
    let name = |a| quote(p.symbols().name(a));
    let mut out = String::from("digraph dependencies {\n");
    for a in g.nodes().iter() {
        let _ = writeln!(out, "  {};", name(a));
    }
    for (from, to) in g.arcs() {
        let _ = writeln!(out, "  {} -> {};", name(from), name(to));
    }
    out.push_str("}\n");
    out
}

/// The dependency graph with each strongly connected component drawn as a
/// cluster labelled by its atoms.
pub fn super_dot(p: &Program, g: &DepGraph, sg: &SuperDepGraph) -> String {
    let name = |a| quote(p.symbols().name(a));
    let mut out = String::from("digraph super_dependencies {\n  compound=true;\n");
    for c in sg.ids() {
        let _ = writeln!(out, "  subgraph cluster_{c} {{");
        let _ = writeln!(out, "    label={};", quote(&format_atoms(p.symbols(), sg.atoms(c))));
        out.push_str("    style=dotted;\n");
        for a in sg.atoms(c).iter() {
            let _ = writeln!(out, "    {};", name(a));
        }
        out.push_str("  }\n");
    }
    for (from, to) in g.arcs() {
        let _ = writeln!(out, "  {} -> {};", name(from), name(to));
    }
    out.push_str("}\n");
    out
}

/// Plain listing: one `from -> to` line per arc.
pub fn dependency_listing(p: &Program, g: &DepGraph) -> String {
    let mut out = String::new();
    for (from, to) in g.arcs() {
        let _ = writeln!(out, "{} -> {}", p.symbols().name(from), p.symbols().name(to));
    }
    out
}

/// Components with their atoms, then the edges between them.
pub fn super_listing(p: &Program, sg: &SuperDepGraph) -> String {
    let mut out = String::new();
    for c in sg.ids() {
        let source = if sg.predecessors(c).is_empty() { "  source" } else { "" };
        let _ = writeln!(out, "{c} {}{source}", format_atoms(p.symbols(), sg.atoms(c)));
    }
    for (from, to) in sg.edges() {
        let _ = writeln!(out, "{from} -> {to}");
    }
    out
}
