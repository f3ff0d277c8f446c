use std::fmt::Write;

use super::cfa::ControlFlowAutomaton;

/// Renders the automaton as GraphViz DOT. Locations with an outgoing assume
/// are drawn as diamonds, all others as boxes; the error location gets a
/// double border.
pub fn cfa_to_dot(cfa: &ControlFlowAutomaton) -> String {
    let mut out = String::from("digraph cfa {\n");
    for loc in cfa.locations() {
        let branches = cfa
            .outgoing(loc)
            .any(|edge| edge.op.is_assume() && !edge.op.is_noop());
        let shape = if branches { "diamond" } else { "box" };
        let mut attrs = format!("shape={shape}, label=\"{loc}\"");
        if Some(loc) == cfa.error() {
            attrs.push_str(", peripheries=2");
        }
        if loc == cfa.initial() {
            attrs.push_str(", style=bold");
        }
        let _ = writeln!(out, "  {loc} [{attrs}];");
    }
    for edge in cfa.edges() {
        let label = escape(&edge.op.to_string());
        let _ = writeln!(out, "  {} -> {} [label=\"{label}\"];", edge.source, edge.target);
    }
    out.push_str("}\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{build_cfa, parse};

    fn dot_of(src: &str) -> String {
        cfa_to_dot(&build_cfa(&parse(src).unwrap()))
    }

    #[test]
    fn empty_program_has_one_node() {
        let dot = dot_of("");
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("shape=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn single_edge() {
        let dot = dot_of("var x; x := 1;");
        assert_eq!(dot.matches("shape=").count(), 2);
        assert_eq!(dot.matches("->").count(), 1);
        assert!(dot.contains("l0 -> l1 [label=\"x := 1\"];"));
        assert!(dot.contains("l0 [shape=box"));
    }

    #[test]
    fn branch_source_is_a_diamond() {
        let dot = dot_of("var x; if (x == 0) { x := 1; }");
        assert!(dot.contains("l0 [shape=diamond"));
        assert!(dot.contains("l1 [shape=box"));
    }
}
