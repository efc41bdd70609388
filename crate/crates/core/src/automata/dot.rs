use std::fmt::Write as _;

use super::buchi::BuchiAutomaton;

/// Graphviz rendering. Accepting states are double circles; each initial
/// state gets an arrow from an invisible point node.
pub fn to_dot(a: &BuchiAutomaton) -> String {
    let mut out = String::from("digraph buchi {\n  rankdir=LR;\n");
    for q in 0..a.num_states() {
        let shape = if a.is_accepting(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  {q} [shape={shape}];");
    }
    for &q in a.initial() {
        let _ = writeln!(out, "  init{q} [shape=point];");
        let _ = writeln!(out, "  init{q} -> {q};");
    }
    for t in a.transitions() {
        let label = t.label.to_string().replace('"', "\\\"");
        let _ = writeln!(out, "  {} -> {} [label=\"{label}\"];", t.source, t.target);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_state_self_loop() {
        let a =
            BuchiAutomaton::from_text("aps: a\nstates: 1\ninitial: 0\naccepting: 0\n0 \"t\" 0\n")
                .unwrap();
        let d = to_dot(&a);
        assert!(d.contains("0 [shape=doublecircle];"));
        assert!(d.contains("0 -> 0 [label=\"t\"];"));
        assert!(d.contains("init0 -> 0;"));
    }
}
