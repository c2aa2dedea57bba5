use std::fmt::Write;

use super::WeightedAutomaton;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering. Output depends only on the automaton: states appear
/// in index order, transitions in (source, letter, target) order.
pub fn export_dot(a: &WeightedAutomaton) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&a.kind().to_string())).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __init [shape=point];").unwrap();
    for q in 0..a.len() {
        let shape = if a.is_final(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  s{q} [label={}, shape={shape}];", quote(&a.render_state(q))).unwrap();
    }
    if !a.is_empty() {
        writeln!(out, "  __init -> s{};", a.initial()).unwrap();
    }
    for t in a.transitions() {
        let label = format!("{} / {}", t.letter.render(a.alphabet()), t.weight);
        writeln!(out, "  s{} -> s{} [label={}];", t.from, t.to, quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}
