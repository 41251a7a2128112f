use sdecomp::{Color, Diagram};

/// Graphviz rendering: black nodes filled, every edge labelled with its weight.
pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("digraph diagram {\n  node [shape=circle];\n");
    for v in 0..d.node_count() {
        let style = match d.color(v) {
            Color::Black => " [style=filled, fillcolor=black, fontcolor=white]",
            Color::White => " [style=filled, fillcolor=white]",
            Color::Uncolored => "",
        };
        s.push_str(&format!("  {}{};\n", v + 1, style));
    }
    for e in d.edges() {
        s.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            e.tail + 1,
            e.head + 1,
            e.weight
        ));
    }
    s.push_str("}\n");
    s
}
