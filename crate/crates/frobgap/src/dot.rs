//! Graphviz rendering of diagrams.

use std::fmt::Write;

use frobgap_core::diagram::{Diagram, End, NodeKind};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn end_id(e: End) -> String {
    match e {
        End::Input(i) => format!("in{i}"),
        End::Output(j) => format!("out{j}"),
        End::Leg { node, .. } => format!("n{node}"),
    }
}

/// A `digraph` with boundary ports as points, generators as boxes and
/// spiders as filled circles. Edge labels give the wire's space.
pub fn diagram_to_dot(d: &Diagram, title: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", escape(title)).unwrap();
    s.push_str("  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n");
    for (i, w) in d.inputs.0.iter().enumerate() {
        writeln!(s, "  in{i} [shape=point, xlabel=\"{}\"];", escape(&w.to_string())).unwrap();
    }
    for (j, w) in d.outputs.0.iter().enumerate() {
        writeln!(s, "  out{j} [shape=point, xlabel=\"{}\"];", escape(&w.to_string())).unwrap();
    }
    for (n, k) in d.nodes.iter().enumerate() {
        let attrs = match k {
            NodeKind::Generator { name, .. } => format!("shape=box, label=\"{}\"", escape(name)),
            NodeKind::Spider { space, .. } => {
                format!("shape=circle, style=filled, fillcolor=black, fontcolor=white, width=0.2, label=\"{}\"", escape(space.name()))
            }
            NodeKind::Cup(sp) => format!("shape=invtriangle, label=\"cup {}\"", escape(sp.name())),
            NodeKind::Cap(sp) => format!("shape=triangle, label=\"cap {}\"", escape(sp.name())),
            NodeKind::Swap(..) => "shape=diamond, label=\"swap\"".to_string(),
        };
        writeln!(s, "  n{n} [{attrs}];").unwrap();
    }
    for &(a, b) in &d.wires {
        let space = d.space_of(a).map(|sp| sp.name().to_string()).unwrap_or_default();
        writeln!(s, "  {} -> {} [arrowhead=none, label=\"{}\"];", end_id(a), end_id(b), escape(&space)).unwrap();
    }
    s.push_str("}\n");
    s
}
