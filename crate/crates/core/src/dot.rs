//! Graphviz export.

use std::fmt::Write;

use crate::dm::DmDecomposition;
use crate::graph::{BipartiteGraph, SystemDigraph, Vertex};

/// The system digraph with states, inputs and outputs styled apart.
pub fn digraph_to_dot(g: &SystemDigraph) -> String {
    let mut out = String::from("digraph system {\n  rankdir=LR;\n");
    for v in 0..g.vertex_count() {
        let style = match g.vertex(v) {
            Vertex::State(_) => "shape=circle",
            Vertex::Input(_) => "shape=box, style=filled, fillcolor=lightgray",
            Vertex::Output(_) => "shape=doublecircle",
        };
        let _ = writeln!(out, "  \"{}\" [{}];", g.label(v), style);
    }
    for (u, w) in g.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", g.label(u), g.label(w));
    }
    out.push_str("}\n");
    out
}

/// The bipartite graph with one cluster per DM component; s-edges dashed and
/// `≺` drawn as arrows between clusters.
pub fn decomposition_to_dot(g: &BipartiteGraph, d: &DmDecomposition) -> String {
    let mut out = String::from("digraph dm {\n  compound=true;\n  rankdir=LR;\n");
    let cluster = |name: &str, title: &str, left: &[usize], right: &[usize], out: &mut String| {
        let _ = writeln!(out, "  subgraph cluster_{name} {{\n    label=\"{title}\";");
        for &l in left {
            let _ = writeln!(out, "    \"{}\";", g.left_label(l));
        }
        for &r in right {
            let _ = writeln!(out, "    \"{}\" [shape=box];", g.right_label(r));
        }
        out.push_str("  }\n");
    };
    if d.has_horizontal() {
        cluster("v0", "V0", &d.v0_left, &d.v0_right, &mut out);
    }
    for (i, c) in d.components.iter().enumerate() {
        let title = if c.has_s_edge {
            format!("B{} (s)", i + 1)
        } else {
            format!("B{}", i + 1)
        };
        cluster(&format!("b{}", i + 1), &title, &c.left, &c.right, &mut out);
    }
    if d.has_vertical() {
        cluster("vinf", "Vinf", &d.vinf_left, &d.vinf_right, &mut out);
    }
    for e in g.edges() {
        let style = if e.s_edge { " [style=dashed]" } else { "" };
        let matched = d.matching.left_partner(e.left) == Some(e.right);
        let style = match (style, matched) {
            ("", true) => " [penwidth=2]",
            (_, true) => " [style=dashed, penwidth=2]",
            (s, false) => s,
        };
        let _ = writeln!(out, "  \"{}\" -> \"{}\"{};", g.left_label(e.left), g.right_label(e.right), style);
    }
    for (a, below) in d.below.iter().enumerate() {
        for &b in below {
            let from = d.components[a].left.first().map(|&l| g.left_label(l));
            let to = d.components[b].left.first().map(|&l| g.left_label(l));
            if let (Some(from), Some(to)) = (from, to) {
                let _ = writeln!(
                    out,
                    "  \"{from}\" -> \"{to}\" [ltail=cluster_b{}, lhead=cluster_b{}, color=gray, style=bold];",
                    a + 1,
                    b + 1
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
