use std::fmt::Write;

use crate::fusion::FusionNet;
use crate::hypergraph::{EdgeLabel, Hypergraph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Vertices are circles, binary edges arrows from the first to the second
/// attachment, and every other edge a labelled box with numbered tentacles.
pub fn hypergraph_to_dot<L: EdgeLabel>(h: &Hypergraph<L>) -> String {
    let mut s = String::from("digraph hypergraph {\n");
    s.push_str("  node [shape=circle, label=\"\", width=0.25];\n");
    let v = |id: &dyn std::fmt::Display| quote(&format!("v:{id}"));
    for id in h.vertices() {
        writeln!(s, "  {} [xlabel={}];", v(id), quote(&id.to_string())).unwrap();
    }
    for e in h.edges() {
        let label = quote(&e.label.to_string());
        if e.att.len() == 2 {
            writeln!(s, "  {} -> {} [label={label}];", v(&e.att[0]), v(&e.att[1])).unwrap();
            continue;
        }
        let node = quote(&format!("e:{}", e.id));
        writeln!(s, "  {node} [shape=box, label={label}, width=0];").unwrap();
        for (i, a) in e.att.iter().enumerate() {
            writeln!(
                s,
                "  {node} -> {} [arrowhead=none, label=\"{}\"];",
                v(a),
                i + 1
            )
            .unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// One node per component; each fused pair is an undirected edge.
pub fn net_to_dot(net: &FusionNet) -> String {
    let mut s = String::from("graph net {\n  node [shape=circle];\n");
    for c in 0..net.components {
        writeln!(s, "  c{c} [label=\"{c}\"];").unwrap();
    }
    for e in &net.edges {
        let label = quote(&format!("{}/{}", e.pair.0, e.pair.1));
        writeln!(s, "  c{} -- c{} [label={label}];", e.ends.0, e.ends.1).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{p_ex, p_ex_host, z_component};
    use crate::fusion::fusion_net;

    #[test]
    fn binary_edges_are_arrows_and_others_boxes() {
        let dot = hypergraph_to_dot(&z_component(5, true));
        assert!(dot.contains("\"v:Z5."));
        assert!(dot.contains("shape=box"));
        assert!(dot.contains("label=\"1\""));
        assert!(dot.starts_with("digraph") && dot.ends_with("}\n"));
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote("a\"b\\"), "\"a\\\"b\\\\\"");
    }

    #[test]
    fn net_has_one_line_per_pair() {
        let net = fusion_net(&p_ex_host(), &p_ex()).unwrap();
        let dot = net_to_dot(&net);
        assert_eq!(dot.matches(" -- ").count(), net.edges.len());
        assert_eq!(
            dot.matches("[label=\"").count(),
            net.components + net.edges.len()
        );
    }
}
