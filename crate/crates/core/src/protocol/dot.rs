use std::fmt::Write;

use super::{Leaf, Node, Party, ProtocolTree};
use crate::model::{rational, Alphabet};

pub(super) fn render(tree: &ProtocolTree, names: Option<(&Alphabet, &Alphabet)>) -> String {
    let mut out = String::from("digraph protocol {\n  node [fontname=\"monospace\"];\n");
    let mut next = 0usize;
    emit(tree.root(), names, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn list(indices: &[usize], alphabet: Option<&Alphabet>) -> String {
    let parts: Vec<String> = indices
        .iter()
        .map(|&i| alphabet.map_or_else(|| i.to_string(), |a| escape(a.label(i))))
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn emit(
    node: &Node,
    names: Option<(&Alphabet, &Alphabet)>,
    next: &mut usize,
    out: &mut String,
) -> usize {
    let id = *next;
    *next += 1;
    match node {
        Node::Leaf(Leaf::Announce(v)) => {
            let _ = writeln!(out, "  n{id} [shape=box, label=\"{}\"];", escape(v));
        }
        Node::Leaf(Leaf::Local { .. }) => {
            let _ = writeln!(out, "  n{id} [shape=box, label=\"local outputs\"];");
        }
        Node::Internal(n) => {
            let who = match n.speaker {
                Party::Alice => "A",
                Party::Bob => "B",
            };
            let label = format!(
                "{who}\\n{} x {}",
                list(n.rect.rows(), names.map(|p| p.0)),
                list(n.rect.cols(), names.map(|p| p.1))
            );
            let _ = writeln!(out, "  n{id} [shape=ellipse, label=\"{}\"];", label);
            for (c, child) in n.children.iter().enumerate() {
                let cid = emit(child, names, next, out);
                let randomized = n.branch.values().any(|pmf| pmf.len() > 1);
                if randomized {
                    let probs: Vec<String> = n
                        .branch
                        .iter()
                        .filter_map(|(i, pmf)| {
                            pmf.iter()
                                .find(|(cc, _)| *cc == c)
                                .map(|(_, p)| format!("{i}:{}", rational::format(p)))
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "  n{id} -> n{cid} [label=\"{c} [{}]\"];",
                        probs.join(" ")
                    );
                } else {
                    let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{c}\"];");
                }
            }
        }
    }
    id
}

#[cfg(test)]
mod tests {
    use crate::model::SubRect;
    use crate::protocol::{Node, Party, ProtocolTree};

    #[test]
    fn one_graph_node_per_tree_node() {
        let rect = SubRect::full(2, 1);
        let root = Node::split(
            Party::Alice,
            rect.clone(),
            &[vec![0], vec![1]],
            vec![Node::announce("0"), Node::announce("1")],
        );
        let tree = ProtocolTree::new(rect, root).unwrap();
        let dot = tree.to_dot(None);
        assert!(dot.starts_with("digraph protocol {"));
        assert_eq!(dot.matches("shape=").count(), tree.node_count());
        assert!(dot.contains("n0 -> n1 [label=\"0\"]"));
        assert!(dot.contains("A\\n{0,1} x {0}"));
    }
}
