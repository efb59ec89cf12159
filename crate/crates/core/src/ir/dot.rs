// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{Circuit, GateNetlist, NetKind, OpGraph, OpKind};

fn render<C: Circuit>(c: &C, label: impl Fn(usize) -> String) -> String {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut loose = Vec::new();
    for id in 0..c.len() {
        match c.meta(id).group() {
            Some(g) => groups.entry(g).or_default().push(id),
            None => loose.push(id),
        }
    }
    let mut s = String::from("digraph circuit {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n");
    for id in loose {
        let _ = writeln!(s, "  n{id} [label=\"{}\"];", label(id));
    }
    for (k, (name, ids)) in groups.iter().enumerate() {
        let _ = writeln!(s, "  subgraph cluster_{k} {{\n    label=\"{name}\";");
        for id in ids {
            let _ = writeln!(s, "    n{id} [label=\"{}\"];", label(*id));
        }
        s.push_str("  }\n");
    }
    for id in 0..c.len() {
        for f in c.fanin(id) {
            let _ = writeln!(s, "  n{f} -> n{id};");
        }
    }
    s.push_str("}\n");
    s
}

/// DOT rendering; nodes are clustered by provenance.
pub fn ops_to_dot(g: &OpGraph) -> String {
    render(g, |id| match g.node(id).kind {
        OpKind::Input(p) => format!("in {p}"),
        OpKind::Output(p) => format!("out {p}"),
        OpKind::Opc(r) => r.to_string(),
        OpKind::Buf => "buf".into(),
        OpKind::Const(c) => format!("const {c}"),
    })
}

pub fn gates_to_dot(n: &GateNetlist) -> String {
    render(n, |id| match n.nodes()[id].kind {
        NetKind::Input(p) => format!("in {p}"),
        NetKind::Output(p) => format!("out {p}"),
        NetKind::And => "AND".into(),
        NetKind::Or => "OR".into(),
        NetKind::Not => "NOT".into(),
        NetKind::Buf => "BUF".into(),
        NetKind::Const(c) => format!("{}", c as u8),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{expand, BlockLibrary, OpBuilder, OpRole, Provenance};

    #[test]
    fn node_and_edge_counts() {
        let mut b = OpBuilder::new();
        let d = b.inputs(2);
        let x = b.opc(OpRole::Diamond, d[0], d[1], Provenance::default());
        b.output(1, x);
        let g = b.finish().unwrap();
        let n = expand(&g, &BlockLibrary::default()).unwrap();
        let dot = gates_to_dot(&n);
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        assert_eq!(nodes, n.nodes().len());
        assert_eq!(edges, n.nodes().iter().map(|x| x.fanin.len()).sum::<usize>());
    }
}
