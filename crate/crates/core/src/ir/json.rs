// SPDX-License-Identifier: Apache-2.0

//! Stable JSON schema shared by both layers:
//!
//! ```text
//! {"width_in": n, "width_out": m,
//!  "nodes": [{"id": 0, "kind": "INPUT", "fanin": [], "port": 1, "meta": {}}, ...]}
//! ```
//!
//! Operator-layer constants use kind `CONST0` with the pair in `meta.value`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{GateNetlist, GateNode, NetKind, NodeId, OpGraph, OpKind, OpNode, Provenance};
use crate::error::{Error, Result};
use crate::kleene::Pair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: NodeId,
    pub kind: String,
    pub fanin: Vec<NodeId>,
    pub port: Option<usize>,
    #[serde(default)]
    pub meta: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetlistJson {
    pub width_in: usize,
    pub width_out: usize,
    pub nodes: Vec<NodeJson>,
}

impl NetlistJson {
    pub fn to_string_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn parse(text: &str) -> Result<NetlistJson> {
        Ok(serde_json::from_str(text)?)
    }

    /// Whether any node is an OPC, i.e. this describes an operator graph.
    pub fn is_operator_layer(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == "OPC")
    }

    /// Nodes in a topological order, renumbered densely. Ties are broken by
    /// the original id, so an already ordered file keeps its numbering.
    fn ordered(&self) -> Result<Vec<NodeJson>> {
        let n = self.nodes.len();
        let mut slot = vec![usize::MAX; n];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id >= n || slot[node.id] != usize::MAX {
                return Err(Error::Malformed(format!(
                    "node ids must be dense, got {}",
                    node.id
                )));
            }
            slot[node.id] = i;
        }
        let mut indeg = vec![0usize; n];
        let mut users: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for node in &self.nodes {
            for &f in &node.fanin {
                if f >= n {
                    return Err(Error::Malformed(format!(
                        "node {} reads unknown node {f}",
                        node.id
                    )));
                }
                indeg[node.id] += 1;
                users[f].push(node.id);
            }
        }
        let mut ready: BinaryHeap<Reverse<NodeId>> = (0..n).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for &u in &users[i] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    ready.push(Reverse(u));
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(stuck));
        }
        let mut rename = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new;
        }
        Ok(order
            .iter()
            .map(|&old| {
                let src = &self.nodes[slot[old]];
                NodeJson {
                    id: rename[old],
                    kind: src.kind.clone(),
                    fanin: src.fanin.iter().map(|&f| rename[f]).collect(),
                    port: src.port,
                    meta: src.meta.clone(),
                }
            })
            .collect())
    }
}

fn arity_check(node: &NodeJson, arity: usize) -> Result<()> {
    if node.fanin.len() != arity {
        return Err(Error::Malformed(format!(
            "node {} ({}) needs {arity} fan-in, has {}",
            node.id,
            node.kind,
            node.fanin.len()
        )));
    }
    Ok(())
}

fn port_of(node: &NodeJson) -> Result<usize> {
    node.port
        .ok_or_else(|| Error::Malformed(format!("node {} ({}) has no port", node.id, node.kind)))
}

impl OpGraph {
    pub fn to_json(&self) -> NetlistJson {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                let (kind, port) = match n.kind {
                    OpKind::Input(p) => ("INPUT", Some(p)),
                    OpKind::Output(p) => ("OUTPUT", Some(p)),
                    OpKind::Opc(_) => ("OPC", None),
                    OpKind::Buf => ("BUF", None),
                    OpKind::Const(_) => ("CONST0", None),
                };
                NodeJson {
                    id,
                    kind: kind.to_string(),
                    fanin: n.fanin.clone(),
                    port,
                    meta: n.meta.clone(),
                }
            })
            .collect();
        NetlistJson {
            width_in: self.width_in(),
            width_out: self.width_out(),
            nodes,
        }
    }

    pub fn from_json(j: &NetlistJson) -> Result<OpGraph> {
        let mut nodes = Vec::with_capacity(j.nodes.len());
        for n in j.ordered()? {
            let kind = match n.kind.as_str() {
                "INPUT" => {
                    arity_check(&n, 0)?;
                    OpKind::Input(port_of(&n)?)
                }
                "OUTPUT" => {
                    arity_check(&n, 1)?;
                    OpKind::Output(port_of(&n)?)
                }
                "OPC" => {
                    arity_check(&n, 2)?;
                    OpKind::Opc(
                        n.meta
                            .op
                            .ok_or_else(|| Error::Malformed(format!("OPC node {} has no meta.op", n.id)))?,
                    )
                }
                "BUF" => {
                    arity_check(&n, 1)?;
                    OpKind::Buf
                }
                "CONST0" | "CONST1" => {
                    arity_check(&n, 0)?;
                    let v: Pair = match &n.meta.value {
                        Some(v) => v.parse()?,
                        None => return Err(Error::Malformed(format!("constant {} has no meta.value", n.id))),
                    };
                    OpKind::Const(v)
                }
                k => {
                    return Err(Error::Malformed(format!(
                        "kind {k} is not an operator-layer kind"
                    )))
                }
            };
            nodes.push(OpNode {
                kind,
                fanin: n.fanin,
                meta: n.meta,
            });
        }
        let g = seal_op(nodes)?;
        check_widths(j, g.width_in(), g.width_out())?;
        Ok(g)
    }
}

fn seal_op(nodes: Vec<OpNode>) -> Result<OpGraph> {
    let inputs = super::op::collect_ports(&nodes, |n: &OpNode| match n.kind {
        OpKind::Input(p) => Some(p),
        _ => None,
    })?;
    let outputs = super::op::collect_ports(&nodes, |n: &OpNode| match n.kind {
        OpKind::Output(p) => Some(p),
        _ => None,
    })?;
    Ok(OpGraph {
        nodes,
        inputs,
        outputs,
    })
}

fn check_widths(j: &NetlistJson, win: usize, wout: usize) -> Result<()> {
    if j.width_in != win || j.width_out != wout {
        return Err(Error::Malformed(format!(
            "declared widths {}/{} disagree with ports {win}/{wout}",
            j.width_in, j.width_out
        )));
    }
    Ok(())
}

impl GateNetlist {
    pub fn to_json(&self) -> NetlistJson {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                let (kind, port) = match n.kind {
                    NetKind::Input(p) => ("INPUT", Some(p)),
                    NetKind::Output(p) => ("OUTPUT", Some(p)),
                    NetKind::And => ("AND2", None),
                    NetKind::Or => ("OR2", None),
                    NetKind::Not => ("NOT", None),
                    NetKind::Buf => ("BUF", None),
                    NetKind::Const(false) => ("CONST0", None),
                    NetKind::Const(true) => ("CONST1", None),
                };
                NodeJson {
                    id,
                    kind: kind.to_string(),
                    fanin: n.fanin.clone(),
                    port,
                    meta: n.meta.clone(),
                }
            })
            .collect();
        NetlistJson {
            width_in: self.width_in(),
            width_out: self.width_out(),
            nodes,
        }
    }

    pub fn from_json(j: &NetlistJson) -> Result<GateNetlist> {
        let mut nodes = Vec::with_capacity(j.nodes.len());
        for n in j.ordered()? {
            let kind = match n.kind.as_str() {
                "INPUT" => NetKind::Input(port_of(&n)?),
                "OUTPUT" => NetKind::Output(port_of(&n)?),
                "AND2" => NetKind::And,
                "OR2" => NetKind::Or,
                "NOT" => NetKind::Not,
                "BUF" => NetKind::Buf,
                "CONST0" => NetKind::Const(false),
                "CONST1" => NetKind::Const(true),
                k => return Err(Error::Malformed(format!("kind {k} is not a gate-layer kind"))),
            };
            arity_check(&n, kind.arity())?;
            nodes.push(GateNode {
                kind,
                fanin: n.fanin,
                meta: n.meta,
            });
        }
        let inputs = super::op::collect_ports(&nodes, |n: &GateNode| match n.kind {
            NetKind::Input(p) => Some(p),
            _ => None,
        })?;
        let outputs = super::op::collect_ports(&nodes, |n: &GateNode| match n.kind {
            NetKind::Output(p) => Some(p),
            _ => None,
        })?;
        let g = GateNetlist {
            nodes,
            inputs,
            outputs,
        };
        check_widths(j, g.width_in(), g.width_out())?;
        Ok(g)
    }
}
