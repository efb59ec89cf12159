// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NodeId, Provenance};
use crate::error::{Error, Result};
use crate::fsm::{diamond_m, out_m};
use crate::kleene::Pair;

/// Operator carried by an OPC node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpRole {
    /// The associative transition operator `⋄_M`.
    Diamond,
    /// The output operator `out_M`.
    Out,
}

impl fmt::Display for OpRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpRole::Diamond => "diamond",
            OpRole::Out => "out",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// Input pair, 1-based port.
    Input(usize),
    /// Output pair, 1-based port.
    Output(usize),
    Opc(OpRole),
    Buf,
    Const(Pair),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpNode {
    pub kind: OpKind,
    pub fanin: Vec<NodeId>,
    pub meta: Provenance,
}

/// Operator-layer DAG. Nodes are stored in topological order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpGraph {
    pub(crate) nodes: Vec<OpNode>,
    pub(crate) inputs: Vec<NodeId>,
    pub(crate) outputs: Vec<NodeId>,
}

impl OpGraph {
    pub fn nodes(&self) -> &[OpNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &OpNode {
        &self.nodes[id]
    }

    /// Input node ids by port, port 1 first.
    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    /// Output node ids by port, port 1 first.
    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn width_in(&self) -> usize {
        self.inputs.len()
    }

    pub fn width_out(&self) -> usize {
        self.outputs.len()
    }

    pub fn count_opc(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, OpKind::Opc(_)))
            .count()
    }

    pub fn count_buf(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == OpKind::Buf).count()
    }

    /// Evaluate over any value domain. `opc` interprets OPC nodes and
    /// `konst` interprets constants; buffers and outputs pass values through.
    pub fn eval_with<V, F, K>(&self, inputs: &[V], opc: F, konst: K) -> Result<Vec<V>>
    where
        V: Clone,
        F: Fn(OpRole, &V, &V) -> V,
        K: Fn(Pair) -> V,
    {
        if inputs.len() != self.inputs.len() {
            return Err(Error::WidthMismatch {
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        let mut vals: Vec<Option<V>> = vec![None; self.nodes.len()];
        for (id, n) in self.nodes.iter().enumerate() {
            let v = match n.kind {
                OpKind::Input(p) => inputs[p - 1].clone(),
                OpKind::Const(c) => konst(c),
                OpKind::Buf | OpKind::Output(_) => vals[n.fanin[0]].clone().expect("topological"),
                OpKind::Opc(r) => {
                    let a = vals[n.fanin[0]].as_ref().expect("topological");
                    let b = vals[n.fanin[1]].as_ref().expect("topological");
                    opc(r, a, b)
                }
            };
            vals[id] = Some(v);
        }
        Ok(self
            .outputs
            .iter()
            .map(|&o| vals[o].clone().expect("evaluated"))
            .collect())
    }

    /// Evaluate with `⋄_M` and `out_M`.
    pub fn eval_pairs(&self, inputs: &[Pair]) -> Result<Vec<Pair>> {
        self.eval_with(
            inputs,
            |r, a, b| match r {
                OpRole::Diamond => diamond_m(*a, *b),
                OpRole::Out => out_m(*a, *b),
            },
            |c| c,
        )
    }

    /// Copy this graph into `b`, feeding its inputs from `inputs`. Returns
    /// the ids driving each output port. `tag` rewrites the provenance of
    /// every copied node.
    pub fn instantiate_into<T>(&self, b: &mut OpBuilder, inputs: &[NodeId], tag: T) -> Result<Vec<NodeId>>
    where
        T: Fn(&Provenance) -> Provenance,
    {
        if inputs.len() != self.inputs.len() {
            return Err(Error::WidthMismatch {
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        let mut map = vec![usize::MAX; self.nodes.len()];
        for (id, n) in self.nodes.iter().enumerate() {
            map[id] = match n.kind {
                OpKind::Input(p) => inputs[p - 1],
                OpKind::Output(_) => map[n.fanin[0]],
                OpKind::Const(c) => b.konst(c, tag(&n.meta)),
                OpKind::Buf => b.buf(map[n.fanin[0]], tag(&n.meta)),
                OpKind::Opc(r) => b.opc(r, map[n.fanin[0]], map[n.fanin[1]], tag(&n.meta)),
            };
        }
        Ok(self.outputs.iter().map(|&o| map[o]).collect())
    }
}

/// Append-only builder; ids are handed out densely in creation order.
#[derive(Debug, Default)]
pub struct OpBuilder {
    nodes: Vec<OpNode>,
}

impl OpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &OpNode {
        &self.nodes[id]
    }

    pub fn meta_mut(&mut self, id: NodeId) -> &mut Provenance {
        &mut self.nodes[id].meta
    }

    fn push(&mut self, kind: OpKind, fanin: Vec<NodeId>, meta: Provenance) -> NodeId {
        debug_assert!(fanin.iter().all(|&f| f < self.nodes.len()));
        self.nodes.push(OpNode { kind, fanin, meta });
        self.nodes.len() - 1
    }

    pub fn input(&mut self, port: usize) -> NodeId {
        self.push(OpKind::Input(port), vec![], Provenance::default())
    }

    /// `n` inputs on ports `1..=n`.
    pub fn inputs(&mut self, n: usize) -> Vec<NodeId> {
        (1..=n).map(|p| self.input(p)).collect()
    }

    pub fn opc(&mut self, role: OpRole, a: NodeId, b: NodeId, mut meta: Provenance) -> NodeId {
        meta.op = Some(role);
        self.push(OpKind::Opc(role), vec![a, b], meta)
    }

    pub fn buf(&mut self, a: NodeId, meta: Provenance) -> NodeId {
        self.push(OpKind::Buf, vec![a], meta)
    }

    pub fn konst(&mut self, c: Pair, mut meta: Provenance) -> NodeId {
        meta.value = Some(c.to_string());
        self.push(OpKind::Const(c), vec![], meta)
    }

    pub fn output(&mut self, port: usize, a: NodeId) -> NodeId {
        self.push(OpKind::Output(port), vec![a], Provenance::default())
    }

    /// Seal the graph. Input and output ports must each be `1..=n`
    /// without gaps or repeats.
    pub fn finish(self) -> Result<OpGraph> {
        let inputs = collect_ports(&self.nodes, |n: &OpNode| match n.kind {
            OpKind::Input(p) => Some(p),
            _ => None,
        })?;
        let outputs = collect_ports(&self.nodes, |n: &OpNode| match n.kind {
            OpKind::Output(p) => Some(p),
            _ => None,
        })?;
        Ok(OpGraph {
            nodes: self.nodes,
            inputs,
            outputs,
        })
    }
}

pub(crate) fn collect_ports<N, F>(nodes: &[N], port: F) -> Result<Vec<NodeId>>
where
    F: Fn(&N) -> Option<usize>,
{
    let mut by_port: Vec<Option<NodeId>> = Vec::new();
    for (id, n) in nodes.iter().enumerate() {
        if let Some(p) = port(n) {
            if p == 0 {
                return Err(Error::Malformed("ports are 1-based".into()));
            }
            if by_port.len() < p {
                by_port.resize(p, None);
            }
            if by_port[p - 1].replace(id).is_some() {
                return Err(Error::Malformed(format!("port {p} appears twice")));
            }
        }
    }
    by_port
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Malformed(format!("port {} missing", i + 1))))
        .collect()
}

/// Straight-line form of an operator graph over pair indices `0..9`, with
/// both operator tables precomputed. Used by exhaustive sweeps.
#[derive(Clone, Debug)]
pub struct PairProgram {
    width: usize,
    steps: Vec<Step>,
    outputs: Vec<usize>,
    diamond: [u8; 81],
    out: [u8; 81],
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Input(usize),
    Copy(usize),
    Const(u8),
    Diamond(usize, usize),
    Out(usize, usize),
}

impl PairProgram {
    pub fn new(g: &OpGraph) -> Self {
        let table = |f: fn(Pair, Pair) -> Pair| {
            let mut t = [0u8; 81];
            for (i, v) in t.iter_mut().enumerate() {
                *v = f(Pair::from_index(i / 9), Pair::from_index(i % 9)).index() as u8;
            }
            t
        };
        let steps = g
            .nodes
            .iter()
            .map(|n| match n.kind {
                OpKind::Input(p) => Step::Input(p - 1),
                OpKind::Output(_) | OpKind::Buf => Step::Copy(n.fanin[0]),
                OpKind::Const(c) => Step::Const(c.index() as u8),
                OpKind::Opc(OpRole::Diamond) => Step::Diamond(n.fanin[0], n.fanin[1]),
                OpKind::Opc(OpRole::Out) => Step::Out(n.fanin[0], n.fanin[1]),
            })
            .collect();
        PairProgram {
            width: g.inputs.len(),
            steps,
            outputs: g.outputs.clone(),
            diamond: table(diamond_m),
            out: table(out_m),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Evaluate on pair indices; `scratch` is resized as needed.
    pub fn run(&self, inputs: &[u8], scratch: &mut Vec<u8>, out: &mut Vec<u8>) {
        scratch.resize(self.steps.len(), 0);
        for id in 0..self.steps.len() {
            scratch[id] = match self.steps[id] {
                Step::Input(p) => inputs[p],
                Step::Copy(a) => scratch[a],
                Step::Const(c) => c,
                Step::Diamond(a, b) => self.diamond[scratch[a] as usize * 9 + scratch[b] as usize],
                Step::Out(a, b) => self.out[scratch[a] as usize * 9 + scratch[b] as usize],
            };
        }
        out.clear();
        out.extend(self.outputs.iter().map(|&o| scratch[o]));
    }
}
