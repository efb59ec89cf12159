// SPDX-License-Identifier: Apache-2.0

use super::op::collect_ports;
use super::{NodeId, Provenance};
use crate::error::{Error, Result};
use crate::kleene::{Lanes, Trit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetKind {
    /// Input trit, 1-based port.
    Input(usize),
    /// Output trit, 1-based port.
    Output(usize),
    And,
    Or,
    Not,
    Buf,
    Const(bool),
}

impl NetKind {
    pub fn arity(self) -> usize {
        match self {
            NetKind::Input(_) | NetKind::Const(_) => 0,
            NetKind::Output(_) | NetKind::Not | NetKind::Buf => 1,
            NetKind::And | NetKind::Or => 2,
        }
    }

    pub fn is_gate(self) -> bool {
        matches!(self, NetKind::And | NetKind::Or | NetKind::Not | NetKind::Buf)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateNode {
    pub kind: NetKind,
    pub fanin: Vec<NodeId>,
    pub meta: Provenance,
}

/// Gate-layer DAG over single trits. Nodes are stored in topological order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateNetlist {
    pub(crate) nodes: Vec<GateNode>,
    pub(crate) inputs: Vec<NodeId>,
    pub(crate) outputs: Vec<NodeId>,
}

impl GateNetlist {
    pub fn nodes(&self) -> &[GateNode] {
        &self.nodes
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn width_in(&self) -> usize {
        self.inputs.len()
    }

    pub fn width_out(&self) -> usize {
        self.outputs.len()
    }

    /// Number of AND, OR, NOT and BUF gates.
    pub fn gate_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind.is_gate()).count()
    }

    pub fn count(&self, kind: NetKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn eval(&self, inputs: &[Trit]) -> Result<Vec<Trit>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::WidthMismatch {
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        let mut v = vec![Trit::Zero; self.nodes.len()];
        for (id, n) in self.nodes.iter().enumerate() {
            let f = &n.fanin;
            v[id] = match n.kind {
                NetKind::Input(p) => inputs[p - 1],
                NetKind::Const(c) => Trit::from_bool(c),
                NetKind::Output(_) | NetKind::Buf => v[f[0]],
                NetKind::Not => v[f[0]].not(),
                NetKind::And => v[f[0]].and(v[f[1]]),
                NetKind::Or => v[f[0]].or(v[f[1]]),
            };
        }
        Ok(self.outputs.iter().map(|&o| v[o]).collect())
    }

    /// Evaluate 64 input vectors at once, one per lane.
    pub fn eval_packed(&self, inputs: &[Lanes]) -> Result<Vec<Lanes>> {
        let mut scratch = Vec::new();
        self.eval_packed_into(inputs, &mut scratch)
    }

    /// As [`Self::eval_packed`], reusing `scratch` across calls.
    pub fn eval_packed_into(&self, inputs: &[Lanes], scratch: &mut Vec<Lanes>) -> Result<Vec<Lanes>> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::WidthMismatch {
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        scratch.clear();
        scratch.resize(self.nodes.len(), Lanes::default());
        let v = scratch;
        for (id, n) in self.nodes.iter().enumerate() {
            let f = &n.fanin;
            v[id] = match n.kind {
                NetKind::Input(p) => inputs[p - 1],
                NetKind::Const(false) => Lanes::ZERO,
                NetKind::Const(true) => Lanes::ONE,
                NetKind::Output(_) | NetKind::Buf => v[f[0]],
                NetKind::Not => v[f[0]].not(),
                NetKind::And => v[f[0]].and(v[f[1]]),
                NetKind::Or => v[f[0]].or(v[f[1]]),
            };
        }
        Ok(self.outputs.iter().map(|&o| v[o]).collect())
    }

    /// Copy this netlist into `b` with its inputs fed from `inputs`.
    /// Returns the ids driving each output port.
    pub fn instantiate_into<T>(&self, b: &mut GateBuilder, inputs: &[NodeId], tag: T) -> Result<Vec<NodeId>>
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
                NetKind::Input(p) => inputs[p - 1],
                NetKind::Output(_) => map[n.fanin[0]],
                k => {
                    let fanin = n.fanin.iter().map(|&f| map[f]).collect();
                    b.push(k, fanin, tag(&n.meta))
                }
            };
        }
        Ok(self.outputs.iter().map(|&o| map[o]).collect())
    }
}

#[derive(Debug, Default)]
pub struct GateBuilder {
    nodes: Vec<GateNode>,
}

impl GateBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn push(&mut self, kind: NetKind, fanin: Vec<NodeId>, meta: Provenance) -> NodeId {
        debug_assert_eq!(fanin.len(), kind.arity());
        debug_assert!(fanin.iter().all(|&f| f < self.nodes.len()));
        self.nodes.push(GateNode { kind, fanin, meta });
        self.nodes.len() - 1
    }

    pub fn input(&mut self, port: usize) -> NodeId {
        self.push(NetKind::Input(port), vec![], Provenance::default())
    }

    pub fn output(&mut self, port: usize, a: NodeId) -> NodeId {
        self.push(NetKind::Output(port), vec![a], Provenance::default())
    }

    pub fn and(&mut self, a: NodeId, b: NodeId, meta: Provenance) -> NodeId {
        self.push(NetKind::And, vec![a, b], meta)
    }

    pub fn or(&mut self, a: NodeId, b: NodeId, meta: Provenance) -> NodeId {
        self.push(NetKind::Or, vec![a, b], meta)
    }

    pub fn not(&mut self, a: NodeId, meta: Provenance) -> NodeId {
        self.push(NetKind::Not, vec![a], meta)
    }

    pub fn buf(&mut self, a: NodeId, meta: Provenance) -> NodeId {
        self.push(NetKind::Buf, vec![a], meta)
    }

    pub fn konst(&mut self, c: bool, meta: Provenance) -> NodeId {
        self.push(NetKind::Const(c), vec![], meta)
    }

    pub fn finish(self) -> Result<GateNetlist> {
        let inputs = collect_ports(&self.nodes, |n: &GateNode| match n.kind {
            NetKind::Input(p) => Some(p),
            _ => None,
        })?;
        let outputs = collect_ports(&self.nodes, |n: &GateNode| match n.kind {
            NetKind::Output(p) => Some(p),
            _ => None,
        })?;
        Ok(GateNetlist {
            nodes: self.nodes,
            inputs,
            outputs,
        })
    }
}
