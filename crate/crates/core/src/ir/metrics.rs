// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::Serialize;

use super::{GateNetlist, NetKind, NodeId, OpGraph, OpKind, Provenance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    Input,
    Output,
    Const,
    /// OPC at the operator layer, AND/OR/NOT at the gate layer.
    Logic,
    Buf,
}

/// Read-only view shared by both layers.
pub trait Circuit {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn fanin(&self, id: NodeId) -> &[NodeId];
    fn class(&self, id: NodeId) -> NodeClass;
    fn meta(&self, id: NodeId) -> &Provenance;
    /// Whether a buffer counts as one level of depth on this layer.
    fn buf_has_depth(&self) -> bool;
}

impl Circuit for OpGraph {
    fn len(&self) -> usize {
        self.nodes.len()
    }
    fn fanin(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].fanin
    }
    fn class(&self, id: NodeId) -> NodeClass {
        match self.nodes[id].kind {
            OpKind::Input(_) => NodeClass::Input,
            OpKind::Output(_) => NodeClass::Output,
            OpKind::Const(_) => NodeClass::Const,
            OpKind::Opc(_) => NodeClass::Logic,
            OpKind::Buf => NodeClass::Buf,
        }
    }
    fn meta(&self, id: NodeId) -> &Provenance {
        &self.nodes[id].meta
    }
    fn buf_has_depth(&self) -> bool {
        false
    }
}

impl Circuit for GateNetlist {
    fn len(&self) -> usize {
        self.nodes.len()
    }
    fn fanin(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].fanin
    }
    fn class(&self, id: NodeId) -> NodeClass {
        match self.nodes[id].kind {
            NetKind::Input(_) => NodeClass::Input,
            NetKind::Output(_) => NodeClass::Output,
            NetKind::Const(_) => NodeClass::Const,
            NetKind::Buf => NodeClass::Buf,
            NetKind::And | NetKind::Or | NetKind::Not => NodeClass::Logic,
        }
    }
    fn meta(&self, id: NodeId) -> &Provenance {
        &self.nodes[id].meta
    }
    fn buf_has_depth(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    /// OPC nodes, or AND/OR/NOT gates at the gate layer.
    pub size_logic: usize,
    pub size_buf: usize,
    /// Longest path counting logic nodes, plus buffers on the gate layer.
    pub depth: usize,
    /// Longest path counting logic nodes and buffers.
    pub buffered_depth: usize,
    /// Largest sink count over non-input nodes.
    pub max_fanout: usize,
    /// Largest sink count over input nodes.
    pub max_input_fanout: usize,
    /// Sink count to number of non-input nodes with that count.
    pub fanout_histogram: BTreeMap<usize, usize>,
}

/// Sink count of every node. An OUTPUT node counts as one sink of its driver.
pub fn sinks<C: Circuit + ?Sized>(c: &C) -> Vec<usize> {
    let mut s = vec![0; c.len()];
    for id in 0..c.len() {
        for &f in c.fanin(id) {
            s[f] += 1;
        }
    }
    s
}

pub fn metrics<C: Circuit + ?Sized>(c: &C) -> Metrics {
    let mut m = Metrics::default();
    let mut depth = vec![0usize; c.len()];
    let mut bdepth = vec![0usize; c.len()];
    for id in 0..c.len() {
        let class = c.class(id);
        let d_in = c.fanin(id).iter().map(|&f| depth[f]).max().unwrap_or(0);
        let b_in = c.fanin(id).iter().map(|&f| bdepth[f]).max().unwrap_or(0);
        let (step, bstep) = match class {
            NodeClass::Logic => (1, 1),
            NodeClass::Buf => (c.buf_has_depth() as usize, 1),
            _ => (0, 0),
        };
        depth[id] = d_in + step;
        bdepth[id] = b_in + bstep;
        match class {
            NodeClass::Logic => m.size_logic += 1,
            NodeClass::Buf => m.size_buf += 1,
            _ => {}
        }
    }
    m.depth = depth.iter().copied().max().unwrap_or(0);
    m.buffered_depth = bdepth.iter().copied().max().unwrap_or(0);
    for (id, s) in sinks(c).into_iter().enumerate() {
        match c.class(id) {
            NodeClass::Input => m.max_input_fanout = m.max_input_fanout.max(s),
            NodeClass::Output => {}
            _ => {
                m.max_fanout = m.max_fanout.max(s);
                *m.fanout_histogram.entry(s).or_default() += 1;
            }
        }
    }
    m
}

/// Non-input nodes whose sink count exceeds `bound`, skipping those for
/// which `exempt` holds.
pub fn fanout_violations<C, F>(c: &C, bound: usize, exempt: F) -> Vec<NodeId>
where
    C: Circuit + ?Sized,
    F: Fn(NodeId) -> bool,
{
    sinks(c)
        .into_iter()
        .enumerate()
        .filter(|&(id, s)| s > bound && c.class(id) != NodeClass::Input && !exempt(id))
        .map(|(id, _)| id)
        .collect()
}
