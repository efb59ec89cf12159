// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::ir::{NodeId, OpBuilder, OpGraph, OpKind};

/// Duplicate operator nodes until every OPC drives at most `f` sinks.
///
/// Copy counts are computed from the outputs backwards: a node needs
/// `⌈demand / f⌉` copies, where `demand` sums the copy counts of its
/// consumers. Inputs, constants and buffers are never copied. Sinks are
/// assigned to copies greedily in id order, filling each copy up to `f`
/// before opening the next.
pub fn bound_fanout(g: &OpGraph, f: usize) -> Result<OpGraph> {
    if f < 3 {
        return Err(Error::FanoutTooSmall(f));
    }
    let nodes = g.nodes();
    let n = nodes.len();
    let mut copies = vec![1usize; n];
    let mut demand = vec![0usize; n];
    for id in (0..n).rev() {
        if matches!(nodes[id].kind, OpKind::Opc(_)) {
            copies[id] = demand[id].div_ceil(f).max(1);
        }
        for &x in &nodes[id].fanin {
            demand[x] += copies[id];
        }
    }

    let mut b = OpBuilder::new();
    // per original node: its copies and the sinks already attached to each
    let mut made: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
    let take = |made: &mut Vec<Vec<(NodeId, usize)>>, x: NodeId| -> NodeId {
        let slots = &mut made[x];
        let k = slots
            .iter()
            .position(|&(_, used)| used < f)
            .unwrap_or(slots.len() - 1);
        slots[k].1 += 1;
        slots[k].0
    };
    for (id, node) in nodes.iter().enumerate() {
        for c in 0..copies[id] {
            let mut meta = node.meta.clone();
            if c > 0 {
                meta.dup = Some(c as u32);
            }
            let new = match node.kind {
                OpKind::Input(p) => b.input(p),
                OpKind::Output(p) => {
                    let x = take(&mut made, node.fanin[0]);
                    b.output(p, x)
                }
                OpKind::Const(v) => b.konst(v, meta),
                OpKind::Buf => {
                    let x = take(&mut made, node.fanin[0]);
                    b.buf(x, meta)
                }
                OpKind::Opc(r) => {
                    let x = take(&mut made, node.fanin[0]);
                    let y = take(&mut made, node.fanin[1]);
                    b.opc(r, x, y, meta)
                }
            };
            made[id].push((new, 0));
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{metrics, OpRole, Provenance};

    #[test]
    fn star_is_split_across_copies() {
        // one node feeding ten consumers
        let mut b = OpBuilder::new();
        let d = b.inputs(11);
        let hub = b.opc(OpRole::Diamond, d[0], d[1], Provenance::default());
        for (i, &x) in d[1..].iter().enumerate() {
            let o = b.opc(OpRole::Diamond, hub, x, Provenance::default());
            b.output(i + 1, o);
        }
        let g = b.finish().unwrap();
        let h = bound_fanout(&g, 3).unwrap();
        let m = metrics(&h);
        assert!(m.max_fanout <= 3);
        assert_eq!(h.count_opc(), g.count_opc() + 3);
        assert!(bound_fanout(&g, 1).is_err());
    }
}
