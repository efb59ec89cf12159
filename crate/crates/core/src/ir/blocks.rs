// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use super::{GateBuilder, GateNetlist, NodeId, OpRole, Provenance};

/// `y(x + sel2) + x·sel1`: four gates, depth three.
///
/// With `sel1 = sel2 = s` this is the multiplexer `s ? x : y`, and it is
/// the closure of that function since all prime implicants are present.
pub fn xmux(b: &mut GateBuilder, sel1: NodeId, sel2: NodeId, x: NodeId, y: NodeId) -> NodeId {
    let m = Provenance::role("xmux");
    let t = b.or(sel2, x, m.clone());
    let u = b.and(y, t, m.clone());
    let v = b.and(x, sel1, m.clone());
    b.or(u, v, m)
}

/// A wiring pin of a block: an input port, possibly negated.
#[derive(Clone, Copy)]
enum Pin {
    P(usize),
    N(usize),
}

use Pin::{N, P};

/// Rows of `(sel1, sel2, x, y)` over ports `s1 s2 b1 b2` = `1 2 3 4`.
const DIAMOND_WIRING: [[Pin; 4]; 2] = [[P(3), N(3), N(2), P(1)], [P(4), N(4), N(1), P(2)]];
const OUT_WIRING: [[Pin; 4]; 2] = [[N(1), N(2), P(4), P(3)], [P(2), P(1), P(3), P(4)]];

fn block(wiring: &[[Pin; 4]; 2], share: bool) -> GateNetlist {
    let mut b = GateBuilder::new();
    let ins: Vec<NodeId> = (1..=4).map(|p| b.input(p)).collect();
    let mut negs: HashMap<usize, NodeId> = HashMap::new();
    let mut outs = Vec::new();
    for row in wiring {
        let mut w = [0; 4];
        for (k, pin) in row.iter().enumerate() {
            w[k] = match *pin {
                P(p) => ins[p - 1],
                N(p) if share => *negs
                    .entry(p)
                    .or_insert_with(|| b.not(ins[p - 1], Provenance::role("inv"))),
                N(p) => b.not(ins[p - 1], Provenance::role("inv")),
            };
        }
        outs.push(xmux(&mut b, w[0], w[1], w[2], w[3]));
    }
    for (i, o) in outs.into_iter().enumerate() {
        b.output(i + 1, o);
    }
    b.finish().expect("dense ports")
}

/// Gate block for `⋄_M`. Ports: `s1 s2 b1 b2` in, two trits out.
pub fn diamond_block(share_inverters: bool) -> GateNetlist {
    block(&DIAMOND_WIRING, share_inverters)
}

/// Gate block for `out_M`. Ports as for [`diamond_block`].
pub fn out_block(share_inverters: bool) -> GateNetlist {
    block(&OUT_WIRING, share_inverters)
}

/// Gate templates used by [`super::expand`].
#[derive(Clone, Debug)]
pub struct BlockLibrary {
    pub diamond: Option<GateNetlist>,
    pub out: Option<GateNetlist>,
}

impl BlockLibrary {
    /// XMUX-based blocks. `share_inverters` builds one inverter per negated
    /// port inside a block; otherwise one per use.
    pub fn standard(share_inverters: bool) -> Self {
        BlockLibrary {
            diamond: Some(diamond_block(share_inverters)),
            out: Some(out_block(share_inverters)),
        }
    }

    pub fn template(&self, role: OpRole) -> Option<&GateNetlist> {
        match role {
            OpRole::Diamond => self.diamond.as_ref(),
            OpRole::Out => self.out.as_ref(),
        }
    }
}

impl Default for BlockLibrary {
    fn default() -> Self {
        BlockLibrary::standard(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsm::{diamond_m, out_m};
    use crate::ir::{metrics, NetKind};
    use crate::kleene::{closure_apply_fn, Pair, Trit, TritVec};

    #[test]
    fn xmux_is_closure_of_mux() {
        let mut b = GateBuilder::new();
        let ins: Vec<NodeId> = (1..=4).map(|p| b.input(p)).collect();
        let o = xmux(&mut b, ins[0], ins[1], ins[2], ins[3]);
        b.output(1, o);
        let g = b.finish().unwrap();
        let mux = |v: &TritVec| {
            let r = if v.get(1) == Trit::One { v.get(3) } else { v.get(4) };
            TritVec::from_trits(&[r]).unwrap()
        };
        for s in Trit::ALL {
            for x in Trit::ALL {
                for y in Trit::ALL {
                    let v = TritVec::from_trits(&[s, s, x, y]).unwrap();
                    let want = closure_apply_fn(mux, &v).unwrap().get(1);
                    assert_eq!(g.eval(&[s, s.not(), x, y]).unwrap()[0], want, "s={s} x={x} y={y}");
                }
            }
        }
        assert_eq!(g.gate_count(), 4);
        assert_eq!(metrics(&g).depth, 3);
    }

    #[test]
    fn blocks_compute_closures() {
        for share in [true, false] {
            let d = diamond_block(share);
            let o = out_block(share);
            for s in Pair::all() {
                for x in Pair::all() {
                    let ins = [s.0, s.1, x.0, x.1];
                    let want = diamond_m(s, x);
                    assert_eq!(d.eval(&ins).unwrap(), [want.0, want.1], "{s} ⋄ {x}");
                    let want = out_m(s, x);
                    assert_eq!(o.eval(&ins).unwrap(), [want.0, want.1], "out({s}, {x})");
                }
            }
        }
    }

    #[test]
    fn block_sizes() {
        let d = diamond_block(true);
        assert_eq!(d.count(NetKind::Not), 4);
        assert_eq!(d.gate_count(), 12);
        assert_eq!(out_block(true).gate_count(), 10);
        // every negated port is used once per block, so sharing saves nothing
        assert_eq!(diamond_block(false).gate_count(), 12);
        assert_eq!(out_block(false).gate_count(), 10);
    }
}
