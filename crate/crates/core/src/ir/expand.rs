// SPDX-License-Identifier: Apache-2.0

use super::{BlockLibrary, GateBuilder, GateNetlist, NodeId, OpGraph, OpKind, Provenance};
use crate::error::{Error, Result};
use crate::kleene::Trit;

/// Replace every OPC by its gate block.
///
/// Operator port `i` becomes gate ports `2i-1` and `2i`. Buffers become
/// one BUF per wire; constants become CONST gates.
pub fn expand(g: &OpGraph, lib: &BlockLibrary) -> Result<GateNetlist> {
    let mut b = GateBuilder::new();
    let mut wires: Vec<[NodeId; 2]> = vec![[usize::MAX; 2]; g.nodes.len()];
    for (id, n) in g.nodes.iter().enumerate() {
        let mut meta = n.meta.clone();
        meta.block = Some(id);
        wires[id] = match n.kind {
            OpKind::Input(p) => [b.input(2 * p - 1), b.input(2 * p)],
            OpKind::Output(p) => {
                let w = wires[n.fanin[0]];
                b.output(2 * p - 1, w[0]);
                b.output(2 * p, w[1]);
                w
            }
            OpKind::Const(c) => {
                let bit = |t: Trit| match t {
                    Trit::Zero => Ok(false),
                    Trit::One => Ok(true),
                    Trit::Meta => Err(Error::Malformed("metastable constant".into())),
                };
                [b.konst(bit(c.0)?, meta.clone()), b.konst(bit(c.1)?, meta)]
            }
            OpKind::Buf => {
                let w = wires[n.fanin[0]];
                [b.buf(w[0], meta.clone()), b.buf(w[1], meta)]
            }
            OpKind::Opc(role) => {
                let t = lib
                    .template(role)
                    .ok_or_else(|| Error::MissingTemplate(role.to_string()))?;
                let (x, y) = (wires[n.fanin[0]], wires[n.fanin[1]]);
                let tag = |m: &Provenance| Provenance {
                    role: m.role.clone(),
                    ..meta.clone()
                };
                let o = t.instantiate_into(&mut b, &[x[0], x[1], y[0], y[1]], tag)?;
                [o[0], o[1]]
            }
        };
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{metrics, OpBuilder, OpRole};
    use crate::kleene::Pair;

    #[test]
    fn single_diamond_expands_to_block() {
        let mut b = OpBuilder::new();
        let d = b.inputs(2);
        let x = b.opc(OpRole::Diamond, d[0], d[1], Provenance::default());
        b.output(1, x);
        let g = b.finish().unwrap();
        let n = expand(&g, &BlockLibrary::default()).unwrap();
        assert_eq!(n.gate_count(), 12);
        assert_eq!(metrics(&n).depth, 4);
        for s in Pair::all() {
            for t in Pair::all() {
                let want = g.eval_pairs(&[s, t]).unwrap()[0];
                assert_eq!(n.eval(&[s.0, s.1, t.0, t.1]).unwrap(), [want.0, want.1]);
            }
        }
    }

    #[test]
    fn missing_template_is_an_error() {
        let mut b = OpBuilder::new();
        let d = b.inputs(2);
        let x = b.opc(OpRole::Out, d[0], d[1], Provenance::default());
        b.output(1, x);
        let g = b.finish().unwrap();
        let lib = BlockLibrary {
            out: None,
            ..BlockLibrary::default()
        };
        assert!(matches!(expand(&g, &lib), Err(Error::MissingTemplate(_))));
    }
}
