// SPDX-License-Identifier: Apache-2.0

use super::shape::Shape;
use super::symbolic::Span;
use crate::ir::{NodeId, OpBuilder, OpKind, OpRole, Provenance};

/// Emits a prefix circuit for a [`Shape`] into an [`OpBuilder`].
///
/// With `buffered`, buffers are placed so that every node except those
/// driving the last output of a subcircuit has at most two sinks:
/// - on each use of an odd input of a left node (these are nodes of the
///   aggregation trees that feed the leaves),
/// - before each even output of a left node except its last,
/// - before the output of a right node that its left child's last output
///   provides.
///
/// Outer steps buffer their first and even outputs instead.
pub(crate) struct Emitter<'a> {
    pub b: &'a mut OpBuilder,
    pub buffered: bool,
    spans: Vec<Span>,
}

impl<'a> Emitter<'a> {
    pub fn new(b: &'a mut OpBuilder, buffered: bool) -> Self {
        Emitter {
            b,
            buffered,
            spans: Vec::new(),
        }
    }

    /// Symbolic range of an existing node; inputs of the builder are taken
    /// in port order, so input port `i` covers `[i, i]`.
    fn span(&mut self, id: NodeId) -> Span {
        self.sync();
        self.spans[id]
    }

    fn sync(&mut self) {
        while self.spans.len() < self.b.len() {
            let id = self.spans.len();
            let n = self.b.node(id);
            let s = match n.kind {
                OpKind::Input(p) => Span::unit(p),
                OpKind::Opc(_) => Span::combine(self.spans[n.fanin[0]], self.spans[n.fanin[1]]),
                OpKind::Buf | OpKind::Output(_) => self.spans[n.fanin[0]],
                OpKind::Const(_) => Span::Invalid,
            };
            self.spans.push(s);
        }
    }

    fn meta(&mut self, role: &str, path: &str, alpha: u32, from: &[NodeId]) -> Provenance {
        let span = from
            .iter()
            .map(|&f| self.span(f))
            .reduce(Span::combine)
            .unwrap_or(Span::Invalid);
        Provenance {
            role: Some(role.into()),
            tree: Some(path.into()),
            range: span.range().map(|(a, b)| [a, b]),
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    fn op(&mut self, a: NodeId, c: NodeId, role: &str, path: &str, alpha: u32) -> NodeId {
        let m = self.meta(role, path, alpha, &[a, c]);
        self.b.opc(OpRole::Diamond, a, c, m)
    }

    fn buf(&mut self, a: NodeId, role: &str, path: &str, alpha: u32) -> NodeId {
        let m = self.meta(role, path, alpha, &[a]);
        self.b.buf(a, m)
    }

    fn mark_last(&mut self, id: NodeId) {
        if !matches!(self.b.node(id).kind, OpKind::Input(_)) {
            self.b.meta_mut(id).last = true;
        }
    }

    /// Build `shape` over `inputs`; returns the output drivers.
    pub fn emit(&mut self, shape: &Shape, inputs: &[NodeId], path: &str, alpha: u32) -> Vec<NodeId> {
        debug_assert_eq!(shape.width(), inputs.len());
        let out = match shape {
            Shape::Leaf => inputs.to_vec(),
            Shape::Right { left, right } => {
                let m = left.width();
                let l = self.emit(left, &inputs[..m], &format!("{path}l"), alpha);
                let r = self.emit(right, &inputs[m..], &format!("{path}r"), alpha);
                let carry = l[m - 1];
                let mut out = l[..m - 1].to_vec();
                out.push(if self.buffered {
                    self.buf(carry, "buf-mid", path, alpha)
                } else {
                    carry
                });
                for &x in &r {
                    let o = self.op(carry, x, "combine", path, alpha);
                    out.push(o);
                }
                out
            }
            Shape::Left { width, child, step } => {
                let w = *width;
                let mut child_in: Vec<NodeId> = inputs
                    .chunks_exact(2)
                    .map(|p| self.op(p[0], p[1], "pre", path, alpha))
                    .collect();
                if w % 2 == 1 {
                    child_in.push(inputs[w - 1]);
                }
                let c = self.emit(child, &child_in, &format!("{path}c"), alpha + 1);
                let odd_role = if *step { "buf-out" } else { "buf-agg" };
                let mut out = Vec::with_capacity(w);
                out.push(if self.buffered {
                    self.buf(inputs[0], odd_role, path, alpha)
                } else {
                    inputs[0]
                });
                for i in 1..=w / 2 {
                    let ci = c[i - 1];
                    let last = i == c.len();
                    out.push(if self.buffered && !last {
                        self.buf(ci, "buf-out", path, alpha)
                    } else {
                        ci
                    });
                    if 2 * i + 1 < w {
                        let d = inputs[2 * i];
                        let d = if self.buffered && !*step {
                            self.buf(d, "buf-agg", path, alpha)
                        } else {
                            d
                        };
                        let o = self.op(ci, d, "post", path, alpha);
                        out.push(o);
                    }
                }
                if w % 2 == 1 {
                    out.push(c[c.len() - 1]);
                }
                out
            }
        };
        let last = out[out.len() - 1];
        self.mark_last(last);
        out
    }
}

/// Straight chain: `π_i = π_{i-1} ⊕ d_i`.
pub(crate) fn emit_serial(b: &mut OpBuilder, inputs: &[NodeId]) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::with_capacity(inputs.len());
    for (i, &d) in inputs.iter().enumerate() {
        let o = match out.last() {
            None => d,
            Some(&p) => b.opc(
                OpRole::Diamond,
                p,
                d,
                Provenance {
                    role: Some("serial".into()),
                    range: Some([1, i + 1]),
                    ..Default::default()
                },
            ),
        };
        out.push(o);
    }
    out
}
