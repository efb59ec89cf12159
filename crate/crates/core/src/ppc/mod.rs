// SPDX-License-Identifier: Apache-2.0

//! Parallel prefix circuits over an associative operator.
//!
//! Every generator goes through a [`Shape`]: right nodes keep depth, left
//! nodes halve the width at the cost of one extra level on all but the last
//! output. The Fibonacci tree interleaves the two so that depth stays at
//! `log B` while size drops well below the all-right recursion.

mod build;
mod fanout;
pub mod predict;
mod shape;
pub mod symbolic;

use std::fmt;
use std::str::FromStr;

pub use fanout::bound_fanout;
pub use predict::{fib, Quantity};
pub use shape::{ceil_log2, RecKind, RecNode, RecTree, Shape, Q};

use crate::error::{Error, Result};
use crate::ir::{OpBuilder, OpGraph, OpRole, Provenance};
use build::{emit_serial, Emitter};

/// How a right node splits its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Split {
    /// Left part is the largest power of two below the width.
    #[default]
    Unbalanced,
    /// Left part is `⌈B/2⌉`.
    Balanced,
}

impl Split {
    pub fn shape(self, width: usize) -> Shape {
        match self {
            Split::Unbalanced => Shape::unbalanced(width),
            Split::Balanced => Shape::balanced(width),
        }
    }

    fn base(self) -> fn(usize) -> Shape {
        match self {
            Split::Unbalanced => Shape::unbalanced,
            Split::Balanced => Shape::balanced,
        }
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unbalanced" => Ok(Split::Unbalanced),
            "balanced" => Ok(Split::Balanced),
            _ => Err(Error::Param(format!("unknown split {s:?}"))),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Unbalanced => "unbalanced",
            Split::Balanced => "balanced",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fanout {
    #[default]
    Unbounded,
    /// Buffered, then duplicated until every operator drives at most `f`.
    Bounded(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpcConfig {
    pub width: usize,
    /// Outer left steps; each adds one level and roughly halves the size
    /// of what remains.
    pub k: usize,
    pub fanout: Fanout,
    pub split: Split,
}

impl PpcConfig {
    pub fn new(width: usize) -> Self {
        PpcConfig {
            width,
            k: 0,
            fanout: Fanout::Unbounded,
            split: Split::Unbalanced,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::Param("prefix width must be positive".into()));
        }
        if self.k > ceil_log2(self.width) {
            return Err(Error::Param(format!(
                "k = {} exceeds ceil(log2 {}) = {}",
                self.k,
                self.width,
                ceil_log2(self.width)
            )));
        }
        if let Fanout::Bounded(f) = self.fanout {
            if f < 3 {
                return Err(Error::FanoutTooSmall(f));
            }
        }
        Ok(())
    }
}

/// A generated prefix circuit with the recursion it came from.
#[derive(Clone, Debug)]
pub struct Ppc {
    pub graph: OpGraph,
    /// `None` for circuits not built from a shape (serial, left step over
    /// an arbitrary inner graph).
    pub shape: Option<Shape>,
    pub buffered: bool,
    pub fanout_bound: Option<usize>,
}

/// Build the circuit for `shape`, optionally with buffers.
pub fn build_shape(shape: &Shape, buffered: bool) -> Result<Ppc> {
    let mut b = OpBuilder::new();
    let ins = b.inputs(shape.width());
    let outs = Emitter::new(&mut b, buffered).emit(shape, &ins, "T", 0);
    for (i, o) in outs.into_iter().enumerate() {
        b.output(i + 1, o);
    }
    Ok(Ppc {
        graph: b.finish()?,
        shape: Some(shape.clone()),
        buffered,
        fanout_bound: None,
    })
}

/// Chain of `B - 1` operators.
pub fn build_serial(width: usize) -> Result<OpGraph> {
    if width == 0 {
        return Err(Error::Param("prefix width must be positive".into()));
    }
    let mut b = OpBuilder::new();
    let ins = b.inputs(width);
    for (i, o) in emit_serial(&mut b, &ins).into_iter().enumerate() {
        b.output(i + 1, o);
    }
    b.finish()
}

/// One left step of width `B` around an existing circuit on `⌈B/2⌉` inputs.
pub fn build_left_step(inner: &OpGraph, width: usize) -> Result<OpGraph> {
    let half = width.div_ceil(2);
    if width == 0 || inner.width_in() != half || inner.width_out() != half {
        return Err(Error::WidthMismatch {
            expected: half,
            got: inner.width_in(),
        });
    }
    let meta = |role: &str| Provenance::role(role);
    let mut b = OpBuilder::new();
    let d = b.inputs(width);
    let mut child: Vec<_> = d
        .chunks_exact(2)
        .map(|p| b.opc(OpRole::Diamond, p[0], p[1], meta("pre")))
        .collect();
    if width % 2 == 1 {
        child.push(d[width - 1]);
    }
    let c = inner.instantiate_into(&mut b, &child, |m| Provenance {
        tree: Some(format!("c{}", m.tree.as_deref().unwrap_or(""))),
        ..m.clone()
    })?;
    let mut out = vec![d[0]];
    for i in 1..=width / 2 {
        out.push(c[i - 1]);
        if 2 * i + 1 < width {
            out.push(b.opc(OpRole::Diamond, c[i - 1], d[2 * i], meta("post")));
        }
    }
    if width % 2 == 1 && width > 1 {
        out.push(c[c.len() - 1]);
    }
    for (i, o) in out.into_iter().enumerate() {
        b.output(i + 1, o);
    }
    b.finish()
}

/// The Fibonacci-tree circuit on `2^b` inputs.
pub fn build_tree(b: usize) -> Result<Ppc> {
    build_shape(&Shape::tree(b), false)
}

/// Arbitrary width with `k` outer steps, either split, either fan-out mode.
pub fn build_general(cfg: &PpcConfig) -> Result<Ppc> {
    cfg.validate()?;
    let shape = Shape::with_steps(cfg.width, cfg.k, cfg.split.base())?;
    match cfg.fanout {
        Fanout::Unbounded => build_shape(&shape, false),
        Fanout::Bounded(f) => with_fanout(&build_shape(&shape, true)?, f),
    }
}

/// Rebuild a shape-derived circuit with buffers placed so that only nodes
/// driving the last output of a subcircuit exceed fan-out two.
pub fn insert_buffers(p: &Ppc) -> Result<Ppc> {
    let shape = p.shape.as_ref().ok_or(Error::MissingProvenance)?;
    if p.fanout_bound.is_some() {
        return Err(Error::Param("circuit is already fan-out bounded".into()));
    }
    build_shape(shape, true)
}

/// Bound operator fan-out by `f` on a buffered circuit.
pub fn with_fanout(p: &Ppc, f: usize) -> Result<Ppc> {
    if !p.buffered {
        return Err(Error::Param("fan-out bounding expects a buffered circuit".into()));
    }
    Ok(Ppc {
        graph: bound_fanout(&p.graph, f)?,
        shape: p.shape.clone(),
        buffered: true,
        fanout_bound: Some(f),
    })
}

#[cfg(test)]
mod tests {
    use super::symbolic::is_prefix_circuit;
    use super::*;
    use crate::ir::metrics;

    #[test]
    fn small_trees_are_prefix_circuits() {
        for b in 0..6 {
            let p = build_tree(b).unwrap();
            assert!(is_prefix_circuit(&p.graph).unwrap(), "b = {b}");
            let m = metrics(&p.graph);
            assert_eq!(m.size_logic as i128, predict::tree_size(b).unwrap());
            assert_eq!(m.depth, b);
        }
    }

    #[test]
    fn serial_and_left_step() {
        let s = build_serial(5).unwrap();
        assert_eq!(s.count_opc(), 4);
        assert_eq!(metrics(&s).depth, 4);
        assert!(is_prefix_circuit(&s).unwrap());
        let one = build_serial(1).unwrap();
        let two = build_left_step(&one, 2).unwrap();
        assert_eq!(two.count_opc(), 1);
        let inner = build_tree(2).unwrap().graph;
        let eight = build_left_step(&inner, 8).unwrap();
        assert!(is_prefix_circuit(&eight).unwrap());
        let m = metrics(&eight);
        assert!(m.size_logic <= 11);
        assert_eq!(m.depth, 4);
        assert!(build_left_step(&inner, 5).is_err());
        for w in 1usize..20 {
            let inner = build_serial(w.div_ceil(2)).unwrap();
            assert!(is_prefix_circuit(&build_left_step(&inner, w).unwrap()).unwrap());
        }
    }

    #[test]
    fn config_errors() {
        let mut c = PpcConfig::new(6);
        c.k = 4;
        assert!(build_general(&c).is_err());
        c.k = 0;
        c.fanout = Fanout::Bounded(2);
        assert!(matches!(build_general(&c), Err(Error::FanoutTooSmall(2))));
        let s = Ppc {
            graph: build_serial(3).unwrap(),
            shape: None,
            buffered: false,
            fanout_bound: None,
        };
        assert!(matches!(insert_buffers(&s), Err(Error::MissingProvenance)));
    }
}
