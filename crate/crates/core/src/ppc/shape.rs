// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational used for duplication labels and bounds.
pub type Q = Ratio<i128>;

/// Recursion pattern of a prefix circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    /// One input passed through.
    Leaf,
    /// Prefix circuits on the two halves, then the left half's last output
    /// is combined into every output of the right half.
    Right { left: Box<Shape>, right: Box<Shape> },
    /// Adjacent pairs are combined, a prefix circuit runs on the pairs, and
    /// the odd outputs are patched up afterwards.
    Left {
        width: usize,
        child: Box<Shape>,
        /// One of the outer steps placed above the recursion tree. Steps
        /// buffer their outputs instead of their odd inputs.
        step: bool,
    },
}

pub(crate) fn is_pow2(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `⌈log2 n⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

impl Shape {
    pub fn width(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Right { left, right } => left.width() + right.width(),
            Shape::Left { width, .. } => *width,
        }
    }

    fn right(left: Shape, right: Shape) -> Shape {
        Shape::Right {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Left node over `width` inputs; a single input degenerates to a leaf.
    fn left(width: usize, child: Shape) -> Shape {
        debug_assert_eq!(child.width(), width.div_ceil(2));
        if width == 1 {
            Shape::Leaf
        } else {
            Shape::Left {
                width,
                child: Box::new(child),
                step: false,
            }
        }
    }

    /// The Fibonacci tree `T_b` on `2^b` inputs.
    pub fn tree(b: usize) -> Shape {
        match b {
            0 => Shape::Leaf,
            1 => Shape::right(Shape::Leaf, Shape::Leaf),
            _ => Shape::right(Shape::left(1 << (b - 1), Shape::tree(b - 2)), Shape::tree(b - 1)),
        }
    }

    /// Depth-optimal shape for any width: at the root, a left node over the
    /// largest power of two below `n` and a recursive right part.
    pub fn unbalanced(n: usize) -> Shape {
        assert!(n >= 1);
        if is_pow2(n) {
            return Shape::tree(ceil_log2(n));
        }
        let b = ceil_log2(n);
        let half = 1 << (b - 1);
        Shape::right(Shape::left(half, Shape::tree(b - 2)), Shape::unbalanced(n - half))
    }

    /// Depth-optimal shape splitting every right node at `⌈n/2⌉`.
    pub fn balanced(n: usize) -> Shape {
        assert!(n >= 1);
        if n == 1 {
            return Shape::Leaf;
        }
        let m = n.div_ceil(2);
        Shape::right(
            Shape::left(m, Shape::balanced(m.div_ceil(2))),
            Shape::balanced(n - m),
        )
    }

    /// `k` outer left steps above `base` applied to the remaining width.
    pub fn with_steps(n: usize, k: usize, base: fn(usize) -> Shape) -> Result<Shape> {
        if n == 0 {
            return Err(Error::Param("prefix width must be positive".into()));
        }
        if k > ceil_log2(n) {
            return Err(Error::Param(format!(
                "k = {k} exceeds ceil(log2 {n}) = {}",
                ceil_log2(n)
            )));
        }
        Ok(Self::steps(n, k, base))
    }

    fn steps(n: usize, k: usize, base: fn(usize) -> Shape) -> Shape {
        if k == 0 {
            return base(n);
        }
        Shape::Left {
            width: n,
            child: Box::new(Self::steps(n.div_ceil(2), k - 1, base)),
            step: true,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Leaf => write!(f, "."),
            Shape::Right { left, right } => write!(f, "R({left} {right})"),
            Shape::Left { width, child, step } => {
                write!(f, "{}{width}({child})", if *step { "S" } else { "L" })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecKind {
    Leaf,
    Right,
    Left,
    Step,
}

/// One node of a recursion tree with its labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecNode {
    pub kind: RecKind,
    /// Path from the root: `T`, then `l`/`r` for children of a right node
    /// and `c` for the child of a left node.
    pub path: String,
    pub depth: usize,
    pub width: usize,
    /// Raw inputs `[lo, hi]` covered by this node.
    pub range: (usize, usize),
    /// Number of left-node ancestors this node sits below.
    pub alpha: u32,
    /// Duplication label for fan-out bound `f`; zero when unbounded.
    pub a: Q,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

impl RecNode {
    pub fn range_len(&self) -> usize {
        self.range.1 + 1 - self.range.0
    }
}

/// Flattened recursion tree; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecTree {
    pub nodes: Vec<RecNode>,
}

impl RecTree {
    /// Label a shape. Ranges follow the raw inputs each node aggregates;
    /// duplication labels use fan-out bound `f` when given.
    pub fn new(shape: &Shape, f: Option<usize>) -> RecTree {
        let mut t = RecTree { nodes: Vec::new() };
        let spans: Vec<(usize, usize)> = (1..=shape.width()).map(|i| (i, i)).collect();
        t.visit(shape, &spans, "T".into(), 0, 0, Q::zero(), None, f);
        t
    }

    #[allow(clippy::too_many_arguments)]
    fn visit(
        &mut self,
        s: &Shape,
        spans: &[(usize, usize)],
        path: String,
        depth: usize,
        alpha: u32,
        a: Q,
        parent: Option<usize>,
        f: Option<usize>,
    ) -> usize {
        let id = self.nodes.len();
        let kind = match s {
            Shape::Leaf => RecKind::Leaf,
            Shape::Right { .. } => RecKind::Right,
            Shape::Left { step: true, .. } => RecKind::Step,
            Shape::Left { .. } => RecKind::Left,
        };
        self.nodes.push(RecNode {
            kind,
            path: path.clone(),
            depth,
            width: spans.len(),
            range: (spans[0].0, spans[spans.len() - 1].1),
            alpha,
            a,
            children: Vec::new(),
            parent,
        });
        let div = |q: Q| match f {
            Some(f) => q / Q::from_integer(f as i128),
            None => Q::zero(),
        };
        match s {
            Shape::Leaf => {}
            Shape::Right { left, right } => {
                let m = left.width();
                let sib = Q::from_integer((spans.len() - m) as i128);
                let l = self.visit(
                    left,
                    &spans[..m],
                    format!("{path}l"),
                    depth + 1,
                    alpha,
                    div(a + sib),
                    Some(id),
                    f,
                );
                let r = self.visit(
                    right,
                    &spans[m..],
                    format!("{path}r"),
                    depth + 1,
                    alpha,
                    div(a),
                    Some(id),
                    f,
                );
                self.nodes[id].children = vec![l, r];
            }
            Shape::Left { child, .. } => {
                let merged: Vec<(usize, usize)> =
                    spans.chunks(2).map(|c| (c[0].0, c[c.len() - 1].1)).collect();
                let c = self.visit(
                    child,
                    &merged,
                    format!("{path}c"),
                    depth + 1,
                    alpha + 1,
                    a,
                    Some(id),
                    f,
                );
                self.nodes[id].children = vec![c];
            }
        }
        id
    }

    pub fn root(&self) -> &RecNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = &RecNode> {
        self.nodes.iter().filter(|n| n.kind == RecKind::Leaf)
    }

    pub fn of_kind(&self, kind: RecKind) -> impl Iterator<Item = &RecNode> {
        self.nodes.iter().filter(move |n| n.kind == kind)
    }

    /// Whether `id` is the left child of a right node.
    pub fn is_left_child(&self, id: usize) -> bool {
        match self.nodes[id].parent {
            Some(p) => self.nodes[p].kind == RecKind::Right && self.nodes[p].children[0] == id,
            None => false,
        }
    }
}
