// SPDX-License-Identifier: Apache-2.0

use crate::error::Result;
use crate::ir::OpGraph;

/// Free-monoid stand-in for an associative operator: a value is the
/// contiguous input range it aggregates. Combining non-adjacent ranges, or
/// combining in the wrong order, is recorded as `Invalid`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Span {
    Range(usize, usize),
    Invalid,
}

impl Span {
    pub fn unit(i: usize) -> Span {
        Span::Range(i, i)
    }

    pub fn combine(a: Span, b: Span) -> Span {
        match (a, b) {
            (Span::Range(lo, m), Span::Range(m2, hi)) if m + 1 == m2 => Span::Range(lo, hi),
            _ => Span::Invalid,
        }
    }

    pub fn range(self) -> Option<(usize, usize)> {
        match self {
            Span::Range(a, b) => Some((a, b)),
            Span::Invalid => None,
        }
    }
}

/// Evaluate a graph of `⊕` nodes symbolically; input port `i` is `[i, i]`.
pub fn eval_spans(g: &OpGraph) -> Result<Vec<Span>> {
    let inputs: Vec<Span> = (1..=g.width_in()).map(Span::unit).collect();
    g.eval_with(&inputs, |_, a, b| Span::combine(*a, *b), |_| Span::Invalid)
}

/// Whether output `i` aggregates exactly inputs `1..=i`, for every `i`.
pub fn is_prefix_circuit(g: &OpGraph) -> Result<bool> {
    let out = eval_spans(g)?;
    Ok(out.len() == g.width_in() && out.iter().enumerate().all(|(i, s)| *s == Span::Range(1, i + 1)))
}
