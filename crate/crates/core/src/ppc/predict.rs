// SPDX-License-Identifier: Apache-2.0

//! Closed-form size and depth predictors. Fibonacci numbers start at
//! `F_0 = 0, F_1 = F_2 = 1`.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};

use super::shape::{ceil_log2, RecKind, RecTree, Shape, Q};
use crate::error::{Error, Result};

const MAX_EXP: usize = 100;

pub fn fib(n: usize) -> i128 {
    assert!(n <= 180, "F_{n} overflows i128");
    let (mut a, mut b) = (0i128, 1i128);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}

fn pow2(e: usize) -> Result<i128> {
    if e > MAX_EXP {
        return Err(Error::Param(format!("exponent {e} too large")));
    }
    Ok(1i128 << e)
}

/// Operator count of the Fibonacci-tree circuit on `2^b` inputs.
pub fn tree_size(b: usize) -> Result<i128> {
    Ok(pow2(b + 2)? - fib(b + 5) + 1)
}

pub fn tree_depth(b: usize) -> usize {
    b
}

/// Strict upper bound for the unbalanced split at `k = 0`.
pub fn cor2_bound(width: usize) -> Result<i128> {
    if width == 0 {
        return Err(Error::Param("width must be positive".into()));
    }
    let b = ceil_log2(width);
    Ok(5 * width as i128 - pow2(b)? - fib(b + 3))
}

/// Size bound with `k` outer steps, `(2 + 1/2^(k-1)) B - F_(⌈log B⌉-k+3)`.
pub fn thm5_bound(width: usize, k: usize) -> Result<Q> {
    if width == 0 {
        return Err(Error::Param("width must be positive".into()));
    }
    let lb = ceil_log2(width);
    if k > lb {
        return Err(Error::Param(format!("k = {k} exceeds ceil(log2 {width}) = {lb}")));
    }
    let coeff = Q::from_integer(2) + Q::new(2, pow2(k)?);
    Ok(coeff * Q::from_integer(width as i128) - Q::from_integer(fib(lb - k + 3)))
}

/// Published closed form for the buffers of the buffered tree circuit,
/// `2^b + 2^(b-1) - F_(b+3)`. Defined for `b >= 1`.
pub fn buffer_count(b: usize) -> Result<i128> {
    if b == 0 {
        return Err(Error::Param("buffer_count needs b >= 1".into()));
    }
    Ok(pow2(b)? + pow2(b - 1)? - fib(b + 3))
}

/// Buffers the construction actually places on the tree of `2^b` inputs:
/// `2^b - F_(b+1)` inside the recursion plus `2^b - F_(b+2)` on the
/// aggregation trees, i.e. `2^(b+1) - F_(b+3)`.
pub fn buffer_count_measured_form(b: usize) -> Result<i128> {
    Ok(pow2(b + 1)? - fib(b + 3))
}

/// Reference size `ℓ(⌈log ℓ⌉ - 1) + 1` of the Kogge-Stone network.
pub fn kogge_stone_size(width: usize) -> Result<i128> {
    if width == 0 {
        return Err(Error::Param("width must be positive".into()));
    }
    let l = width as i128;
    Ok(l * (ceil_log2(width) as i128 - 1) + 1)
}

/// Extra operators the fan-out-`f` transform may add to the buffered
/// circuit of `shape`: `⌊a(v)⌋` per right node, and for every leaf the sum
/// of `a_d` over the levels of its aggregation tree, where `a_0 = a(v)` and
/// `a_(d+1) = (2 a_d + 2^d) / f`.
pub fn fanout_extra(shape: &Shape, f: usize) -> Result<Q> {
    if f < 3 {
        return Err(Error::FanoutTooSmall(f));
    }
    let t = RecTree::new(shape, Some(f));
    let fq = Q::from_integer(f as i128);
    let mut total = Q::zero();
    for n in t.of_kind(RecKind::Right) {
        total += n.a.floor();
    }
    for n in t.leaves() {
        let mut ad = n.a;
        for d in 0..n.alpha as usize {
            total += ad;
            ad = (Q::from_integer(2) * ad + Q::from_integer(pow2(d)?)) / fq;
        }
    }
    Ok(total)
}

/// Operator-count predictor for the fan-out-`f` tree on `2^b` inputs.
pub fn fanout_size_bound(b: usize, f: usize) -> Result<Q> {
    Ok(Q::from_integer(tree_size(b)?) + fanout_extra(&Shape::tree(b), f)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    TreeSize,
    TreeDepth,
    Cor2Bound,
    Thm5Bound,
    BufferCount,
    FanoutSizeBound,
    KoggeStoneSize,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::TreeSize,
        Quantity::TreeDepth,
        Quantity::Cor2Bound,
        Quantity::Thm5Bound,
        Quantity::BufferCount,
        Quantity::FanoutSizeBound,
        Quantity::KoggeStoneSize,
    ];

    fn name(self) -> &'static str {
        match self {
            Quantity::TreeSize => "tree_size",
            Quantity::TreeDepth => "tree_depth",
            Quantity::Cor2Bound => "cor2_bound",
            Quantity::Thm5Bound => "thm5_bound",
            Quantity::BufferCount => "buffer_count",
            Quantity::FanoutSizeBound => "fanout_size_bound",
            Quantity::KoggeStoneSize => "kogge_stone_size",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Param(format!("unknown quantity {s:?}")))
    }
}

/// Parameters of a prediction. `b` is used by the tree quantities, `width`
/// by the general ones.
#[derive(Clone, Copy, Debug, Default)]
pub struct PredictArgs {
    pub b: Option<usize>,
    pub width: Option<usize>,
    pub k: usize,
    pub f: Option<usize>,
}

pub fn predict(q: Quantity, args: PredictArgs) -> Result<Q> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| Error::Param(format!("{q} needs {what}")));
    let int = |v: i128| Q::from_integer(v);
    Ok(match q {
        Quantity::TreeSize => int(tree_size(need(args.b, "b")?)?),
        Quantity::TreeDepth => int(tree_depth(need(args.b, "b")?) as i128),
        Quantity::Cor2Bound => int(cor2_bound(need(args.width, "width")?)?),
        Quantity::Thm5Bound => thm5_bound(need(args.width, "width")?, args.k)?,
        Quantity::BufferCount => int(buffer_count(need(args.b, "b")?)?),
        Quantity::FanoutSizeBound => fanout_size_bound(need(args.b, "b")?, need(args.f, "f")?)?,
        Quantity::KoggeStoneSize => int(kogge_stone_size(need(args.width, "width")?)?),
    })
}

/// Render a rational as an integer when it is one, else as `p/q (≈x)`.
pub fn format_q(q: &Q) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{} ({:.4})", q, q.to_f64().unwrap_or(f64::NAN))
    }
}
