// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ir::{expand, BlockLibrary, GateNetlist, OpBuilder, OpGraph, OpRole, Provenance};
use crate::kleene::{Pair, Trit, TritVec};
use crate::ppc::{self, Fanout, PpcConfig, Split};

/// Which prefix circuit computes the comparison states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpcKind {
    /// Unrolled machine, linear depth.
    Serial,
    /// Fibonacci tree; the prefix width must be a power of two.
    Tree,
    General {
        k: usize,
        split: Split,
        fanout: Fanout,
    },
}

impl PpcKind {
    pub fn general(k: usize) -> Self {
        PpcKind::General {
            k,
            split: Split::Unbalanced,
            fanout: Fanout::Unbounded,
        }
    }

    pub fn bounded(k: usize, f: usize) -> Self {
        PpcKind::General {
            k,
            split: Split::Unbalanced,
            fanout: Fanout::Bounded(f),
        }
    }

    /// Whether this variant exists for a prefix of `width` inputs.
    pub fn applies_to(&self, width: usize) -> bool {
        match *self {
            PpcKind::Serial => true,
            PpcKind::Tree => width == 0 || width.is_power_of_two(),
            PpcKind::General { k, .. } => k == 0 || (width > 0 && k <= ppc::ceil_log2(width)),
        }
    }

    /// Prefix circuit over `width` pairs; `None` when `width == 0`.
    pub fn build(&self, width: usize) -> Result<Option<OpGraph>> {
        if width == 0 {
            return Ok(None);
        }
        let g = match *self {
            PpcKind::Serial => ppc::build_serial(width)?,
            PpcKind::Tree => {
                if !width.is_power_of_two() {
                    return Err(Error::Param(format!(
                        "tree variant needs a power-of-two prefix width, got {width}"
                    )));
                }
                ppc::build_tree(width.trailing_zeros() as usize)?.graph
            }
            PpcKind::General { k, split, fanout } => {
                ppc::build_general(&PpcConfig {
                    width,
                    k,
                    fanout,
                    split,
                })?
                .graph
            }
        };
        Ok(Some(g))
    }
}

impl fmt::Display for PpcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpcKind::Serial => write!(f, "serial"),
            PpcKind::Tree => write!(f, "tree"),
            PpcKind::General { k, split, fanout } => {
                write!(f, "{split}:k{k}")?;
                match fanout {
                    Fanout::Unbounded => Ok(()),
                    Fanout::Bounded(n) => write!(f, ":f{n}"),
                }
            }
        }
    }
}

impl FromStr for PpcKind {
    type Err = Error;

    /// `serial`, `tree`, or `unbalanced:k1`, `balanced:k0:f3`, ...
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serial" => return Ok(PpcKind::Serial),
            "tree" => return Ok(PpcKind::Tree),
            _ => {}
        }
        let bad = || Error::Param(format!("unknown prefix variant {s:?}"));
        let mut parts = s.split(':');
        let split: Split = parts.next().ok_or_else(bad)?.parse()?;
        let (mut k, mut fanout) = (0, Fanout::Unbounded);
        for p in parts {
            if let Some(v) = p.strip_prefix('k') {
                k = v.parse().map_err(|_| bad())?;
            } else if let Some(v) = p.strip_prefix('f') {
                fanout = Fanout::Bounded(v.parse().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        Ok(PpcKind::General { k, split, fanout })
    }
}

/// A 2-sort circuit at both layers.
#[derive(Clone, Debug)]
pub struct TwoSort {
    pub width: usize,
    pub kind: PpcKind,
    /// Inputs `g_i h_i` as pairs, outputs `(max_i, min_i)` as pairs.
    pub ops: OpGraph,
    /// Gate ports `2i-1 = g_i`, `2i = h_i`; outputs likewise max, min.
    pub gates: GateNetlist,
}

/// Operator graph of a 2-sort: states from a prefix circuit over the first
/// `B-1` pairs, then one `out_M` per position fed by the previous state.
pub fn build_2sort_ops(width: usize, kind: &PpcKind) -> Result<OpGraph> {
    if width == 0 {
        return Err(Error::Param("2-sort width must be positive".into()));
    }
    let mut b = OpBuilder::new();
    let d = b.inputs(width);
    let states = match kind.build(width - 1)? {
        Some(p) => p.instantiate_into(&mut b, &d[..width - 1], |m| m.clone())?,
        None => Vec::new(),
    };
    let init = b.konst(Pair::ZERO, Provenance::role("init"));
    for i in 0..width {
        let s = if i == 0 { init } else { states[i - 1] };
        let o = b.opc(OpRole::Out, s, d[i], Provenance::role("stage"));
        b.output(i + 1, o);
    }
    b.finish()
}

pub fn build_2sort(width: usize, kind: &PpcKind, lib: &BlockLibrary) -> Result<TwoSort> {
    let ops = build_2sort_ops(width, kind)?;
    let gates = expand(&ops, lib)?;
    Ok(TwoSort {
        width,
        kind: *kind,
        ops,
        gates,
    })
}

impl TwoSort {
    /// Gate-level `(max, min)` of two strings.
    pub fn eval(&self, g: &TritVec, h: &TritVec) -> Result<(TritVec, TritVec)> {
        if g.width() != self.width || h.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: if g.width() != self.width {
                    g.width()
                } else {
                    h.width()
                },
            });
        }
        let ins: Vec<Trit> = (1..=self.width).flat_map(|i| [g.get(i), h.get(i)]).collect();
        let out = self.gates.eval(&ins)?;
        let hi: Vec<Trit> = out.iter().step_by(2).copied().collect();
        let lo: Vec<Trit> = out.iter().skip(1).step_by(2).copied().collect();
        Ok((TritVec::from_trits(&hi)?, TritVec::from_trits(&lo)?))
    }
}
