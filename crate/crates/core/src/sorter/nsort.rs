// SPDX-License-Identifier: Apache-2.0

use super::network::SortingNetwork;
use super::twosort::{build_2sort, PpcKind, TwoSort};
use crate::error::{Error, Result};
use crate::gray::ValidString;
use crate::ir::{BlockLibrary, GateBuilder, GateNetlist, NodeId, Provenance};
use crate::kleene::{Trit, TritVec};

/// An `n`-input sorter: one 2-sort per comparator of a network.
#[derive(Clone, Debug)]
pub struct NSorter {
    pub n: usize,
    pub width: usize,
    pub network: SortingNetwork,
    /// Channel-major ports: channel `c` (0-based) trit `t` (1-based) is
    /// port `c*B + t`, for inputs and outputs alike.
    pub gates: GateNetlist,
}

pub fn build_nsorter(
    network: &SortingNetwork,
    width: usize,
    kind: &PpcKind,
    lib: &BlockLibrary,
) -> Result<NSorter> {
    let two: TwoSort = build_2sort(width, kind, lib)?;
    let mut b = GateBuilder::new();
    let mut ch: Vec<Vec<NodeId>> = (0..network.n)
        .map(|c| (1..=width).map(|t| b.input(c * width + t)).collect())
        .collect();
    for (idx, (i, j)) in network.comparators().enumerate() {
        let ins: Vec<NodeId> = (0..width).flat_map(|t| [ch[i][t], ch[j][t]]).collect();
        let out = two.gates.instantiate_into(&mut b, &ins, |m| Provenance {
            comparator: Some(idx),
            ..m.clone()
        })?;
        ch[j] = out.iter().step_by(2).copied().collect();
        ch[i] = out.iter().skip(1).step_by(2).copied().collect();
    }
    for (c, wires) in ch.iter().enumerate() {
        for (t, &w) in wires.iter().enumerate() {
            b.output(c * width + t + 1, w);
        }
    }
    Ok(NSorter {
        n: network.n,
        width,
        network: network.clone(),
        gates: b.finish()?,
    })
}

impl NSorter {
    pub fn eval(&self, inputs: &[TritVec]) -> Result<Vec<TritVec>> {
        if inputs.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: inputs.len(),
            });
        }
        let mut flat = Vec::with_capacity(self.n * self.width);
        for x in inputs {
            if x.width() != self.width {
                return Err(Error::WidthMismatch {
                    expected: self.width,
                    got: x.width(),
                });
            }
            flat.extend(x.trits());
        }
        let out: Vec<Trit> = self.gates.eval(&flat)?;
        out.chunks(self.width).map(TritVec::from_trits).collect()
    }
}

/// Ascending stable sort of valid strings.
pub fn sort_oracle(inputs: &[TritVec]) -> Result<Vec<TritVec>> {
    let Some(first) = inputs.first() else {
        return Ok(Vec::new());
    };
    let mut keyed = Vec::with_capacity(inputs.len());
    for x in inputs {
        if x.width() != first.width() {
            return Err(Error::WidthMismatch {
                expected: first.width(),
                got: x.width(),
            });
        }
        keyed.push((ValidString::parse(x)?.rank(), *x));
    }
    keyed.sort_by_key(|&(r, _)| r);
    Ok(keyed.into_iter().map(|(_, x)| x).collect())
}
