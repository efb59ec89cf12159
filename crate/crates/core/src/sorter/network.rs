// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest channel count the 0-1 sweep will enumerate.
pub const MAX_SWEEP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Batcher,
    Explicit(String),
}

/// Comparator network over channels `0..n`. A comparator `(i, j)` with
/// `i < j` leaves the smaller value on `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortingNetwork {
    pub n: usize,
    pub layers: Vec<Vec<(usize, usize)>>,
    pub kind: NetworkKind,
}

impl SortingNetwork {
    /// Odd-even merge sort for any `n`, layered as soon as possible.
    pub fn batcher(n: usize) -> Result<SortingNetwork> {
        if n == 0 {
            return Err(Error::Param("network needs at least one channel".into()));
        }
        let mut comps = Vec::new();
        let mut p = 1;
        while p < n {
            let mut k = p;
            while k >= 1 {
                let mut j = k % p;
                while j + k < n {
                    for i in 0..k.min(n - j - k) {
                        if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                            comps.push((i + j, i + j + k));
                        }
                    }
                    j += 2 * k;
                }
                k /= 2;
            }
            p *= 2;
        }
        Ok(SortingNetwork {
            n,
            layers: asap_layers(n, &comps),
            kind: NetworkKind::Batcher,
        })
    }

    /// A user-supplied network; rejected unless it sorts every 0-1 input.
    pub fn explicit(name: &str, n: usize, layers: Vec<Vec<(usize, usize)>>) -> Result<SortingNetwork> {
        let net = SortingNetwork {
            n,
            layers,
            kind: NetworkKind::Explicit(name.into()),
        };
        net.check_shape()?;
        if !net.sorts_all_01()? {
            return Err(Error::Param(format!("network {name:?} fails the 0-1 sweep")));
        }
        Ok(net)
    }

    fn check_shape(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Param("network needs at least one channel".into()));
        }
        for (l, layer) in self.layers.iter().enumerate() {
            let mut used = vec![false; self.n];
            for &(i, j) in layer {
                if i >= j || j >= self.n {
                    return Err(Error::Param(format!("bad comparator ({i}, {j}) in layer {l}")));
                }
                for c in [i, j] {
                    if std::mem::replace(&mut used[c], true) {
                        return Err(Error::Param(format!("channel {c} used twice in layer {l}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn comparators(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Apply to a 0-1 vector packed as bits (bit `c` is channel `c`).
    pub fn apply_bits(&self, mut x: u64) -> u64 {
        for (i, j) in self.comparators() {
            let (a, b) = ((x >> i) & 1, (x >> j) & 1);
            if a > b {
                x ^= (1 << i) | (1 << j);
            }
        }
        x
    }

    /// Exhaustive 0-1 check: every output must be zeros then ones.
    pub fn sorts_all_01(&self) -> Result<bool> {
        if self.n > MAX_SWEEP {
            return Err(Error::WidthTooLarge {
                width: self.n,
                max: MAX_SWEEP,
            });
        }
        Ok((0..1u64 << self.n).all(|x| {
            let y = self.apply_bits(x);
            let ones = y.count_ones();
            y == ((1u64 << ones) - 1) << (self.n as u32 - ones)
        }))
    }
}

fn asap_layers(n: usize, comps: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut ready = vec![0usize; n];
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    for &(i, j) in comps {
        let l = ready[i].max(ready[j]);
        if layers.len() <= l {
            layers.push(Vec::new());
        }
        layers[l].push((i, j));
        ready[i] = l + 1;
        ready[j] = l + 1;
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batcher_networks() {
        let one = SortingNetwork::batcher(1).unwrap();
        assert_eq!(one.size(), 0);
        let four = SortingNetwork::batcher(4).unwrap();
        assert_eq!((four.size(), four.depth()), (5, 3));
        for n in 1..=12 {
            assert!(
                SortingNetwork::batcher(n).unwrap().sorts_all_01().unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn explicit_networks_are_validated() {
        let ok = SortingNetwork::explicit("three", 3, vec![vec![(0, 1)], vec![(1, 2)], vec![(0, 1)]]);
        assert!(ok.is_ok());
        assert!(SortingNetwork::explicit("short", 3, vec![vec![(0, 1)], vec![(1, 2)]]).is_err());
        assert!(SortingNetwork::explicit("clash", 3, vec![vec![(0, 1), (1, 2)]]).is_err());
        assert!(SortingNetwork::explicit("reversed", 2, vec![vec![(1, 0)]]).is_err());
    }
}
