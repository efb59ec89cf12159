// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::nsort::{sort_oracle, NSorter};
use super::twosort::TwoSort;
use crate::error::{Error, Result};
use crate::fsm::two_sort_reference;
use crate::gray::{maxmin_closure_oracle, valid_count, ValidString};
use crate::ir::GateNetlist;
use crate::kleene::{Lanes, TritVec};

/// Widest 2-sort the exhaustive sweep accepts.
pub const MAX_EXHAUSTIVE: usize = 12;
/// Counterexamples kept per report.
pub const KEEP: usize = 8;

const LANES: u64 = 64;

/// One test case: the input strings.
pub type Case = Vec<TritVec>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub got: Vec<String>,
    pub want: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub circuit: String,
    pub width: usize,
    pub mode: String,
    /// `pairs` for 2-sorts, `tuples` for n-sorters.
    pub unit: String,
    pub cases: u64,
    pub mismatches: u64,
    pub counterexamples: Vec<Counterexample>,
    pub millis: u128,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} B={} {}: {} {}, {} mismatches",
            self.circuit, self.width, self.mode, self.cases, self.unit, self.mismatches
        )
    }
}

/// Something that maps batches of cases to output strings.
pub trait Candidate: Sync {
    fn name(&self) -> String;
    fn eval_batch(&self, cases: &[Case]) -> Result<Vec<Case>>;
}

/// Pack up to 64 cases into lanes. `port(case_pos, trit)` gives the
/// 0-based input index of trit `t` (1-based) of string `case_pos`.
fn eval_lanes<P>(net: &GateNetlist, cases: &[Case], n_out: usize, width: usize, port: P) -> Result<Vec<Case>>
where
    P: Fn(usize, usize) -> usize,
{
    let mut ins = vec![Lanes::ZERO; net.width_in()];
    for (lane, case) in cases.iter().enumerate() {
        for (s, x) in case.iter().enumerate() {
            for t in 1..=width {
                ins[port(s, t)].set(lane, x.get(t));
            }
        }
    }
    let out = net.eval_packed(&ins)?;
    (0..cases.len())
        .map(|lane| {
            (0..n_out)
                .map(|s| {
                    let trits: Vec<_> = (1..=width).map(|t| out[port(s, t)].get(lane)).collect();
                    TritVec::from_trits(&trits)
                })
                .collect()
        })
        .collect()
}

impl Candidate for TwoSort {
    fn name(&self) -> String {
        format!("2-sort[{}]", self.kind)
    }

    /// Outputs are `[max, min]`.
    fn eval_batch(&self, cases: &[Case]) -> Result<Vec<Case>> {
        eval_lanes(&self.gates, cases, 2, self.width, |s, t| 2 * (t - 1) + s)
    }
}

impl Candidate for NSorter {
    fn name(&self) -> String {
        format!("{}-sort", self.n)
    }

    fn eval_batch(&self, cases: &[Case]) -> Result<Vec<Case>> {
        eval_lanes(&self.gates, cases, self.n, self.width, |s, t| {
            s * self.width + t - 1
        })
    }
}

/// The sequential closure machine, as a candidate against the brute-force
/// oracle.
pub struct Reference;

impl Candidate for Reference {
    fn name(&self) -> String {
        "reference".into()
    }

    fn eval_batch(&self, cases: &[Case]) -> Result<Vec<Case>> {
        cases
            .iter()
            .map(|c| two_sort_reference(&c[0], &c[1]).map(|(a, b)| vec![a, b]))
            .collect()
    }
}

#[derive(Default)]
struct Tally {
    cases: Vec<u64>,
    mismatches: Vec<u64>,
    examples: Vec<Vec<Counterexample>>,
}

impl Tally {
    fn new(k: usize) -> Self {
        Tally {
            cases: vec![0; k],
            mismatches: vec![0; k],
            examples: vec![Vec::new(); k],
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        for i in 0..self.cases.len() {
            self.cases[i] += o.cases[i];
            self.mismatches[i] += o.mismatches[i];
            let room = KEEP.saturating_sub(self.examples[i].len());
            self.examples[i].extend(o.examples[i].iter().take(room).cloned());
        }
        self
    }
}

fn strings(v: &[TritVec]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Run `cands` on `count` cases, 64 per chunk, in parallel. `case` builds
/// case `i` from a per-chunk generator seeded by `(seed, chunk)`.
fn sweep<C, O>(cands: &[&dyn Candidate], count: u64, seed: u64, case: C, oracle: O) -> Result<Tally>
where
    C: Fn(u64, &mut ChaCha8Rng) -> Result<Case> + Sync,
    O: Fn(&Case) -> Result<Case> + Sync,
{
    let chunks = count.div_ceil(LANES);
    let k = cands.len();
    (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Tally> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let lo = c * LANES;
            let hi = (lo + LANES).min(count);
            let cases: Vec<Case> = (lo..hi).map(|i| case(i, &mut rng)).collect::<Result<_>>()?;
            let want: Vec<Case> = cases.iter().map(&oracle).collect::<Result<_>>()?;
            let mut t = Tally::new(k);
            for (ci, cand) in cands.iter().enumerate() {
                let got = cand.eval_batch(&cases)?;
                t.cases[ci] += cases.len() as u64;
                for (i, (g, w)) in got.iter().zip(&want).enumerate() {
                    if g != w {
                        t.mismatches[ci] += 1;
                        if t.examples[ci].len() < KEEP {
                            t.examples[ci].push(Counterexample {
                                inputs: strings(&cases[i]),
                                got: strings(g),
                                want: strings(w),
                            });
                        }
                    }
                }
            }
            Ok(t)
        })
        .try_reduce(|| Tally::new(k), |a, b| Ok(a.merge(b)))
}

fn reports(
    cands: &[&dyn Candidate],
    width: usize,
    mode: &str,
    unit: &str,
    t: Tally,
    start: Instant,
) -> Vec<Report> {
    let millis = start.elapsed().as_millis();
    cands
        .iter()
        .enumerate()
        .map(|(i, c)| Report {
            circuit: c.name(),
            width,
            mode: mode.into(),
            unit: unit.into(),
            cases: t.cases[i],
            mismatches: t.mismatches[i],
            counterexamples: t.examples[i].clone(),
            millis,
        })
        .collect()
}

fn check_2sort_width(width: usize) -> Result<()> {
    if width == 0 || width > 63 {
        return Err(Error::Param(format!("width must be in 1..=63, got {width}")));
    }
    Ok(())
}

fn pair_oracle(c: &Case) -> Result<Case> {
    maxmin_closure_oracle(&c[0], &c[1]).map(|(a, b)| vec![a, b])
}

fn random_valid(rng: &mut ChaCha8Rng, width: usize) -> Result<TritVec> {
    ValidString::from_rank(rng.gen_range(0..valid_count(width))).to_vec(width)
}

/// Every pair of valid strings of width `B` against the brute-force
/// oracle. All candidates see the same inputs.
pub fn verify_2sort_exhaustive(width: usize, cands: &[&dyn Candidate]) -> Result<Vec<Report>> {
    check_2sort_width(width)?;
    if width > MAX_EXHAUSTIVE {
        return Err(Error::WidthTooLarge {
            width,
            max: MAX_EXHAUSTIVE,
        });
    }
    let start = Instant::now();
    let n = valid_count(width) as u64;
    let t = sweep(
        cands,
        n * n,
        0,
        |i, _| {
            let g = ValidString::from_rank((i / n) as u128).to_vec(width)?;
            let h = ValidString::from_rank((i % n) as u128).to_vec(width)?;
            Ok(vec![g, h])
        },
        pair_oracle,
    )?;
    Ok(reports(cands, width, "exhaustive", "pairs", t, start))
}

/// `samples` uniformly drawn valid pairs, reproducible from `seed`.
pub fn verify_2sort_sampled(
    width: usize,
    cands: &[&dyn Candidate],
    samples: u64,
    seed: u64,
) -> Result<Vec<Report>> {
    check_2sort_width(width)?;
    let start = Instant::now();
    let t = sweep(
        cands,
        samples,
        seed,
        |_, rng| Ok(vec![random_valid(rng, width)?, random_valid(rng, width)?]),
        pair_oracle,
    )?;
    Ok(reports(cands, width, "sampled", "pairs", t, start))
}

/// All `(2^(B+1)-1)^n` tuples.
pub fn verify_nsorter_exhaustive(s: &NSorter) -> Result<Report> {
    let per = valid_count(s.width);
    let total = per
        .checked_pow(s.n as u32)
        .filter(|&t| t <= 1 << 32)
        .ok_or_else(|| Error::Param("tuple space too large for an exhaustive sweep".into()))?
        as u64;
    let start = Instant::now();
    let width = s.width;
    let n = s.n;
    let cands: [&dyn Candidate; 1] = [s];
    let t = sweep(
        &cands,
        total,
        0,
        |mut i, _| {
            (0..n)
                .map(|_| {
                    let r = i as u128 % per;
                    i /= per as u64;
                    ValidString::from_rank(r).to_vec(width)
                })
                .collect()
        },
        |c| sort_oracle(c),
    )?;
    Ok(reports(&cands, width, "exhaustive", "tuples", t, start).remove(0))
}

pub fn verify_nsorter_sampled(s: &NSorter, samples: u64, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let (width, n) = (s.width, s.n);
    let cands: [&dyn Candidate; 1] = [s];
    let t = sweep(
        &cands,
        samples,
        seed,
        |_, rng| (0..n).map(|_| random_valid(rng, width)).collect(),
        |c| sort_oracle(c),
    )?;
    Ok(reports(&cands, width, "sampled", "tuples", t, start).remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::BlockLibrary;
    use crate::sorter::{build_2sort, PpcKind};

    #[test]
    fn tiny_sweeps() {
        let lib = BlockLibrary::default();
        let s1 = build_2sort(1, &PpcKind::Serial, &lib).unwrap();
        let r = verify_2sort_exhaustive(1, &[&s1]).unwrap();
        assert_eq!((r[0].cases, r[0].mismatches), (9, 0));
        let s4 = build_2sort(4, &PpcKind::general(0), &lib).unwrap();
        let r = verify_2sort_exhaustive(4, &[&s4, &Reference]).unwrap();
        for x in &r {
            assert_eq!(x.cases, 961);
            assert!(x.passed(), "{x}");
        }
        assert!(r[0].to_string().ends_with("961 pairs, 0 mismatches"));
    }

    #[test]
    fn wrong_circuit_is_caught() {
        // returns (g, h) unchanged in the wrong slots
        struct Swapped;
        impl Candidate for Swapped {
            fn name(&self) -> String {
                "swapped".into()
            }
            fn eval_batch(&self, cases: &[Case]) -> Result<Vec<Case>> {
                Ok(cases.iter().map(|c| vec![c[1], c[0]]).collect())
            }
        }
        let r = verify_2sort_exhaustive(2, &[&Swapped]).unwrap();
        assert!(r[0].mismatches > 0);
        assert_eq!(r[0].counterexamples.len(), KEEP);
    }

    #[test]
    fn sampling_is_reproducible() {
        let lib = BlockLibrary::default();
        let s = build_2sort(6, &PpcKind::general(1), &lib).unwrap();
        let a = verify_2sort_sampled(6, &[&s], 500, 3).unwrap();
        let b = verify_2sort_sampled(6, &[&s], 500, 3).unwrap();
        assert_eq!(a[0].cases, 500);
        assert_eq!(a[0].mismatches, b[0].mismatches);
    }
}
