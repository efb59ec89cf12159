// SPDX-License-Identifier: Apache-2.0

//! Helpers shared by the integration targets.

#![allow(dead_code)]

use mcsort::ir::{OpGraph, PairProgram};
use mcsort::ppc::build_serial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn outputs(p: &PairProgram, ins: &[u8]) -> Vec<u8> {
    let (mut s, mut o) = (Vec::new(), Vec::new());
    p.run(ins, &mut s, &mut o);
    o
}

/// Serial fold with the closure of the transition operator, as an oracle.
pub fn fold_oracle(ins: &[u8]) -> Vec<u8> {
    let serial = PairProgram::new(&build_serial(ins.len()).unwrap());
    outputs(&serial, ins)
}

pub fn same_random(a: &OpGraph, b: &OpGraph, n: usize, seed: u64) {
    let (pa, pb) = (PairProgram::new(a), PairProgram::new(b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let ins: Vec<u8> = (0..a.width_in()).map(|_| rng.gen_range(0..9)).collect();
        assert_eq!(outputs(&pa, &ins), outputs(&pb, &ins), "inputs {ins:?}");
    }
}

pub fn same_exhaustive(a: &OpGraph, b: &OpGraph) {
    let (pa, pb) = (PairProgram::new(a), PairProgram::new(b));
    let w = a.width_in() as u32;
    (0..9usize.pow(w)).into_par_iter().for_each_init(
        || {
            (
                vec![0u8; w as usize],
                Vec::new(),
                Vec::new(),
                Vec::new(),
                Vec::new(),
            )
        },
        |(ins, s1, o1, s2, o2), mut code| {
            for x in ins.iter_mut() {
                *x = (code % 9) as u8;
                code /= 9;
            }
            pa.run(ins, s1, o1);
            pb.run(ins, s2, o2);
            assert_eq!(o1, o2, "inputs {ins:?}");
        },
    );
}
