// SPDX-License-Identifier: Apache-2.0

use mcsort::fsm::two_sort_reference;
use mcsort::gray::{enumerate_valid, order_cmp, ValidString};
use mcsort::ir::{metrics, BlockLibrary};
use mcsort::sorter::verify::verify_2sort_sampled;
use mcsort::sorter::{
    build_2sort, build_nsorter, sort_oracle, Candidate, PpcKind, Reference, SortingNetwork,
};
use mcsort::TritVec;
use proptest::prelude::*;
use std::cmp::Ordering;

fn valid(width: usize) -> impl Strategy<Value = TritVec> {
    let n = (1u128 << (width + 1)) - 1;
    (0..n).prop_map(move |r| ValidString::from_rank(r).to_vec(width).unwrap())
}

fn sized_pair() -> impl Strategy<Value = (TritVec, TritVec)> {
    (1usize..=10).prop_flat_map(|w| (valid(w), valid(w)))
}

fn key(x: &TritVec) -> u128 {
    ValidString::parse(x).unwrap().rank()
}

proptest! {
    #[test]
    fn variants_agree((g, h) in sized_pair()) {
        let lib = BlockLibrary::default();
        let w = g.width();
        let want = two_sort_reference(&g, &h).unwrap();
        for kind in [PpcKind::Serial, PpcKind::general(0), PpcKind::general(1), PpcKind::bounded(0, 3)] {
            if kind.applies_to(w - 1) {
                prop_assert_eq!(build_2sort(w, &kind, &lib).unwrap().eval(&g, &h).unwrap(), want, "{}", kind);
            }
        }
    }

    #[test]
    fn outputs_are_the_inputs_in_order((g, h) in sized_pair()) {
        let s = build_2sort(g.width(), &PpcKind::general(0), &BlockLibrary::default()).unwrap();
        let (hi, lo) = s.eval(&g, &h).unwrap();
        let mut got = [key(&lo), key(&hi)];
        let mut want = [key(&g), key(&h)];
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
        prop_assert_ne!(order_cmp(&lo, &hi).unwrap(), Ordering::Greater);
    }

    #[test]
    fn sorting_is_idempotent(w in 1usize..=8, xs in proptest::collection::vec(0u128..511, 5)) {
        let lib = BlockLibrary::default();
        let s = build_nsorter(&SortingNetwork::batcher(5).unwrap(), w, &PpcKind::general(0), &lib).unwrap();
        let n = (1u128 << (w + 1)) - 1;
        let ins: Vec<TritVec> = xs.iter().map(|&r| ValidString::from_rank(r % n).to_vec(w).unwrap()).collect();
        let once = s.eval(&ins).unwrap();
        prop_assert_eq!(&once, &sort_oracle(&ins).unwrap());
        prop_assert_eq!(s.eval(&once).unwrap(), once);
    }
}

#[test]
fn sampled_wide_2sorts_match() {
    let lib = BlockLibrary::default();
    for w in [16, 33, 63] {
        let kinds = [PpcKind::general(0), PpcKind::general(2), PpcKind::bounded(1, 3)];
        let built: Vec<_> = kinds.iter().map(|k| build_2sort(w, k, &lib).unwrap()).collect();
        let mut cands: Vec<&dyn Candidate> = built.iter().map(|t| t as &dyn Candidate).collect();
        cands.push(&Reference);
        for rep in verify_2sort_sampled(w, &cands, 5_000, w as u64).unwrap() {
            assert!(rep.passed(), "{rep}");
        }
    }
}

#[test]
fn bounded_2sort_fanout_report() {
    let lib = BlockLibrary::default();
    let plain = build_2sort(9, &PpcKind::general(0), &lib).unwrap();
    let bounded = build_2sort(9, &PpcKind::bounded(0, 3), &lib).unwrap();
    let (mp, mb) = (metrics(&plain.ops), metrics(&bounded.ops));
    assert!(mb.max_fanout <= 3, "{}", mb.max_fanout);
    assert_eq!(mb.depth, mp.depth);
    assert!(mb.size_logic >= mp.size_logic);
}

#[test]
fn every_width_3_string_sorts_with_every_other() {
    let all = enumerate_valid(3).unwrap();
    let s = build_2sort(3, &PpcKind::Tree, &BlockLibrary::default()).unwrap();
    for g in &all {
        for h in &all {
            let (hi, lo) = s.eval(g, h).unwrap();
            let (a, b) = if key(g) >= key(h) { (g, h) } else { (h, g) };
            assert_eq!((hi, lo), (*a, *b), "{g} {h}");
        }
    }
}
