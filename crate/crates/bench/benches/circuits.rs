// SPDX-License-Identifier: Apache-2.0

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mcsort::gray::{enumerate_valid, ValidString};
use mcsort::ir::{metrics, BlockLibrary};
use mcsort::kleene::Lanes;
use mcsort::ppc::{build_general, build_tree, insert_buffers, with_fanout, PpcConfig};
use mcsort::sorter::verify::verify_2sort_exhaustive;
use mcsort::sorter::{build_2sort, build_nsorter, PpcKind, SortingNetwork};
use mcsort::Trit;

fn generate(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate");
    for w in [16usize, 64, 256] {
        g.bench_with_input(BenchmarkId::new("ppc", w), &w, |b, &w| {
            b.iter(|| build_general(&PpcConfig::new(black_box(w))).unwrap())
        });
    }
    g.bench_function("tree10 buffered f3", |b| {
        let p = insert_buffers(&build_tree(10).unwrap()).unwrap();
        b.iter(|| with_fanout(black_box(&p), 3).unwrap())
    });
    let lib = BlockLibrary::default();
    g.bench_function("2-sort 16 gates", |b| {
        b.iter(|| build_2sort(black_box(16), &PpcKind::general(0), &lib).unwrap())
    });
    g.bench_function("metrics 2-sort 64", |b| {
        let s = build_2sort(64, &PpcKind::general(0), &lib).unwrap();
        b.iter(|| metrics(black_box(&s.gates)))
    });
    g.finish();
}

fn simulate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    let lib = BlockLibrary::default();
    let s = build_2sort(16, &PpcKind::general(0), &lib).unwrap();
    let ins: Vec<Trit> = (0..32).map(|i| Trit::ALL[i % 3]).collect();
    g.bench_function("2-sort 16 scalar", |b| {
        b.iter(|| s.gates.eval(black_box(&ins)).unwrap())
    });
    let lanes: Vec<Lanes> = (0..32)
        .map(|i| {
            let mut l = Lanes::ZERO;
            for lane in 0..64 {
                l.set(lane, Trit::ALL[(i + lane) % 3]);
            }
            l
        })
        .collect();
    g.bench_function("2-sort 16 x64 lanes", |b| {
        b.iter(|| s.gates.eval_packed(black_box(&lanes)).unwrap())
    });
    let net = SortingNetwork::batcher(10).unwrap();
    let ns = build_nsorter(&net, 8, &PpcKind::general(0), &lib).unwrap();
    let xs: Vec<_> = (0..10)
        .map(|i| ValidString::from_rank(i * 37 % 511).to_vec(8).unwrap())
        .collect();
    g.bench_function("10-sort B=8", |b| b.iter(|| ns.eval(black_box(&xs)).unwrap()));
    g.finish();
}

fn verify(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    let s = build_2sort(6, &PpcKind::general(0), &BlockLibrary::default()).unwrap();
    g.bench_function("2-sort 6 exhaustive", |b| {
        b.iter(|| verify_2sort_exhaustive(6, &[&s]).unwrap())
    });
    g.bench_function("enumerate valid 16", |b| {
        b.iter(|| enumerate_valid(black_box(16)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, generate, simulate, verify);
criterion_main!(benches);
