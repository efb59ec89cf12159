// SPDX-License-Identifier: Apache-2.0

//! Criterion benchmarks for the circuit generators and simulators; see
//! `benches/circuits.rs`. Run with `cargo bench -p mcsort-bench`.
