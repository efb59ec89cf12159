// SPDX-License-Identifier: Apache-2.0

//! Sorting circuits for valid strings.
//!
//! A 2-sort computes the comparison states with a prefix circuit over
//! `⋄_M` and turns each state into one output pair with `out_M`. Plugging
//! it into any comparator network gives an `n`-input sorter.

mod network;
mod nsort;
mod twosort;
pub mod verify;

pub use network::{NetworkKind, SortingNetwork, MAX_SWEEP};
pub use nsort::{build_nsorter, sort_oracle, NSorter};
pub use twosort::{build_2sort, build_2sort_ops, PpcKind, TwoSort};
pub use verify::{Candidate, Counterexample, Reference, Report};
