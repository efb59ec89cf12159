// SPDX-License-Identifier: Apache-2.0

//! Metastability-containing sorting of Gray code inputs.
//!
//! Valid strings of the binary reflected Gray code may carry one metastable
//! bit. Sorting them with the closure of a four-state comparison machine,
//! evaluated by a parallel prefix circuit, keeps the outputs as precise as
//! the inputs allow.
//!
//! Module map:
//! - [`kleene`]: trits, gates, superposition, closure.
//! - [`gray`]: codewords, valid strings, their order, brute-force oracle.
//! - [`fsm`]: the comparison machine and its closure tables.
//! - [`ir`]: operator graphs, gate netlists, metrics, JSON and DOT.
//! - [`ppc`]: prefix circuit generators and their size predictors.
//! - [`sorter`]: 2-sort assembly, sorting networks, verification.

pub mod error;
pub mod fsm;
pub mod gray;
pub mod ir;
pub mod kleene;
pub mod ppc;
pub mod sorter;

pub use error::{Error, Result};
pub use kleene::{Pair, Trit, TritVec};
