// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid trit character {0:?}")]
    InvalidTrit(char),
    #[error("width {width} exceeds maximum {max}")]
    WidthTooLarge { width: usize, max: usize },
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("gate expects {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("superposition of an empty set")]
    EmptySuperposition,
    #[error("truth table rows must be stable")]
    UnstableTable,
    #[error("input must be stable")]
    UnstableInput,
    #[error("value {value} out of range for width {width}")]
    OutOfRange { value: u64, width: usize },
    #[error("{0} is not a valid Gray code string")]
    NotValid(String),
    #[error("malformed netlist: {0}")]
    Malformed(String),
    #[error("netlist contains a cycle through node {0}")]
    Cycle(usize),
    #[error("no gate template for {0}")]
    MissingTemplate(String),
    #[error("graph carries no construction provenance")]
    MissingProvenance,
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("fan-out bound {0} is too small (need at least 2)")]
    FanoutTooSmall(usize),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
