// SPDX-License-Identifier: Apache-2.0

//! Two-layer circuit representation.
//!
//! An [`OpGraph`] is a DAG of abstract binary operator cells (OPC) on
//! two-trit values. [`expand`] replaces every OPC by a gate-level block,
//! producing a [`GateNetlist`] over single trits. Both layers keep nodes in
//! topological order: every fan-in id is smaller than the node's own id.

mod blocks;
mod dot;
mod expand;
mod gate;
mod json;
mod metrics;
mod op;

use serde::{Deserialize, Serialize};

pub use blocks::{diamond_block, out_block, xmux, BlockLibrary};
pub use dot::{gates_to_dot, ops_to_dot};
pub use expand::expand;
pub use gate::{GateBuilder, GateNetlist, GateNode, NetKind};
pub use json::{NetlistJson, NodeJson};
pub use metrics::{fanout_violations, metrics, sinks, Circuit, Metrics, NodeClass};
pub use op::{OpBuilder, OpGraph, OpKind, OpNode, OpRole, PairProgram};

pub type NodeId = usize;

/// Where a node came from. Every field is optional; absent fields are
/// omitted from JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Operator of an OPC node (`diamond` or `out`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<OpRole>,
    /// Structural role, e.g. `pre`, `post`, `combine`, `buf-agg`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    /// Path of the recursion-tree node that created this node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<String>,
    /// Raw input range `[lo, hi]` this node aggregates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    /// Copy index; absent for originals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dup: Option<u32>,
    /// Drives the last output of its subcircuit; exempt from the fan-out
    /// bound of the buffered construction.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub last: bool,
    /// Gate layer: id of the OPC node this gate was expanded from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<NodeId>,
    /// Sorting network: comparator index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparator: Option<usize>,
    /// Constant value at the operator layer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Provenance {
    pub fn role(role: &str) -> Self {
        Provenance {
            role: Some(role.to_string()),
            ..Default::default()
        }
    }

    /// Cluster key for DOT output.
    pub fn group(&self) -> Option<String> {
        match (&self.comparator, &self.tree) {
            (Some(c), _) => Some(format!("cmp{c}")),
            (None, Some(t)) => Some(t.clone()),
            _ => self.block.map(|b| format!("op{b}")),
        }
    }
}
