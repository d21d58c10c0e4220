//! Turing-style A-type networks: NAND and delay nodes updated in lockstep,
//! driven either by a clamped input vector or by an input sequence, plus
//! evolutionary search for networks that represent a given function.

pub mod evolve;
pub mod format;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod num;
pub mod reference;
pub mod seq;
pub mod sim;
pub mod tasks;

pub use graph::{AType, ATypeGraph, NodeId, NodeKind, Violation};
pub use num::{LaneWord, Real};
pub use seq::BooleanSequence;

/// Scalar used for fitness values and statistics.
pub type Fitness = f64;

/// Lane word used for batched simulation of training examples.
pub type Lanes = u64;
