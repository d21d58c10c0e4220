//! Random A-type graphs.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ATypeGraph, NodeId, NodeKind, Role};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GenError {
    #[error("size bounds reversed: {lo} > {hi}")]
    ReversedBounds { lo: usize, hi: usize },
    #[error("size lower bound {lo} leaves no internal node for {inputs} inputs and {outputs} outputs")]
    TooSmall {
        lo: usize,
        inputs: usize,
        outputs: usize,
    },
    #[error("input and output dimensions must be at least 1")]
    ZeroDim,
    #[error("delay probability {0} outside [0, 1]")]
    BadProbability(f64),
}

/// Parameters for random graph generation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub size_lo: usize,
    pub size_hi: usize,
    pub inputs: usize,
    pub outputs: usize,
    /// Chance that a non-input node is a delay node rather than NAND.
    pub p_delay: f64,
}

impl GenConfig {
    pub fn new(size_lo: usize, size_hi: usize, inputs: usize, outputs: usize, p_delay: f64) -> Self {
        GenConfig {
            size_lo,
            size_hi,
            inputs,
            outputs,
            p_delay,
        }
    }

    pub fn check(&self) -> Result<(), GenError> {
        if self.inputs == 0 || self.outputs == 0 {
            return Err(GenError::ZeroDim);
        }
        if self.size_lo > self.size_hi {
            return Err(GenError::ReversedBounds {
                lo: self.size_lo,
                hi: self.size_hi,
            });
        }
        // Inputs may not feed outputs, so at least one internal node.
        if self.size_lo < self.inputs + self.outputs + 1 {
            return Err(GenError::TooSmall {
                lo: self.size_lo,
                inputs: self.inputs,
                outputs: self.outputs,
            });
        }
        if !(0.0..=1.0).contains(&self.p_delay) {
            return Err(GenError::BadProbability(self.p_delay));
        }
        Ok(())
    }

    /// Same dimensions and delay probability, fixed size.
    pub fn with_size(&self, size: usize) -> Self {
        GenConfig {
            size_lo: size,
            size_hi: size,
            ..self.clone()
        }
    }
}

pub(crate) fn random_kind<R: Rng + ?Sized>(p_delay: f64, rng: &mut R) -> NodeKind {
    if rng.random_bool(p_delay) {
        NodeKind::Delay
    } else {
        NodeKind::Nand
    }
}

/// Draws a random valid graph.
///
/// Node layout: inputs `0..n`, internal nodes, then outputs. Size is uniform
/// in `[size_lo, size_hi]`; each non-input node is a delay node with
/// probability `p_delay`; each non-input node draws its required sources
/// uniformly (with replacement) from the permitted set: inputs and internal
/// nodes for internal targets, internal nodes for outputs.
pub fn random_atype<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<ATypeGraph, GenError> {
    cfg.check()?;
    let size = rng.random_range(cfg.size_lo..=cfg.size_hi);
    let n = cfg.inputs;
    let first_output = size - cfg.outputs;

    let mut kinds = Vec::with_capacity(size);
    kinds.extend(std::iter::repeat_n(NodeKind::Input, n));
    for _ in n..size {
        kinds.push(random_kind(cfg.p_delay, rng));
    }

    let internal_sources: Vec<NodeId> = (0..first_output).collect();
    let output_sources: Vec<NodeId> = (n..first_output).collect();
    let mut arrows = Vec::with_capacity(2 * size);
    for (target, kind) in kinds.iter().enumerate().skip(n) {
        let pool = if target >= first_output {
            &output_sources
        } else {
            &internal_sources
        };
        for _ in 0..kind.required_indegree() {
            let src = *pool.choose(rng).expect("non-empty source pool");
            arrows.push((src, target));
        }
    }

    Ok(ATypeGraph::from_parts(
        kinds,
        arrows,
        (0..n).collect(),
        (first_output..size).collect(),
    ))
}

/// Draws one permitted source for `target`, or `None` if there is none.
pub(crate) fn random_source<R: Rng + ?Sized>(
    g: &ATypeGraph,
    roles: &[Role],
    target: NodeId,
    rng: &mut R,
) -> Option<NodeId> {
    g.permitted_sources(target, roles).choose(rng).copied()
}
