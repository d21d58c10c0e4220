//! Radial-subgraph crossover.
//!
//! The child starts as a copy of the mother. An acceptor subgraph is cut
//! out of it and a donor subgraph copied from the father takes its place.
//! Donor nodes missing incoming arrows draw sources from the acceptor's
//! distal boundary; surviving mother nodes missing incoming arrows draw
//! sources from the donor's proximal boundary. Only the arrows needed for
//! validity are added.

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::evolve::mutation::mutate;
use crate::evolve::subgraph::{boundaries, radial_subgraph};
use crate::graph::{ATypeGraph, NodeId, Role};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CrossoverError {
    #[error("parents differ in input or output dimension")]
    DimensionMismatch,
    #[error("a parent has no internal node")]
    NoInternalNodes,
    #[error("no boundary node can feed a node left short of arrows")]
    EmptyBoundary,
}

/// Subgraph size limits and retry budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverConfig {
    /// Largest subgraph as a fraction of the parent's internal nodes.
    pub subgraph_cap: f64,
    /// Fresh attempts after a degenerate boundary before mutating instead.
    pub max_retries: usize,
    /// Delay-node probability for the mutation fallback.
    pub p_delay: f64,
}

impl Default for CrossoverConfig {
    fn default() -> Self {
        CrossoverConfig {
            subgraph_cap: 0.8,
            max_retries: 8,
            p_delay: 0.2,
        }
    }
}

/// Crossover with retries; falls back to mutating the mother when every
/// attempt hits a degenerate boundary.
pub fn crossover<R: Rng + ?Sized>(
    mother: &ATypeGraph,
    father: &ATypeGraph,
    cfg: &CrossoverConfig,
    rng: &mut R,
) -> ATypeGraph {
    for _ in 0..=cfg.max_retries {
        match crossover_once(mother, father, cfg.subgraph_cap, rng) {
            Ok(child) => return child,
            Err(CrossoverError::EmptyBoundary) => continue,
            Err(_) => break,
        }
    }
    mutate(mother, cfg.p_delay, rng)
}

/// Random centre and size in `[1, ceil(cap * internal)]`.
fn random_radial<R: Rng + ?Sized>(g: &ATypeGraph, cap: f64, rng: &mut R) -> Result<Vec<NodeId>, CrossoverError> {
    let internal = g.internal_nodes();
    let &center = internal.choose(rng).ok_or(CrossoverError::NoInternalNodes)?;
    let hi = ((cap * internal.len() as f64).ceil() as usize).clamp(1, internal.len());
    let size = rng.random_range(1..=hi);
    Ok(radial_subgraph(g, center, size, rng))
}

/// One crossover with randomly grown acceptor and donor.
pub fn crossover_once<R: Rng + ?Sized>(
    mother: &ATypeGraph,
    father: &ATypeGraph,
    subgraph_cap: f64,
    rng: &mut R,
) -> Result<ATypeGraph, CrossoverError> {
    if mother.input_dim() != father.input_dim() || mother.output_dim() != father.output_dim() {
        return Err(CrossoverError::DimensionMismatch);
    }
    let acceptor = random_radial(mother, subgraph_cap, rng)?;
    let donor = random_radial(father, subgraph_cap, rng)?;
    crossover_at(mother, &acceptor, father, &donor, rng)
}

/// Crossover with a given acceptor (internal nodes of `mother`) and donor
/// (internal nodes of `father`).
///
/// The child keeps the mother's surviving nodes in their original order,
/// followed by the donor nodes in ascending father order.
pub fn crossover_at<R: Rng + ?Sized>(
    mother: &ATypeGraph,
    acceptor: &[NodeId],
    father: &ATypeGraph,
    donor: &[NodeId],
    rng: &mut R,
) -> Result<ATypeGraph, CrossoverError> {
    let mother_roles = mother.roles();
    let father_roles = father.roles();
    if acceptor.iter().any(|&v| mother_roles[v] != Role::Internal)
        || donor.iter().any(|&v| father_roles[v] != Role::Internal)
    {
        return Err(CrossoverError::NoInternalNodes);
    }
    let distal: Vec<NodeId> = boundaries(mother, acceptor)
        .distal
        .into_iter()
        .filter(|&v| mother_roles[v] != Role::Output)
        .collect();
    let proximal = boundaries(father, donor).proximal;

    let mut child = mother.clone();
    let mut doomed = vec![false; mother.size()];
    for &v in acceptor {
        doomed[v] = true;
    }
    let remap = child.remove_nodes(&doomed);
    let distal: Vec<NodeId> = distal.iter().map(|&v| remap[v].expect("distal nodes survive")).collect();
    let survivors = child.size();

    let mut donor_map = vec![None; father.size()];
    for &v in donor {
        donor_map[v] = Some(child.push_node(father.kind(v)));
    }
    for &(s, d) in father.arrows() {
        if let (Some(s), Some(d)) = (donor_map[s], donor_map[d]) {
            child.push_arrow(s, d);
        }
    }
    let proximal: Vec<NodeId> = proximal.iter().map(|&v| donor_map[v].expect("donor node")).collect();

    let deg = child.indegrees();
    let mut additions = Vec::new();
    for (node, &have) in deg.iter().enumerate() {
        let missing = child.kind(node).required_indegree().saturating_sub(have);
        if missing == 0 {
            continue;
        }
        let pool = if node >= survivors { &distal } else { &proximal };
        for _ in 0..missing {
            let &src = pool.choose(rng).ok_or(CrossoverError::EmptyBoundary)?;
            additions.push((src, node));
        }
    }
    for (s, d) in additions {
        child.push_arrow(s, d);
    }
    Ok(child)
}
