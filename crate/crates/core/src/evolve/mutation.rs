//! Mutation: one node removed, one arrow rewired, or one node added.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::generate::{random_kind, random_source};
use crate::graph::{ATypeGraph, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    RemoveNode,
    Rewire,
    AddNode,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] = [MutationKind::RemoveNode, MutationKind::Rewire, MutationKind::AddNode];
}

/// Applies a uniformly chosen move; a move that cannot apply to this graph
/// is replaced by one of the others. Returns a copy if none applies.
pub fn mutate<R: Rng + ?Sized>(parent: &ATypeGraph, p_delay: f64, rng: &mut R) -> ATypeGraph {
    let mut order = MutationKind::ALL;
    order.shuffle(rng);
    for kind in order {
        if let Some(child) = mutate_with(parent, kind, p_delay, rng) {
            return child;
        }
    }
    parent.clone()
}

/// Applies one specific move, or `None` when it is impossible.
pub fn mutate_with<R: Rng + ?Sized>(
    parent: &ATypeGraph,
    kind: MutationKind,
    p_delay: f64,
    rng: &mut R,
) -> Option<ATypeGraph> {
    match kind {
        MutationKind::RemoveNode => remove_node(parent, rng),
        MutationKind::Rewire => rewire(parent, rng),
        MutationKind::AddNode => add_node(parent, p_delay, rng),
    }
}

/// Deletes an internal node and its arrows, then gives every node left
/// short of incoming arrows fresh permitted sources. Needs a second
/// internal node so outputs keep a legal source.
fn remove_node<R: Rng + ?Sized>(parent: &ATypeGraph, rng: &mut R) -> Option<ATypeGraph> {
    let internal = parent.internal_nodes();
    if internal.len() < 2 {
        return None;
    }
    let victim = *internal.choose(rng)?;
    let mut child = parent.clone();
    let mut doomed = vec![false; child.size()];
    doomed[victim] = true;
    child.remove_nodes(&doomed);
    fill_deficits(&mut child, rng);
    Some(child)
}

/// Adds arrows until every node has its required indegree.
pub(crate) fn fill_deficits<R: Rng + ?Sized>(g: &mut ATypeGraph, rng: &mut R) {
    let roles = g.roles();
    let deg = g.indegrees();
    for (node, &have) in deg.iter().enumerate() {
        for _ in have..g.kind(node).required_indegree() {
            let src = random_source(g, &roles, node, rng).expect("an internal node remains");
            g.push_arrow(src, node);
        }
    }
}

/// Replaces the source of one arrow, avoiding the old source when another
/// permitted one exists.
fn rewire<R: Rng + ?Sized>(parent: &ATypeGraph, rng: &mut R) -> Option<ATypeGraph> {
    if parent.arrows().is_empty() {
        return None;
    }
    let roles = parent.roles();
    let i = rng.random_range(0..parent.arrows().len());
    let (old, target) = parent.arrows()[i];
    let pool: Vec<_> = parent
        .permitted_sources(target, &roles)
        .into_iter()
        .filter(|&s| s != old)
        .collect();
    let src = match pool.choose(rng) {
        Some(&s) => s,
        None => old,
    };
    let mut child = parent.clone();
    child.arrows_mut()[i] = (src, target);
    Some(child)
}

/// Adds a node with random permitted sources and makes it the new source of
/// one existing arrow, so every indegree is preserved.
fn add_node<R: Rng + ?Sized>(parent: &ATypeGraph, p_delay: f64, rng: &mut R) -> Option<ATypeGraph> {
    if parent.arrows().is_empty() {
        return None;
    }
    let mut child = parent.clone();
    let kind = random_kind(p_delay, rng);
    let new = child.push_node(kind);
    let roles = child.roles();
    debug_assert_eq!(roles[new], Role::Internal);
    for _ in 0..kind.required_indegree() {
        let src = random_source(&child, &roles, new, rng).expect("internal targets accept themselves");
        child.push_arrow(src, new);
    }
    // Any arrow target accepts an internal source.
    let i = rng.random_range(0..parent.arrows().len());
    child.arrows_mut()[i].0 = new;
    Some(child)
}
