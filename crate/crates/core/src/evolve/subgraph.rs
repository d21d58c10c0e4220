//! Radial subgraphs and their boundaries.

use rand::Rng;

use crate::graph::{ATypeGraph, NodeId, Role};

/// Grows a connected set of internal nodes around `center`.
///
/// Starting from `{center}`, a uniformly chosen internal node adjacent to
/// the set (arrow direction ignored) joins it until the set has `size`
/// members or no such node remains. Returned ascending.
pub fn radial_subgraph<R: Rng + ?Sized>(g: &ATypeGraph, center: NodeId, size: usize, rng: &mut R) -> Vec<NodeId> {
    let roles = g.roles();
    assert_eq!(roles[center], Role::Internal, "center must be internal");
    let adj = g.neighbours();
    let mut member = vec![false; g.size()];
    let mut queued = vec![false; g.size()];
    let mut frontier = Vec::new();
    let mut set = Vec::with_capacity(size);

    let mut absorb = |v: NodeId, member: &mut Vec<bool>, frontier: &mut Vec<NodeId>, set: &mut Vec<NodeId>| {
        member[v] = true;
        set.push(v);
        for &w in &adj[v] {
            if roles[w] == Role::Internal && !member[w] && !queued[w] {
                queued[w] = true;
                frontier.push(w);
            }
        }
    };

    absorb(center, &mut member, &mut frontier, &mut set);
    while set.len() < size && !frontier.is_empty() {
        let v = frontier.swap_remove(rng.random_range(0..frontier.len()));
        absorb(v, &mut member, &mut frontier, &mut set);
    }
    set.sort_unstable();
    set
}

/// Proximal and distal boundary of a node set, both ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundaries {
    /// Members adjacent to some non-member.
    pub proximal: Vec<NodeId>,
    /// Non-members adjacent to some member.
    pub distal: Vec<NodeId>,
}

/// Boundaries of `subset` in `g`, adjacency taken in either direction.
pub fn boundaries(g: &ATypeGraph, subset: &[NodeId]) -> Boundaries {
    let mut member = vec![false; g.size()];
    for &v in subset {
        member[v] = true;
    }
    let mut proximal = vec![false; g.size()];
    let mut distal = vec![false; g.size()];
    for &(s, d) in g.arrows() {
        if member[s] != member[d] {
            let (inside, outside) = if member[s] { (s, d) } else { (d, s) };
            proximal[inside] = true;
            distal[outside] = true;
        }
    }
    let collect = |flags: Vec<bool>| flags.iter().enumerate().filter(|(_, f)| **f).map(|(i, _)| i).collect();
    Boundaries {
        proximal: collect(proximal),
        distal: collect(distal),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{crossover_father, crossover_mother};
    use crate::graph::NodeKind::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain() -> ATypeGraph {
        // i -> a -> b -> o
        ATypeGraph::from_parts(
            vec![Input, Delay, Delay, Delay],
            vec![(0, 1), (1, 2), (2, 3)],
            vec![0],
            vec![3],
        )
    }

    #[test]
    fn chain_growth() {
        let g = chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(radial_subgraph(&g, 1, 1, &mut rng), vec![1]);
        assert_eq!(radial_subgraph(&g, 1, 2, &mut rng), vec![1, 2]);
        assert_eq!(radial_subgraph(&g, 2, 10, &mut rng), vec![1, 2]);
    }

    #[test]
    fn growth_is_connected_and_internal() {
        let g = crossover_father();
        let roles = g.roles();
        let adj = g.neighbours();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for size in 1..=8 {
            for &c in &g.internal_nodes() {
                let s = radial_subgraph(&g, c, size, &mut rng);
                assert_eq!(s.len(), size.min(6));
                assert!(s.contains(&c));
                assert!(s.iter().all(|&v| roles[v] == Role::Internal));
                // Every member but the first can be reached inside the set.
                let mut seen = vec![c];
                let mut i = 0;
                while i < seen.len() {
                    for &w in &adj[seen[i]] {
                        if s.contains(&w) && !seen.contains(&w) {
                            seen.push(w);
                        }
                    }
                    i += 1;
                }
                assert_eq!(seen.len(), s.len());
            }
        }
    }

    #[test]
    fn mother_acceptor_boundaries() {
        let b = boundaries(&crossover_mother(), &[3]);
        assert_eq!(b.proximal, vec![3]);
        assert_eq!(b.distal, vec![1, 2, 4, 5]);
    }

    #[test]
    fn father_donor_boundaries() {
        let b = boundaries(&crossover_father(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(b.proximal, vec![1, 5, 6]);
        assert_eq!(b.distal, vec![0, 7]);
    }

    #[test]
    fn whole_graph_has_no_boundary() {
        let g = crossover_mother();
        let all: Vec<NodeId> = (0..g.size()).collect();
        let b = boundaries(&g, &all);
        assert!(b.proximal.is_empty() && b.distal.is_empty());
    }
}
