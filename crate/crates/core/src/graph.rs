//! A-type graphs: typed nodes, a multiset of arrows, and ordered input and
//! output node lists.

use std::fmt;

use thiserror::Error;

/// Dense node index, `0..graph.size()`.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Input,
    Nand,
    Delay,
}

impl NodeKind {
    /// Number of incoming arrows a node of this kind must have.
    pub fn required_indegree(self) -> usize {
        match self {
            NodeKind::Input => 0,
            NodeKind::Nand => 2,
            NodeKind::Delay => 1,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            NodeKind::Input => "INPUT",
            NodeKind::Nand => "NAND",
            NodeKind::Delay => "DELAY",
        }
    }

    pub fn from_token(token: &str) -> Option<NodeKind> {
        match token {
            "INPUT" => Some(NodeKind::Input),
            "NAND" => Some(NodeKind::Nand),
            "DELAY" => Some(NodeKind::Delay),
            _ => None,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Where a node sits relative to the data flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Input,
    Internal,
    Output,
}

/// Which ordered node list a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderList {
    Input,
    Output,
}

impl fmt::Display for OrderList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderList::Input => f.write_str("input order"),
            OrderList::Output => f.write_str("output order"),
        }
    }
}

/// One broken graph invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("input order is empty")]
    EmptyInputOrder,
    #[error("output order is empty")]
    EmptyOutputOrder,
    #[error("arrow #{arrow} ({src} -> {dst}) references unknown node {node}")]
    DanglingArrow {
        arrow: usize,
        src: NodeId,
        dst: NodeId,
        node: NodeId,
    },
    #[error("{list} references unknown node {node}")]
    DanglingOrder { list: OrderList, node: NodeId },
    #[error("node {node} appears more than once in the {list}")]
    DuplicateInOrder { list: OrderList, node: NodeId },
    #[error("node {node} is in the input order but has kind {kind}")]
    NonInputInInputOrder { node: NodeId, kind: NodeKind },
    #[error("input node {node} is missing from the input order")]
    UnorderedInput { node: NodeId },
    #[error("output node {node} has kind INPUT")]
    InputAsOutput { node: NodeId },
    #[error("node {node} ({kind}) has indegree {found}, expected {expected}")]
    Indegree {
        node: NodeId,
        kind: NodeKind,
        expected: usize,
        found: usize,
    },
    #[error("output node {node} has an outgoing arrow #{arrow}")]
    OutputHasOutgoing { node: NodeId, arrow: usize },
    #[error("arrow #{arrow} runs from input node {src} to output node {dst}")]
    InputToOutput {
        arrow: usize,
        src: NodeId,
        dst: NodeId,
    },
}

impl Violation {
    /// The node most directly responsible, when there is one.
    pub fn node(&self) -> Option<NodeId> {
        match *self {
            Violation::EmptyInputOrder | Violation::EmptyOutputOrder => None,
            Violation::DanglingArrow { node, .. }
            | Violation::DanglingOrder { node, .. }
            | Violation::DuplicateInOrder { node, .. }
            | Violation::NonInputInInputOrder { node, .. }
            | Violation::UnorderedInput { node }
            | Violation::InputAsOutput { node }
            | Violation::Indegree { node, .. }
            | Violation::OutputHasOutgoing { node, .. } => Some(node),
            Violation::InputToOutput { dst, .. } => Some(dst),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid A-type graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidGraph(pub Vec<Violation>);

/// Directed multigraph of typed nodes with ordered input and output lists.
///
/// Loops and parallel arrows are allowed. Arrow order carries no meaning for
/// simulation but is kept so that serialization is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ATypeGraph {
    kinds: Vec<NodeKind>,
    arrows: Vec<(NodeId, NodeId)>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
}

impl ATypeGraph {
    /// Builds a graph without checking it. Use [`validate`] or
    /// [`ATypeGraph::try_new`] when the parts come from outside.
    pub fn from_parts(
        kinds: Vec<NodeKind>,
        arrows: Vec<(NodeId, NodeId)>,
        inputs: Vec<NodeId>,
        outputs: Vec<NodeId>,
    ) -> Self {
        ATypeGraph {
            kinds,
            arrows,
            inputs,
            outputs,
        }
    }

    pub fn try_new(
        kinds: Vec<NodeKind>,
        arrows: Vec<(NodeId, NodeId)>,
        inputs: Vec<NodeId>,
        outputs: Vec<NodeId>,
    ) -> Result<Self, InvalidGraph> {
        let g = Self::from_parts(kinds, arrows, inputs, outputs);
        let violations = validate(&g);
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(InvalidGraph(violations))
        }
    }

    /// Number of nodes, `|A|`.
    pub fn size(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.kinds[node]
    }

    pub fn arrows(&self) -> &[(NodeId, NodeId)] {
        &self.arrows
    }

    pub fn input_order(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn output_order(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs.len()
    }

    /// Per-node role. Output membership wins over kind, so an (invalid)
    /// INPUT-kind output still reports `Output`.
    pub fn roles(&self) -> Vec<Role> {
        let mut roles: Vec<Role> = self
            .kinds
            .iter()
            .map(|k| match k {
                NodeKind::Input => Role::Input,
                _ => Role::Internal,
            })
            .collect();
        for &o in &self.outputs {
            if o < roles.len() {
                roles[o] = Role::Output;
            }
        }
        roles
    }

    /// Nodes that are neither inputs nor outputs, ascending.
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        self.roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Role::Internal)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn indegrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size()];
        for &(_, d) in &self.arrows {
            if d < deg.len() {
                deg[d] += 1;
            }
        }
        deg
    }

    /// Sources of each node's incoming arrows, in arrow order.
    pub fn sources(&self) -> Vec<Vec<NodeId>> {
        let mut src = vec![Vec::new(); self.size()];
        for &(s, d) in &self.arrows {
            src[d].push(s);
        }
        src
    }

    /// Undirected adjacency lists (each neighbour once, ascending, loops
    /// excluded).
    pub fn neighbours(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.size()];
        for &(s, d) in &self.arrows {
            if s != d {
                adj[s].push(d);
                adj[d].push(s);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Nodes allowed as the source of a new arrow into `target`:
    /// inputs and internal nodes for internal targets, internal nodes only
    /// for output targets, nothing for inputs.
    pub fn permitted_sources(&self, target: NodeId, roles: &[Role]) -> Vec<NodeId> {
        match roles[target] {
            Role::Input => Vec::new(),
            Role::Internal => (0..self.size())
                .filter(|&n| roles[n] != Role::Output)
                .collect(),
            Role::Output => (0..self.size())
                .filter(|&n| roles[n] == Role::Internal)
                .collect(),
        }
    }

    pub(crate) fn push_node(&mut self, kind: NodeKind) -> NodeId {
        self.kinds.push(kind);
        self.kinds.len() - 1
    }

    pub(crate) fn push_arrow(&mut self, src: NodeId, dst: NodeId) {
        self.arrows.push((src, dst));
    }

    pub(crate) fn arrows_mut(&mut self) -> &mut Vec<(NodeId, NodeId)> {
        &mut self.arrows
    }

    /// Deletes the given nodes and every arrow touching them, then
    /// renumbers the survivors densely, keeping their relative order.
    /// Returns the old-id → new-id map (`None` for removed nodes).
    pub(crate) fn remove_nodes(&mut self, doomed: &[bool]) -> Vec<Option<NodeId>> {
        let mut remap = vec![None; self.size()];
        let mut next = 0;
        for (old, slot) in remap.iter_mut().enumerate() {
            if !doomed[old] {
                *slot = Some(next);
                next += 1;
            }
        }
        self.kinds = self
            .kinds
            .iter()
            .enumerate()
            .filter(|(i, _)| !doomed[*i])
            .map(|(_, k)| *k)
            .collect();
        self.arrows = self
            .arrows
            .iter()
            .filter_map(|&(s, d)| Some((remap[s]?, remap[d]?)))
            .collect();
        self.inputs = self.inputs.iter().filter_map(|&n| remap[n]).collect();
        self.outputs = self.outputs.iter().filter_map(|&n| remap[n]).collect();
        remap
    }
}

/// A graph together with its delay time δ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AType {
    pub graph: ATypeGraph,
    pub delay: usize,
}

impl AType {
    pub fn new(graph: ATypeGraph, delay: usize) -> Self {
        AType { graph, delay }
    }
}

/// Lists every violated invariant; empty iff the graph is a valid A-type
/// graph.
pub fn validate(g: &ATypeGraph) -> Vec<Violation> {
    let n = g.size();
    let mut out = Vec::new();

    if g.inputs.is_empty() {
        out.push(Violation::EmptyInputOrder);
    }
    if g.outputs.is_empty() {
        out.push(Violation::EmptyOutputOrder);
    }

    for (list, ids) in [(OrderList::Input, &g.inputs), (OrderList::Output, &g.outputs)] {
        let mut seen = vec![false; n];
        for &node in ids.iter() {
            if node >= n {
                out.push(Violation::DanglingOrder { list, node });
            } else if seen[node] {
                out.push(Violation::DuplicateInOrder { list, node });
            } else {
                seen[node] = true;
            }
        }
    }

    let mut in_input_order = vec![false; n];
    for &node in &g.inputs {
        if node < n {
            in_input_order[node] = true;
            if g.kinds[node] != NodeKind::Input {
                out.push(Violation::NonInputInInputOrder {
                    node,
                    kind: g.kinds[node],
                });
            }
        }
    }
    for (node, kind) in g.kinds.iter().enumerate() {
        if *kind == NodeKind::Input && !in_input_order[node] {
            out.push(Violation::UnorderedInput { node });
        }
    }

    let mut is_output = vec![false; n];
    for &node in &g.outputs {
        if node < n {
            is_output[node] = true;
            if g.kinds[node] == NodeKind::Input {
                out.push(Violation::InputAsOutput { node });
            }
        }
    }

    let mut indeg = vec![0usize; n];
    for (i, &(src, dst)) in g.arrows.iter().enumerate() {
        if src >= n || dst >= n {
            out.push(Violation::DanglingArrow {
                arrow: i,
                src,
                dst,
                node: if src >= n { src } else { dst },
            });
            continue;
        }
        indeg[dst] += 1;
        if is_output[src] {
            out.push(Violation::OutputHasOutgoing {
                node: src,
                arrow: i,
            });
        }
        if g.kinds[src] == NodeKind::Input && is_output[dst] {
            out.push(Violation::InputToOutput { arrow: i, src, dst });
        }
    }

    for (node, kind) in g.kinds.iter().enumerate() {
        let expected = kind.required_indegree();
        if indeg[node] != expected {
            out.push(Violation::Indegree {
                node,
                kind: *kind,
                expected,
                found: indeg[node],
            });
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::NodeKind::*;
    use super::*;

    /// AND network: two inputs feed two NAND nodes; the output NANDs them.
    fn and_graph() -> ATypeGraph {
        ATypeGraph::from_parts(
            vec![Input, Input, Nand, Nand, Nand],
            vec![(0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)],
            vec![0, 1],
            vec![4],
        )
    }

    #[test]
    fn and_network_is_valid() {
        assert!(validate(&and_graph()).is_empty());
    }

    #[test]
    fn nand_with_one_input_is_flagged() {
        let mut g = and_graph();
        g.arrows.remove(1);
        let v = validate(&g);
        assert_eq!(
            v,
            vec![Violation::Indegree {
                node: 2,
                kind: Nand,
                expected: 2,
                found: 1
            }]
        );
        assert_eq!(v[0].node(), Some(2));
    }

    #[test]
    fn input_to_output_arrow_is_flagged() {
        // Replace 3 -> 4 with 1 -> 4.
        let mut g = and_graph();
        g.arrows[5] = (1, 4);
        let v = validate(&g);
        assert_eq!(
            v,
            vec![Violation::InputToOutput {
                arrow: 5,
                src: 1,
                dst: 4
            }]
        );
    }

    #[test]
    fn structural_violations() {
        let g = ATypeGraph::from_parts(vec![Input, Nand], vec![(0, 1), (0, 1), (1, 7)], vec![], vec![]);
        let v = validate(&g);
        assert!(v.contains(&Violation::EmptyInputOrder));
        assert!(v.contains(&Violation::EmptyOutputOrder));
        assert!(v.contains(&Violation::UnorderedInput { node: 0 }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::DanglingArrow { node: 7, .. })));

        let g = ATypeGraph::from_parts(
            vec![Input, Nand, Delay],
            vec![(0, 1), (0, 1), (2, 2), (2, 1)],
            vec![0, 0],
            vec![2, 2],
        );
        let v = validate(&g);
        assert!(v.contains(&Violation::DuplicateInOrder {
            list: OrderList::Input,
            node: 0
        }));
        assert!(v.contains(&Violation::DuplicateInOrder {
            list: OrderList::Output,
            node: 2
        }));
        assert!(v.contains(&Violation::OutputHasOutgoing { node: 2, arrow: 2 }));
        assert!(v.contains(&Violation::Indegree {
            node: 1,
            kind: Nand,
            expected: 2,
            found: 3
        }));
    }

    #[test]
    fn validate_is_pure() {
        let mut g = and_graph();
        g.arrows.push((4, 0));
        assert_eq!(validate(&g), validate(&g.clone()));
    }

    #[test]
    fn remove_nodes_renumbers() {
        let mut g = and_graph();
        let remap = g.remove_nodes(&[false, false, true, false, false]);
        assert_eq!(remap, vec![Some(0), Some(1), None, Some(2), Some(3)]);
        assert_eq!(g.arrows(), &[(0, 2), (1, 2), (2, 3)]);
        assert_eq!(g.output_order(), &[3]);
        assert_eq!(g.size(), 4);
    }

    #[test]
    fn permitted_sources_respect_roles() {
        let g = and_graph();
        let roles = g.roles();
        assert_eq!(g.permitted_sources(4, &roles), vec![2, 3]);
        assert_eq!(g.permitted_sources(2, &roles), vec![0, 1, 2, 3]);
        assert!(g.permitted_sources(0, &roles).is_empty());
        assert_eq!(g.internal_nodes(), vec![2, 3]);
    }
}
