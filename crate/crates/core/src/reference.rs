//! Small hand-built networks with known behaviour.
//!
//! Each constructor returns a valid A-type that represents the named
//! concept. Input nodes come first in the node list, in input order.

use crate::graph::{AType, ATypeGraph, NodeId, NodeKind};
use crate::tasks::{BooleanFunction, Concept};

use NodeKind::{Delay, Input, Nand};

/// Incremental builder for hand-wired graphs.
#[derive(Debug, Default)]
pub struct Builder {
    kinds: Vec<NodeKind>,
    arrows: Vec<(NodeId, NodeId)>,
    inputs: Vec<NodeId>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self) -> NodeId {
        self.kinds.push(Input);
        let id = self.kinds.len() - 1;
        self.inputs.push(id);
        id
    }

    pub fn nand(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.kinds.push(Nand);
        let id = self.kinds.len() - 1;
        self.arrows.push((a, id));
        self.arrows.push((b, id));
        id
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        self.nand(a, a)
    }

    pub fn delay(&mut self, a: NodeId) -> NodeId {
        self.kinds.push(Delay);
        let id = self.kinds.len() - 1;
        self.arrows.push((a, id));
        id
    }

    pub fn finish(self, outputs: Vec<NodeId>, delay: usize) -> AType {
        AType::new(
            ATypeGraph::from_parts(self.kinds, self.arrows, self.inputs, outputs),
            delay,
        )
    }
}

/// Clamped AND: two NANDs of the inputs feeding a NAND (δ = 2).
pub fn and_gate() -> AType {
    let mut b = Builder::new();
    let (x, y) = (b.input(), b.input());
    let p = b.nand(x, y);
    let q = b.nand(x, y);
    let out = b.nand(p, q);
    b.finish(vec![out], 2)
}

/// Two inputs, a delay on the first, a NAND of both, output NAND of the two
/// (δ = 2). Maps `11;01;10` to `1;1;0`.
pub fn delay_snapshot() -> AType {
    let mut b = Builder::new();
    let (x, y) = (b.input(), b.input());
    let d = b.delay(x);
    let n = b.nand(x, y);
    let out = b.nand(d, n);
    b.finish(vec![out], 2)
}

/// Columnwise exclusive-or (δ = 3).
pub fn xor_columnwise() -> AType {
    let mut b = Builder::new();
    let (x, y) = (b.input(), b.input());
    let dx = b.delay(x);
    let dy = b.delay(y);
    let e = b.nand(x, y);
    let f = b.nand(dx, e);
    let g = b.nand(dy, e);
    let out = b.nand(f, g);
    b.finish(vec![out], 3)
}

/// `n` side-by-side double negations (δ = 2).
pub fn identity(n: usize) -> AType {
    let mut b = Builder::new();
    let xs: Vec<NodeId> = (0..n).map(|_| b.input()).collect();
    let mid: Vec<NodeId> = xs.iter().map(|&x| b.not(x)).collect();
    let outs = mid.iter().map(|&m| b.not(m)).collect();
    b.finish(outs, 2)
}

/// Selects `x0` when `s` is 0 and `x1` when it is 1; the result is ready
/// three moments after the inputs.
fn mux2_block(b: &mut Builder, s: NodeId, x0: NodeId, x1: NodeId) -> NodeId {
    let ns = b.not(s);
    let dx0 = b.delay(x0);
    let ds = b.delay(s);
    let dx1 = b.delay(x1);
    let h = b.nand(ns, dx0);
    let i = b.nand(ds, dx1);
    b.nand(h, i)
}

/// 2-multiplexer, inputs `[s0, x0, x1]` (δ = 3).
pub fn multiplexer2() -> AType {
    let mut b = Builder::new();
    let (s, x0, x1) = (b.input(), b.input(), b.input());
    let out = mux2_block(&mut b, s, x0, x1);
    b.finish(vec![out], 3)
}

/// 3-multiplexer, inputs `[s1, s0, x0, x1, x2]` (δ = 6): a 2-multiplexer
/// on `(s0; x0, x1)` whose result is then selected against a delayed `x2`
/// by `s1`.
pub fn multiplexer3() -> AType {
    let mut b = Builder::new();
    let s1 = b.input();
    let s0 = b.input();
    let x0 = b.input();
    let x1 = b.input();
    let x2 = b.input();
    let low = mux2_block(&mut b, s0, x0, x1);
    let mut s = s1;
    let mut x = x2;
    for _ in 0..3 {
        s = b.delay(s);
        x = b.delay(x);
    }
    // Moment 3: `low`, `s` and `x` are aligned.
    let out = mux2_block(&mut b, s, low, x);
    b.finish(vec![out], 6)
}

/// `n`-carry (δ = n + 1) built from a negated input passed down a delay
/// chain; output `j` taps the chain `n − 1 − j` stages deep so component 0
/// is the earliest bit.
pub fn carry(n: usize) -> AType {
    let mut b = Builder::new();
    let x = b.input();
    let mut chain = vec![b.not(x)];
    for _ in 1..n {
        let d = b.delay(*chain.last().expect("non-empty"));
        chain.push(d);
    }
    let outs = (0..n).map(|j| b.not(chain[n - 1 - j])).collect();
    b.finish(outs, n + 1)
}

/// Seven-node graph for exercising mutation: inputs `a, b`; `c` delays
/// `a`; `d`, `e`, `f` are NANDs; output `g` is a NAND of `e` and `f`.
pub fn mutation_parent() -> ATypeGraph {
    ATypeGraph::from_parts(
        vec![Input, Input, Delay, Nand, Nand, Nand, Nand],
        vec![(0, 2), (1, 3), (2, 4), (2, 5), (3, 5), (4, 6), (4, 3), (5, 4), (5, 6)],
        vec![0, 1],
        vec![6],
    )
}

/// Crossover mother: acceptor `{3}` has distal boundary `{1, 2, 4, 5}`.
/// Nodes with one incoming arrow are delays.
pub fn crossover_mother() -> ATypeGraph {
    ATypeGraph::from_parts(
        vec![Input, Nand, Delay, Nand, Delay, Delay, Nand],
        vec![(0, 1), (0, 2), (2, 3), (3, 1), (3, 4), (4, 5), (4, 6), (5, 3), (5, 6)],
        vec![0],
        vec![6],
    )
}

/// Crossover father: donor `{1..=6}` has proximal boundary `{1, 5, 6}` and
/// distal boundary `{0, 7}`.
pub fn crossover_father() -> ATypeGraph {
    ATypeGraph::from_parts(
        vec![Input, Nand, Nand, Nand, Nand, Nand, Nand, Nand],
        vec![
            (0, 1),
            (0, 5),
            (0, 6),
            (2, 1),
            (2, 4),
            (2, 4),
            (3, 2),
            (3, 2),
            (3, 5),
            (4, 3),
            (4, 3),
            (4, 6),
            (5, 7),
            (6, 7),
        ],
        vec![0],
        vec![7],
    )
}

/// Every reference network paired with the concept it represents.
pub fn catalog() -> Vec<(&'static str, AType, Concept)> {
    vec![
        ("and", and_gate(), Concept::Clamped(BooleanFunction::And)),
        ("xor", xor_columnwise(), Concept::columnwise(BooleanFunction::Xor)),
        ("identity-1", identity(1), Concept::identity(1)),
        ("identity-2", identity(2), Concept::identity(2)),
        ("multiplexer-2", multiplexer2(), Concept::multiplexer(2)),
        ("multiplexer-3", multiplexer3(), Concept::multiplexer(3)),
        ("carry-2", carry(2), Concept::carry(2)),
        ("carry-3", carry(3), Concept::carry(3)),
    ]
}
