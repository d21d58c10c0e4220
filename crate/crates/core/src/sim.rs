//! Synchronous simulation of A-types.
//!
//! At moment 0 every non-input node is 0 and the input nodes hold `x_0`.
//! Going from moment `t` to `t + 1`, a NAND node takes the NAND of its two
//! sources' states at `t`, a delay node copies its source's state at `t`,
//! and the input nodes take `x_{t+1}` (or keep the last vector once the
//! input sequence runs out). Output is collected from moment δ on.
//!
//! [`Simulator`] is generic over a [`LaneWord`]: every bit position is an
//! independent run of the same network, which lets fitness evaluation push
//! up to 64 training examples through one pass with `u64`.

use rand::Rng;
use thiserror::Error;

use crate::graph::{AType, ATypeGraph, NodeKind};
use crate::num::LaneWord;
use crate::seq::BooleanSequence;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("input dimension {found} does not match the network's {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input sequence is empty")]
    EmptyInput,
}

/// A graph flattened into update instructions. Assumes a valid graph.
#[derive(Clone, Debug)]
pub struct Network {
    size: usize,
    nands: Vec<(u32, u32, u32)>,
    delays: Vec<(u32, u32)>,
    inputs: Vec<u32>,
    outputs: Vec<u32>,
}

impl Network {
    pub fn compile(g: &ATypeGraph) -> Network {
        let sources = g.sources();
        let mut nands = Vec::new();
        let mut delays = Vec::new();
        for (node, kind) in g.kinds().iter().enumerate() {
            let src = &sources[node];
            match kind {
                NodeKind::Input => {}
                NodeKind::Nand => nands.push((node as u32, src[0] as u32, src[1] as u32)),
                NodeKind::Delay => delays.push((node as u32, src[0] as u32)),
            }
        }
        Network {
            size: g.size(),
            nands,
            delays,
            inputs: g.input_order().iter().map(|&n| n as u32).collect(),
            outputs: g.output_order().iter().map(|&n| n as u32).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_dim(&self) -> usize {
        self.outputs.len()
    }

    /// Runs `moments` moments (0..moments) and returns the output words,
    /// moment-major: entry `t * p + k` is output `k` at moment `t`.
    /// `input_at(t, buf)` fills the input words for moment `t`.
    pub fn output_trace<W, F>(&self, moments: usize, mut input_at: F) -> Vec<W>
    where
        W: LaneWord,
        F: FnMut(usize, &mut [W]),
    {
        let p = self.output_dim();
        let mut trace = Vec::with_capacity(moments * p);
        if moments == 0 {
            return trace;
        }
        let mut x = vec![W::zero(); self.input_dim()];
        input_at(0, &mut x);
        let mut sim = Simulator::new(self, &x);
        for t in 0..moments {
            trace.extend(sim.outputs());
            if t + 1 < moments {
                input_at(t + 1, &mut x);
                sim.advance(&x);
            }
        }
        trace
    }
}

/// Double-buffered network state: every read sees moment `t`, every write
/// lands in moment `t + 1`.
#[derive(Clone, Debug)]
pub struct Simulator<'n, W: LaneWord> {
    net: &'n Network,
    state: Vec<W>,
    next: Vec<W>,
    moment: usize,
}

impl<'n, W: LaneWord> Simulator<'n, W> {
    /// Moment 0 with the input nodes set to `x0`.
    pub fn new(net: &'n Network, x0: &[W]) -> Self {
        assert_eq!(x0.len(), net.input_dim(), "input word count");
        let mut state = vec![W::zero(); net.size];
        for (k, &i) in net.inputs.iter().enumerate() {
            state[i as usize] = x0[k];
        }
        Simulator {
            net,
            next: state.clone(),
            state,
            moment: 0,
        }
    }

    pub fn moment(&self) -> usize {
        self.moment
    }

    /// Moves to the next moment; `x` becomes the input node states there.
    #[inline]
    pub fn advance(&mut self, x: &[W]) {
        let s = &self.state;
        let nx = &mut self.next;
        for &(d, a, b) in &self.net.nands {
            nx[d as usize] = s[a as usize].nand(s[b as usize]);
        }
        for &(d, a) in &self.net.delays {
            nx[d as usize] = s[a as usize];
        }
        for (k, &i) in self.net.inputs.iter().enumerate() {
            nx[i as usize] = x[k];
        }
        std::mem::swap(&mut self.state, &mut self.next);
        self.moment += 1;
    }

    pub fn output(&self, k: usize) -> W {
        self.state[self.net.outputs[k] as usize]
    }

    pub fn outputs(&self) -> impl Iterator<Item = W> + '_ {
        self.net.outputs.iter().map(|&o| self.state[o as usize])
    }

    pub fn state(&self) -> &[W] {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut [W] {
        &mut self.state
    }
}

fn pack<W: LaneWord>(v: &[bool], out: &mut [W]) {
    for (w, &b) in out.iter_mut().zip(v) {
        *w = if b { W::one() } else { W::zero() };
    }
}

/// Feeds `input` (shunting its last vector once exhausted) and returns the
/// `out_len` output vectors from moment δ on.
pub fn run(atype: &AType, input: &BooleanSequence, out_len: usize) -> Result<BooleanSequence, SimError> {
    let g = &atype.graph;
    if input.dim() != g.input_dim() {
        return Err(SimError::DimensionMismatch {
            expected: g.input_dim(),
            found: input.dim(),
        });
    }
    if input.is_empty() {
        return Err(SimError::EmptyInput);
    }
    let p = g.output_dim();
    let mut out = BooleanSequence::with_capacity(p, out_len).expect("output dimension >= 1");
    if out_len == 0 {
        return Ok(out);
    }
    let net = Network::compile(g);
    let last = input.len() - 1;
    let trace: Vec<u8> = net.output_trace(atype.delay + out_len, |t, x| pack(input.get(t.min(last)), x));
    let mut y = vec![false; p];
    for t in atype.delay..atype.delay + out_len {
        for (k, bit) in y.iter_mut().enumerate() {
            *bit = trace[t * p + k] & 1 == 1;
        }
        out.push(&y).expect("output dimension");
    }
    Ok(out)
}

/// Input nodes held at `x` for the whole run.
pub fn run_clamped(atype: &AType, x: &[bool], horizon: usize) -> Result<BooleanSequence, SimError> {
    let input = BooleanSequence::from_vectors(x.len(), &[x]).map_err(|_| SimError::DimensionMismatch {
        expected: atype.graph.input_dim(),
        found: x.len(),
    })?;
    run(atype, &input, horizon)
}

/// True iff the clamped output is the same vector at every moment of the
/// horizon.
pub fn is_clampable(atype: &AType, x: &[bool], horizon: usize) -> Result<bool, SimError> {
    let out = run_clamped(atype, x, horizon)?;
    Ok(match out.iter().next() {
        Some(first) => out.iter().all(|v| v == first),
        None => true,
    })
}

/// Interval of delays worth trying for a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DelayRange {
    pub min: usize,
    pub max: usize,
}

impl DelayRange {
    pub fn len(&self) -> usize {
        self.max - self.min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, delay: usize) -> bool {
        (self.min..=self.max).contains(&delay)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }
}

/// Length of each random probe sequence for a graph of `size` nodes.
pub fn probe_len(size: usize) -> usize {
    2 * size + 16
}

/// Percolation-based delay estimate.
///
/// Two independent random probes (whose first vectors differ) are run with
/// δ = 0; `q` is the first moment where the outputs differ, or −1. The
/// minimum is `max(0, q − (n + p))` capped at the node count `N`, the
/// maximum is `N`.
pub fn estimate_delay_range<R: Rng + ?Sized>(g: &ATypeGraph, rng: &mut R) -> DelayRange {
    let n = g.input_dim();
    let p = g.output_dim();
    let size = g.size();
    let len = probe_len(size);
    let a = BooleanSequence::random(n, len, rng).expect("input dimension >= 1");
    let mut b = BooleanSequence::random(n, len, rng).expect("input dimension >= 1");
    if a.get(0) == b.get(0) {
        let flip = rng.random_range(0..n);
        let mut v = b.get(0).to_vec();
        v[flip] = !v[flip];
        let mut fixed = BooleanSequence::with_capacity(n, len).expect("dim");
        fixed.push(&v).expect("dim");
        for t in 1..len {
            fixed.push(b.get(t)).expect("dim");
        }
        b = fixed;
    }

    // Lane 0 carries probe `a`, lane 1 probe `b`.
    let net = Network::compile(g);
    let trace: Vec<u8> = net.output_trace(len, |t, x| {
        for (k, w) in x.iter_mut().enumerate() {
            *w = (a.get(t)[k] as u8) | ((b.get(t)[k] as u8) << 1);
        }
    });
    let q = trace
        .chunks(p)
        .position(|ys| ys.iter().any(|&w| (w ^ (w >> 1)) & 1 == 1));

    let min = match q {
        Some(q) => q.saturating_sub(n + p).min(size),
        None => 0,
    };
    DelayRange { min, max: size }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeKind::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(s: &str) -> BooleanSequence {
        BooleanSequence::parse(s, None).unwrap()
    }

    fn and_network() -> AType {
        AType::new(
            ATypeGraph::from_parts(
                vec![Input, Input, Nand, Nand, Nand],
                vec![(0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)],
                vec![0, 1],
                vec![4],
            ),
            2,
        )
    }

    /// Two inputs; a delay on input 0, a NAND of both inputs, and an output
    /// NAND of those two.
    fn snapshot_network() -> AType {
        AType::new(
            ATypeGraph::from_parts(
                vec![Input, Input, Delay, Nand, Nand],
                vec![(0, 2), (0, 3), (1, 3), (2, 4), (3, 4)],
                vec![0, 1],
                vec![4],
            ),
            2,
        )
    }

    #[test]
    fn snapshot_sequence() {
        let out = run(&snapshot_network(), &seq("11;01;10"), 3).unwrap();
        assert_eq!(out.to_string(), "1;1;0");
    }

    #[test]
    fn snapshot_node_states() {
        // Node states at moments 0..=4, in node order.
        let expected = ["11000", "01101", "10011", "10111", "10110"];
        let net = Network::compile(&snapshot_network().graph);
        let input = seq("11;01;10;10;10");
        let mut sim: Simulator<u8> = Simulator::new(&net, &[1, 1]);
        for (t, want) in expected.iter().enumerate() {
            let got: String = sim.state().iter().map(|w| if *w & 1 == 1 { '1' } else { '0' }).collect();
            assert_eq!(&got, want, "moment {t}");
            if t + 1 < expected.len() {
                let x: Vec<u8> = input.get(t + 1).iter().map(|&b| b as u8).collect();
                sim.advance(&x);
            }
        }
    }

    #[test]
    fn zero_length_output() {
        let out = run(&snapshot_network(), &seq("11"), 0).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.dim(), 1);
    }

    #[test]
    fn dimension_errors() {
        assert_eq!(
            run(&and_network(), &seq("1"), 1),
            Err(SimError::DimensionMismatch { expected: 2, found: 1 })
        );
        assert_eq!(
            run(&and_network(), &BooleanSequence::new(2).unwrap(), 1),
            Err(SimError::EmptyInput)
        );
        assert!(run_clamped(&and_network(), &[true], 3).is_err());
        assert!(run_clamped(&and_network(), &[], 3).is_err());
    }

    #[test]
    fn clamped_and() {
        let a = and_network();
        assert_eq!(run_clamped(&a, &[true, true], 5).unwrap().to_string(), "1;1;1;1;1");
        assert_eq!(run_clamped(&a, &[false, false], 5).unwrap().to_string(), "0;0;0;0;0");
        assert!(run_clamped(&a, &[true, false], 0).unwrap().is_empty());
        for x in [[false, false], [false, true], [true, false], [true, true]] {
            assert!(is_clampable(&a, &x, 1000).unwrap());
        }
    }

    #[test]
    fn oscillator_is_not_clampable() {
        // 1 = nand(x, 2) and 2 = nand(1, 1) form a two-node ring that
        // flips every moment when x = 1; output 3 = nand(2, 2).
        let g = ATypeGraph::from_parts(
            vec![Input, Nand, Nand, Nand],
            vec![(0, 1), (2, 1), (1, 2), (1, 2), (2, 3), (2, 3)],
            vec![0],
            vec![3],
        );
        let a = AType::new(g, 0);
        // Independent oracle: hand-iterate the two-node ring with x = 1.
        let (mut s1, mut s2, mut s3) = (false, false, false);
        let mut oracle = Vec::new();
        for _ in 0..8 {
            oracle.push(s3);
            let n1 = !(true && s2);
            let n2 = !(s1 && s1);
            let n3 = !(s2 && s2);
            (s1, s2, s3) = (n1, n2, n3);
        }
        let out = run_clamped(&a, &[true], 8).unwrap();
        let got: Vec<bool> = out.iter().map(|v| v[0]).collect();
        assert_eq!(got, oracle);
        assert!(!is_clampable(&a, &[true], 8).unwrap());
        assert!(is_clampable(&a, &[true], 1).unwrap());
    }

    #[test]
    fn delay_range_for_identity_chain() {
        let g = ATypeGraph::from_parts(
            vec![Input, Nand, Nand],
            vec![(0, 1), (0, 1), (1, 2), (1, 2)],
            vec![0],
            vec![2],
        );
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(estimate_delay_range(&g, &mut rng), DelayRange { min: 0, max: 3 });
        }
    }

    #[test]
    fn delay_range_for_constant_output() {
        // Output fed only by a NAND ring that never sees the input.
        let g = ATypeGraph::from_parts(
            vec![Input, Nand, Nand],
            vec![(1, 1), (1, 1), (1, 2), (1, 2)],
            vec![0],
            vec![2],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(estimate_delay_range(&g, &mut rng), DelayRange { min: 0, max: 3 });
    }

    #[test]
    fn delay_range_subtracts_dimensions() {
        // Chain of 10 delays after the input: the output copies x_{t-10}, so
        // the probes first differ at q = 10; q - (1 + 1) = 8.
        let mut kinds = vec![Input];
        let mut arrows = Vec::new();
        for i in 1..=10 {
            kinds.push(Delay);
            arrows.push((i - 1, i));
        }
        let g = ATypeGraph::from_parts(kinds, arrows, vec![0], vec![10]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(estimate_delay_range(&g, &mut rng), DelayRange { min: 8, max: 11 });
    }
}
