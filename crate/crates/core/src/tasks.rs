//! Concept functions, training sets and exactness checks.
//!
//! Vectors are stored earliest-first; the figures in the literature print
//! sequences with the earliest moment on the right, which only matters for
//! display (see [`BooleanSequence::reversed`]).

use std::fmt;

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::graph::AType;
use crate::num::LaneWord;
use crate::seq::BooleanSequence;
use crate::sim::{self, Network, Simulator};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error("input dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("selector value {selector} is not below {n}: outside the multiplexer's domain")]
    OutOfDomain { selector: usize, n: usize },
    #[error("{n}-carry needs at least {n} input vectors, got {len}")]
    TooShort { n: usize, len: usize },
    #[error("clamped input must be a single vector, got {0}")]
    NotClamped(usize),
    #[error("parameter n must be at least 1")]
    ZeroN,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training example {0} has inconsistent dimensions")]
    Heterogeneous(usize),
}

/// Number of selector pins for an `n`-multiplexer: `ceil(log2 n)`.
pub fn selector_bits(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Integer encoded by `bits`, most significant first.
fn msb_value(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Boolean functions `S_n -> S_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BooleanFunction {
    Identity(usize),
    /// Inputs: `ceil(log2 n)` selector pins (most significant first), then
    /// data pins `x_0..x_{n-1}`. Output: `x_i`, `i` the selector value.
    Multiplexer(usize),
    And,
    Xor,
}

impl BooleanFunction {
    pub fn input_dim(&self) -> usize {
        match *self {
            BooleanFunction::Identity(n) => n,
            BooleanFunction::Multiplexer(n) => n + selector_bits(n),
            BooleanFunction::And | BooleanFunction::Xor => 2,
        }
    }

    pub fn output_dim(&self) -> usize {
        match *self {
            BooleanFunction::Identity(n) => n,
            _ => 1,
        }
    }

    pub fn in_domain(&self, x: &[bool]) -> bool {
        match *self {
            BooleanFunction::Multiplexer(n) => msb_value(&x[..selector_bits(n)]) < n,
            _ => true,
        }
    }

    pub fn eval(&self, x: &[bool]) -> Result<Vec<bool>, TaskError> {
        if x.len() != self.input_dim() {
            return Err(TaskError::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        Ok(match *self {
            BooleanFunction::Identity(_) => x.to_vec(),
            BooleanFunction::Multiplexer(n) => {
                let s = selector_bits(n);
                let i = msb_value(&x[..s]);
                if i >= n {
                    return Err(TaskError::OutOfDomain { selector: i, n });
                }
                vec![x[s + i]]
            }
            BooleanFunction::And => vec![x[0] && x[1]],
            BooleanFunction::Xor => vec![x[0] ^ x[1]],
        })
    }

    /// Every in-domain input vector, in increasing binary order (component
    /// 0 most significant).
    pub fn domain(&self) -> Vec<Vec<bool>> {
        let m = self.input_dim();
        assert!(m < usize::BITS as usize, "domain too large to enumerate");
        (0..1usize << m)
            .map(|k| (0..m).map(|j| (k >> (m - 1 - j)) & 1 == 1).collect::<Vec<bool>>())
            .filter(|x| self.in_domain(x))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Clamped,
    Sequential,
}

/// A function an A-type may be trained to represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Concept {
    /// Single input vector held constant; constant output expected.
    Clamped(BooleanFunction),
    /// Termwise lift to sequences: `y_i = f(x_i)`.
    Columnwise(BooleanFunction),
    /// One input bit per moment; output `i` is the window of input bits
    /// `i..i+n`, earliest bit in component 0.
    Carry(usize),
}

impl Concept {
    pub fn identity(n: usize) -> Concept {
        Concept::Clamped(BooleanFunction::Identity(n))
    }

    pub fn multiplexer(n: usize) -> Concept {
        Concept::Clamped(BooleanFunction::Multiplexer(n))
    }

    pub fn carry(n: usize) -> Concept {
        Concept::Carry(n)
    }

    pub fn columnwise(f: BooleanFunction) -> Concept {
        Concept::Columnwise(f)
    }

    pub fn check(&self) -> Result<(), TaskError> {
        let n = match *self {
            Concept::Clamped(f) | Concept::Columnwise(f) => match f {
                BooleanFunction::Identity(n) | BooleanFunction::Multiplexer(n) => n,
                _ => 1,
            },
            Concept::Carry(n) => n,
        };
        if n == 0 {
            Err(TaskError::ZeroN)
        } else {
            Ok(())
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Concept::Clamped(f) | Concept::Columnwise(f) => f.input_dim(),
            Concept::Carry(_) => 1,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            Concept::Clamped(f) | Concept::Columnwise(f) => f.output_dim(),
            Concept::Carry(n) => *n,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Concept::Clamped(_) => Mode::Clamped,
            _ => Mode::Sequential,
        }
    }

    /// Maps an input sequence to the expected output sequence.
    ///
    /// Clamped and columnwise concepts act termwise (a clamped input is a
    /// one-vector sequence); see [`Concept::clamped_target`] for the
    /// repeated form used in training.
    pub fn apply(&self, input: &BooleanSequence) -> Result<BooleanSequence, TaskError> {
        if input.dim() != self.input_dim() {
            return Err(TaskError::DimensionMismatch {
                expected: self.input_dim(),
                found: input.dim(),
            });
        }
        let p = self.output_dim();
        match *self {
            Concept::Clamped(f) | Concept::Columnwise(f) => {
                let mut out = BooleanSequence::with_capacity(p, input.len()).expect("p >= 1");
                for x in input.iter() {
                    out.push(&f.eval(x)?).expect("output dim");
                }
                Ok(out)
            }
            Concept::Carry(n) => {
                let l = input.len();
                if l < n {
                    return Err(TaskError::TooShort { n, len: l });
                }
                let bits = input.as_bits();
                let mut out = BooleanSequence::with_capacity(n, l - n + 1).expect("n >= 1");
                for i in 0..=l - n {
                    out.push(&bits[i..i + n]).expect("output dim");
                }
                Ok(out)
            }
        }
    }

    /// `f(x)` repeated `len` times.
    pub fn clamped_target(&self, x: &[bool], len: usize) -> Result<BooleanSequence, TaskError> {
        let f = match self {
            Concept::Clamped(f) | Concept::Columnwise(f) => f,
            Concept::Carry(_) => return Err(TaskError::NotClamped(1)),
        };
        Ok(BooleanSequence::repeated(&f.eval(x)?, len).expect("p >= 1"))
    }

    /// Short machine-friendly family name.
    pub fn family(&self) -> &'static str {
        match self {
            Concept::Clamped(BooleanFunction::Identity(_)) => "identity",
            Concept::Clamped(BooleanFunction::Multiplexer(_)) => "multiplexer",
            Concept::Clamped(BooleanFunction::And) => "and",
            Concept::Clamped(BooleanFunction::Xor) => "xor",
            Concept::Columnwise(_) => "columnwise",
            Concept::Carry(_) => "carry",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Clamped(g) => write!(f, "clamped {g:?}"),
            Concept::Columnwise(g) => write!(f, "columnwise {g:?}"),
            Concept::Carry(n) => write!(f, "{n}-carry"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingExample {
    pub input: BooleanSequence,
    pub expected: BooleanSequence,
}

/// Non-empty list of examples with matching dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingSet {
    examples: Vec<TrainingExample>,
}

impl TrainingSet {
    pub fn new(examples: Vec<TrainingExample>) -> Result<Self, TaskError> {
        let first = examples.first().ok_or(TaskError::EmptyTrainingSet)?;
        let (n, p) = (first.input.dim(), first.expected.dim());
        for (i, e) in examples.iter().enumerate() {
            if e.input.dim() != n || e.expected.dim() != p || e.input.is_empty() {
                return Err(TaskError::Heterogeneous(i));
            }
        }
        Ok(TrainingSet { examples })
    }

    pub fn examples(&self) -> &[TrainingExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.examples[0].input.dim()
    }

    pub fn output_dim(&self) -> usize {
        self.examples[0].expected.dim()
    }
}

/// Training-data conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingParams {
    /// Output length compared for clamped examples.
    pub clamped_output_len: usize,
    /// Clamped sets larger than this are subsampled without replacement.
    pub max_examples: usize,
    /// Input length of the single sequential example.
    pub sequence_len: usize,
}

impl Default for TrainingParams {
    fn default() -> Self {
        TrainingParams {
            clamped_output_len: 3,
            max_examples: 100,
            sequence_len: 50,
        }
    }
}

/// Builds the training set for a concept.
///
/// Clamped: every in-domain input vector, target repeated to
/// `clamped_output_len`, subsampled to `max_examples` when larger.
/// Sequential: one example with a uniformly random input of
/// `sequence_len` vectors.
pub fn training_set<R: Rng + ?Sized>(
    concept: &Concept,
    params: &TrainingParams,
    rng: &mut R,
) -> Result<TrainingSet, TaskError> {
    concept.check()?;
    let examples = match concept {
        Concept::Clamped(f) => {
            let domain = f.domain();
            let chosen: Vec<&Vec<bool>> = if domain.len() > params.max_examples {
                let mut picks = index::sample(rng, domain.len(), params.max_examples).into_vec();
                picks.sort_unstable();
                picks.into_iter().map(|i| &domain[i]).collect()
            } else {
                domain.iter().collect()
            };
            chosen
                .into_iter()
                .map(|x| {
                    Ok(TrainingExample {
                        input: BooleanSequence::from_vectors(x.len(), &[x]).expect("dim >= 1"),
                        expected: concept.clamped_target(x, params.clamped_output_len)?,
                    })
                })
                .collect::<Result<Vec<_>, TaskError>>()?
        }
        _ => {
            let input = random_in_domain(concept, params.sequence_len, rng);
            let expected = concept.apply(&input)?;
            vec![TrainingExample { input, expected }]
        }
    };
    TrainingSet::new(examples)
}

/// Random input sequence whose vectors all lie in the concept's domain.
fn random_in_domain<R: Rng + ?Sized>(concept: &Concept, len: usize, rng: &mut R) -> BooleanSequence {
    let m = concept.input_dim();
    let mut s = BooleanSequence::with_capacity(m, len).expect("dim >= 1");
    let mut v = vec![false; m];
    for _ in 0..len {
        loop {
            v.iter_mut().for_each(|b| *b = rng.random());
            let ok = match concept {
                Concept::Columnwise(f) => f.in_domain(&v),
                _ => true,
            };
            if ok {
                break;
            }
        }
        s.push(&v).expect("dim");
    }
    s
}

/// Lengths used by the exactness checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessParams {
    /// Moments (from δ) a clamped output must stay at `f(x)`.
    pub clamped_horizon: usize,
    /// Input length of the random sequential test.
    pub sequence_len: usize,
}

impl Default for ExactnessParams {
    fn default() -> Self {
        ExactnessParams {
            clamped_horizon: 1000,
            sequence_len: 10_000,
        }
    }
}

/// Exactness check with the default lengths (1000 clamped moments, 10^4
/// sequential vectors).
pub fn verify_exact<R: Rng + ?Sized>(atype: &AType, concept: &Concept, rng: &mut R) -> bool {
    verify_exact_with(atype, concept, &ExactnessParams::default(), rng)
}

pub fn verify_exact_with<R: Rng + ?Sized>(
    atype: &AType,
    concept: &Concept,
    params: &ExactnessParams,
    rng: &mut R,
) -> bool {
    let g = &atype.graph;
    if g.input_dim() != concept.input_dim() || g.output_dim() != concept.output_dim() {
        return false;
    }
    match concept {
        Concept::Clamped(f) => clamped_exact::<u64>(atype, f, params.clamped_horizon),
        _ => {
            let len = match concept {
                Concept::Carry(n) => params.sequence_len.max(*n),
                _ => params.sequence_len.max(1),
            };
            let input = random_in_domain(concept, len, rng);
            let Ok(expected) = concept.apply(&input) else {
                return false;
            };
            matches!(sim::run(atype, &input, expected.len()), Ok(out) if out == expected)
        }
    }
}

/// Every in-domain `x`, clamped, must output `f(x)` at each of the
/// `horizon` moments from δ on. Domain vectors run `W::LANES` at a time.
fn clamped_exact<W: LaneWord>(atype: &AType, f: &BooleanFunction, horizon: usize) -> bool {
    let net = Network::compile(&atype.graph);
    let domain = f.domain();
    let (m, p) = (f.input_dim(), f.output_dim());
    for chunk in domain.chunks(W::LANES) {
        let mut x = vec![W::zero(); m];
        let mut want = vec![W::zero(); p];
        for (lane, v) in chunk.iter().enumerate() {
            for (j, &b) in v.iter().enumerate() {
                x[j] = x[j].with_lane(lane, b);
            }
            let y = f.eval(v).expect("domain vector");
            for (k, &b) in y.iter().enumerate() {
                want[k] = want[k].with_lane(lane, b);
            }
        }
        let mask = W::low_mask(chunk.len());
        let mut sim = Simulator::new(&net, &x);
        for t in 0..atype.delay + horizon {
            if t >= atype.delay && sim.outputs().zip(&want).any(|(o, &w)| (o ^ w) & mask != W::zero()) {
                return false;
            }
            sim.advance(&x);
        }
    }
    true
}
