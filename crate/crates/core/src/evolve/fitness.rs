//! Fitness of a graph at one or many delays. Lower is fitter; 0 means every
//! training output matched.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AType, ATypeGraph};
use crate::num::{LaneWord, Real};
use crate::seq::BooleanSequence;
use crate::sim::{self, DelayRange, Network};
use crate::tasks::{TrainingExample, TrainingSet};
use crate::{Fitness, Lanes};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("cannot compare a {left_len}x{left_dim} sequence with a {right_len}x{right_dim} one")]
pub struct ShapeMismatch {
    pub left_len: usize,
    pub left_dim: usize,
    pub right_len: usize,
    pub right_dim: usize,
}

/// Size penalty parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessConfig<T = Fitness> {
    /// Sizes up to this bound are not penalised.
    pub penalty_bound: usize,
    /// Slope of the penalty above the bound.
    pub pressure_gradient: T,
}

impl<T: Real> FitnessConfig<T> {
    pub fn new(penalty_bound: usize) -> Self {
        FitnessConfig {
            penalty_bound,
            pressure_gradient: T::lit(0.5),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.penalty_bound >= 1 && self.pressure_gradient > T::zero() && self.pressure_gradient.is_finite()
    }

    /// `d` if `size <= u`, else `min(1, d * m * (size - u + 1))`.
    pub fn penalize(&self, d: T, size: usize) -> T {
        if size <= self.penalty_bound {
            d
        } else {
            let factor = T::from_count(size - self.penalty_bound + 1);
            (d * self.pressure_gradient * factor).min(T::one())
        }
    }
}

/// Fraction of differing bits.
pub fn normalized_hamming<T: Real>(a: &BooleanSequence, b: &BooleanSequence) -> Result<T, ShapeMismatch> {
    if a.dim() != b.dim() || a.len() != b.len() {
        return Err(ShapeMismatch {
            left_len: a.len(),
            left_dim: a.dim(),
            right_len: b.len(),
            right_dim: b.dim(),
        });
    }
    let total = a.as_bits().len();
    if total == 0 {
        return Ok(T::zero());
    }
    let diff = a.as_bits().iter().zip(b.as_bits()).filter(|(x, y)| x != y).count();
    Ok(T::from_count(diff) / T::from_count(total))
}

/// Fitness of the graph at one delay, simulating each example separately.
pub fn fitness<T: Real>(graph: &ATypeGraph, delay: usize, training: &TrainingSet, cfg: &FitnessConfig<T>) -> T {
    let atype = AType::new(graph.clone(), delay);
    let mut sum = T::zero();
    for e in training.examples() {
        let out = sim::run(&atype, &e.input, e.expected.len()).expect("training set matches graph");
        sum = sum + normalized_hamming::<T>(&out, &e.expected).expect("same shape");
    }
    let d = sum / T::from_count(training.len());
    cfg.penalize(d, graph.size())
}

/// Fitness at every delay of `range` (entry `i` is delay `range.min + i`).
///
/// Examples are packed into the lanes of a [`Lanes`] word and each batch is
/// simulated once for `range.max + len` moments; every delay reads its
/// window from that one trace.
pub fn fitness_profile<T: Real>(
    graph: &ATypeGraph,
    range: DelayRange,
    training: &TrainingSet,
    cfg: &FitnessConfig<T>,
) -> Vec<T> {
    let net = Network::compile(graph);
    let p = graph.output_dim();
    let examples = training.examples();
    let mut dist = vec![T::zero(); range.len()];

    for batch in examples.chunks(Lanes::LANES) {
        let out_len = batch.iter().map(|e| e.expected.len()).max().unwrap_or(0);
        if out_len == 0 {
            continue;
        }
        let moments = range.max + out_len;
        if batch.len() == 1 && moments <= u128::BITS as usize {
            single_example_distances(&net, &batch[0], range, &mut dist);
            continue;
        }
        let trace: Vec<Lanes> = net.output_trace(moments, |t, x| {
            x.iter_mut().for_each(|w| *w = 0);
            for (lane, e) in batch.iter().enumerate() {
                let v = e.input.get(t.min(e.input.len() - 1));
                for (w, &b) in x.iter_mut().zip(v) {
                    *w |= (b as Lanes) << lane;
                }
            }
        });

        // Expected words and live-lane masks per output moment.
        let mut want = vec![0 as Lanes; out_len * p];
        let mut live = vec![0 as Lanes; out_len];
        for (lane, e) in batch.iter().enumerate() {
            for (k, v) in e.expected.iter().enumerate() {
                live[k] |= 1 << lane;
                for (j, &b) in v.iter().enumerate() {
                    want[k * p + j] |= (b as Lanes) << lane;
                }
            }
        }
        let uniform = batch.iter().all(|e| e.expected.len() == out_len);
        let weights: Vec<T> = batch
            .iter()
            .map(|e| T::one() / T::from_count(e.expected.len().max(1) * p))
            .collect();

        for (i, delay) in range.iter().enumerate() {
            let window = &trace[delay * p..(delay + out_len) * p];
            if uniform {
                let mut diff = 0u32;
                for k in 0..out_len {
                    for j in 0..p {
                        diff += ((window[k * p + j] ^ want[k * p + j]) & live[k]).count_ones();
                    }
                }
                dist[i] = dist[i] + T::from_count(diff as usize) * weights[0];
            } else {
                for k in 0..out_len {
                    for j in 0..p {
                        let mut bits = (window[k * p + j] ^ want[k * p + j]) & live[k];
                        while bits != 0 {
                            let lane = bits.trailing_zeros() as usize;
                            dist[i] = dist[i] + weights[lane];
                            bits &= bits - 1;
                        }
                    }
                }
            }
        }
    }

    let count = T::from_count(examples.len());
    dist.into_iter()
        .map(|d| cfg.penalize(d / count, graph.size()))
        .collect()
}

/// Adds one example's per-delay distances to `dist`, packing each output
/// over time into a single word so every delay is one shifted compare.
fn single_example_distances<T: Real>(net: &Network, e: &TrainingExample, range: DelayRange, dist: &mut [T]) {
    let p = net.output_dim();
    let out_len = e.expected.len();
    let moments = range.max + out_len;
    let last = e.input.len() - 1;
    let trace: Vec<u8> = net.output_trace(moments, |t, x| {
        for (w, &b) in x.iter_mut().zip(e.input.get(t.min(last))) {
            *w = b as u8;
        }
    });
    let mut got = vec![0u128; p];
    for t in 0..moments {
        for (j, g) in got.iter_mut().enumerate() {
            *g |= ((trace[t * p + j] & 1) as u128) << t;
        }
    }
    let mut want = vec![0u128; p];
    for (k, v) in e.expected.iter().enumerate() {
        for (j, &b) in v.iter().enumerate() {
            want[j] |= (b as u128) << k;
        }
    }
    let mask = if out_len == 128 { u128::MAX } else { (1u128 << out_len) - 1 };
    let weight = T::one() / T::from_count(out_len * p);
    for (i, delay) in range.iter().enumerate() {
        let diff: u32 = got
            .iter()
            .zip(&want)
            .map(|(&g, &w)| (((g >> delay) ^ w) & mask).count_ones())
            .sum();
        dist[i] = dist[i] + T::from_count(diff as usize) * weight;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::tasks::{training_set, Concept, TrainingExample, TrainingParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(s: &str) -> BooleanSequence {
        BooleanSequence::parse(s, None).unwrap()
    }

    #[test]
    fn hamming_values() {
        assert_eq!(normalized_hamming::<f64>(&seq("10"), &seq("11")), Ok(0.5));
        assert_eq!(normalized_hamming::<f64>(&seq("10;01"), &seq("10;01")), Ok(0.0));
        assert_eq!(normalized_hamming::<f32>(&seq("10;01"), &seq("01;10")), Ok(1.0));
        assert!(normalized_hamming::<f64>(&seq("10"), &seq("1")).is_err());
        assert!(normalized_hamming::<f64>(&seq("1"), &seq("1;1")).is_err());
    }

    #[test]
    fn penalty_formula() {
        let cfg = FitnessConfig::<f64>::new(10);
        assert_eq!(cfg.penalize(0.0, 9), 0.0);
        assert_eq!(cfg.penalize(0.5, 13), 1.0);
        assert_eq!(cfg.penalize(0.25, 10), 0.25);
        assert_eq!(cfg.penalize(0.1, 12), 0.1 * 0.5 * 3.0);
        assert_eq!(cfg.penalize(0.0, 1000), 0.0);
    }

    #[test]
    fn reference_identity_is_perfect_at_its_delay() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = reference::identity(1);
        let t = training_set(&Concept::identity(1), &TrainingParams::default(), &mut rng).unwrap();
        let cfg = FitnessConfig::<f64>::new(4);
        assert_eq!(fitness(&a.graph, 2, &t, &cfg), 0.0);
        // At δ = 0 the chain is still filling: x = 1 is wrong at moment 0
        // and x = 0 at moment 1, one bit of three each.
        assert!((fitness(&a.graph, 0, &t, &cfg) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn profile_matches_per_delay_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (name, a, c) in reference::catalog() {
            let t = training_set(&c, &TrainingParams::default(), &mut rng).unwrap();
            let cfg = FitnessConfig::new(a.graph.size() - 1);
            let range = DelayRange { min: 0, max: a.graph.size() };
            let prof = fitness_profile(&a.graph, range, &t, &cfg);
            for (i, d) in range.iter().enumerate() {
                let direct: f64 = fitness(&a.graph, d, &t, &cfg);
                assert!((prof[i] - direct).abs() < 1e-12, "{name} δ={d}");
            }
            assert_eq!(prof[a.delay], 0.0, "{name}");
        }
    }

    #[test]
    fn profile_handles_mixed_lengths() {
        let a = reference::identity(1);
        let ex = |i: &str, o: &str| TrainingExample {
            input: seq(i),
            expected: seq(o),
        };
        let t = TrainingSet::new(vec![ex("1", "1;1;1;1"), ex("0;1", "0"), ex("1;0;1", "1;1")]).unwrap();
        let cfg = FitnessConfig::new(10);
        let range = DelayRange { min: 0, max: 5 };
        let prof = fitness_profile(&a.graph, range, &t, &cfg);
        for (i, d) in range.iter().enumerate() {
            let direct: f64 = fitness(&a.graph, d, &t, &cfg);
            assert!((prof[i] - direct).abs() < 1e-12, "δ={d}");
        }
    }

    #[test]
    fn single_example_route_matches_on_random_graphs() {
        use crate::generate::{random_atype, GenConfig};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = Concept::carry(3);
        let t = training_set(&c, &TrainingParams::default(), &mut rng).unwrap();
        assert_eq!(t.len(), 1);
        let cfg = FitnessConfig::new(9);
        let gen = GenConfig::new(7, 14, 1, 3, 0.3);
        for _ in 0..200 {
            let g = random_atype(&gen, &mut rng).unwrap();
            let range = DelayRange { min: 0, max: g.size() };
            let prof = fitness_profile(&g, range, &t, &cfg);
            for (i, d) in range.iter().enumerate() {
                let direct: f64 = fitness(&g, d, &t, &cfg);
                assert!((prof[i] - direct).abs() < 1e-12, "δ={d}");
            }
        }
    }
}
