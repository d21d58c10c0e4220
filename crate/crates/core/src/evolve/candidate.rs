//! A graph scored over a whole interval of delays.

use rand::Rng;

use crate::evolve::fitness::{fitness_profile, FitnessConfig};
use crate::graph::{AType, ATypeGraph};
use crate::num::Real;
use crate::sim::{estimate_delay_range, DelayRange};
use crate::tasks::TrainingSet;
use crate::Fitness;

/// One graph standing for the A-types it forms with each delay in
/// `delay_range`.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSolution<T = Fitness> {
    pub graph: ATypeGraph,
    pub delay_range: DelayRange,
    /// Entry `i` is the fitness at delay `delay_range.min + i`.
    pub per_delay_fitness: Vec<T>,
    pub best_fitness: T,
    /// Smallest delay attaining `best_fitness`.
    pub best_delay: usize,
    /// Set once a zero-fitness candidate has failed the exactness check.
    pub exactness_rejected: bool,
}

impl<T: Real> CandidateSolution<T> {
    pub fn from_profile(graph: ATypeGraph, delay_range: DelayRange, per_delay_fitness: Vec<T>) -> Self {
        assert_eq!(per_delay_fitness.len(), delay_range.len(), "one fitness per delay");
        let mut best = 0;
        for (i, &f) in per_delay_fitness.iter().enumerate() {
            if f < per_delay_fitness[best] {
                best = i;
            }
        }
        CandidateSolution {
            graph,
            delay_range,
            best_fitness: per_delay_fitness[best],
            best_delay: delay_range.min + best,
            per_delay_fitness,
            exactness_rejected: false,
        }
    }

    pub fn fitness_at(&self, delay: usize) -> Option<T> {
        if self.delay_range.contains(delay) {
            Some(self.per_delay_fitness[delay - self.delay_range.min])
        } else {
            None
        }
    }

    /// Delays with fitness exactly 0, ascending.
    pub fn perfect_delays(&self) -> impl Iterator<Item = usize> + '_ {
        self.delay_range
            .iter()
            .zip(&self.per_delay_fitness)
            .filter(|(_, f)| f.is_zero())
            .map(|(d, _)| d)
    }

    pub fn atype(&self, delay: usize) -> AType {
        AType::new(self.graph.clone(), delay)
    }

    /// `best_fitness` is 0 and no exactness check has failed yet.
    pub fn awaits_exactness_check(&self) -> bool {
        self.best_fitness.is_zero() && !self.exactness_rejected
    }
}

/// Estimates the delay range, then scores every delay in it.
pub fn evaluate_candidate<T: Real, R: Rng + ?Sized>(
    graph: ATypeGraph,
    training: &TrainingSet,
    cfg: &FitnessConfig<T>,
    rng: &mut R,
) -> CandidateSolution<T> {
    let range = estimate_delay_range(&graph, rng);
    let profile = fitness_profile(&graph, range, training, cfg);
    CandidateSolution::from_profile(graph, range, profile)
}
