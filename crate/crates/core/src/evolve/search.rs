//! Blind search and the steady-state evolutionary searches.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolve::candidate::{evaluate_candidate, CandidateSolution};
use crate::evolve::crossover::{crossover, CrossoverConfig};
use crate::evolve::fitness::FitnessConfig;
use crate::evolve::mutation::mutate;
use crate::evolve::selection::{select_parent_pair, select_victim, SelectionConfig};
use crate::generate::{random_atype, GenConfig, GenError};
use crate::graph::{AType, ATypeGraph};
use crate::tasks::{verify_exact_with, Concept, ExactnessParams, TrainingSet};
use crate::Fitness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Independent random graphs, no population.
    Blind,
    /// The evolutionary loop without crossover.
    MutationOnly,
    /// The evolutionary loop with crossover and mutation.
    Genetic,
    /// As `Genetic`, but one parent of each crossover is swapped for a
    /// random graph of the same size.
    HeadlessChicken,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Blind,
        Algorithm::MutationOnly,
        Algorithm::Genetic,
        Algorithm::HeadlessChicken,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Blind => "blind",
            Algorithm::MutationOnly => "mutation_only",
            Algorithm::Genetic => "genetic",
            Algorithm::HeadlessChicken => "headless_chicken",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}` (expected blind, mutation_only, genetic or headless_chicken)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blind" => Ok(Algorithm::Blind),
            "mutation_only" | "mutation" => Ok(Algorithm::MutationOnly),
            "genetic" => Ok(Algorithm::Genetic),
            "headless_chicken" | "headless" => Ok(Algorithm::HeadlessChicken),
            other => Err(UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error("population of {0} is too small for this algorithm")]
    PopulationTooSmall(usize),
    #[error("no crossovers or mutations per generation")]
    NoOperators,
    #[error("subgraph cap {0} outside (0, 1]")]
    BadSubgraphCap(f64),
    #[error("fitness parameters need a penalty bound >= 1 and a positive gradient")]
    BadFitness,
    #[error("selection exponent must be positive and finite")]
    BadSelection,
    #[error("training set or generator dimensions do not match the concept")]
    DimensionMismatch,
    #[error("attempt budget must be at least 1")]
    ZeroBudget,
}

/// Everything a search needs besides its training set.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub crossovers_per_gen: usize,
    pub mutations_per_gen: usize,
    pub max_attempts: u64,
    pub gen: GenConfig,
    pub fitness: FitnessConfig,
    pub selection: SelectionConfig,
    /// Largest crossover subgraph as a fraction of a parent's internal
    /// nodes.
    pub subgraph_cap: f64,
    pub crossover_retries: usize,
    pub concept: Concept,
    pub exactness: ExactnessParams,
    pub seed: u64,
}

impl SearchConfig {
    /// Defaults: population 100, one crossover and one mutation per
    /// generation, penalty bound at the generator's upper size, gradient
    /// 0.5, κ = 8, subgraph cap 0.8.
    pub fn new(algorithm: Algorithm, concept: Concept, gen: GenConfig, max_attempts: u64, seed: u64) -> Self {
        SearchConfig {
            algorithm,
            population_size: 100,
            crossovers_per_gen: 1,
            mutations_per_gen: 1,
            max_attempts,
            fitness: FitnessConfig::new(gen.size_hi),
            gen,
            selection: SelectionConfig::default(),
            subgraph_cap: 0.8,
            crossover_retries: 8,
            concept,
            exactness: ExactnessParams::default(),
            seed,
        }
    }

    /// Crossovers actually performed per generation.
    pub fn effective_crossovers(&self) -> usize {
        match self.algorithm {
            Algorithm::Blind | Algorithm::MutationOnly => 0,
            _ => self.crossovers_per_gen,
        }
    }

    pub fn check(&self) -> Result<(), SearchError> {
        self.gen.check()?;
        if self.max_attempts == 0 {
            return Err(SearchError::ZeroBudget);
        }
        if self.gen.inputs != self.concept.input_dim() || self.gen.outputs != self.concept.output_dim() {
            return Err(SearchError::DimensionMismatch);
        }
        if !self.fitness.is_valid() {
            return Err(SearchError::BadFitness);
        }
        if !self.selection.is_valid() {
            return Err(SearchError::BadSelection);
        }
        if !(self.subgraph_cap > 0.0 && self.subgraph_cap <= 1.0) {
            return Err(SearchError::BadSubgraphCap(self.subgraph_cap));
        }
        if self.algorithm != Algorithm::Blind {
            let min_pop = if self.effective_crossovers() > 0 { 2 } else { 1 };
            if self.population_size < min_pop {
                return Err(SearchError::PopulationTooSmall(self.population_size));
            }
            if self.effective_crossovers() + self.mutations_per_gen == 0 {
                return Err(SearchError::NoOperators);
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub solved: bool,
    /// Graphs constructed and evaluated, initial population included.
    pub attempts: u64,
    /// The verified solution, when solved.
    pub solution: Option<AType>,
    /// Fittest A-type found (the solution when solved).
    pub best: AType,
    pub best_fitness: Fitness,
    pub wall: Duration,
}

/// Runs a search seeded from `cfg.seed`.
pub fn search(cfg: &SearchConfig, training: &TrainingSet) -> Result<SearchResult, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    search_with(cfg, training, &mut rng)
}

/// Runs a search drawing all randomness from `rng`.
pub fn search_with<R: Rng + ?Sized>(
    cfg: &SearchConfig,
    training: &TrainingSet,
    rng: &mut R,
) -> Result<SearchResult, SearchError> {
    cfg.check()?;
    if training.input_dim() != cfg.concept.input_dim() || training.output_dim() != cfg.concept.output_dim() {
        return Err(SearchError::DimensionMismatch);
    }
    let mut run = Run {
        cfg,
        training,
        attempts: 0,
        start: Instant::now(),
        crossover: CrossoverConfig {
            subgraph_cap: cfg.subgraph_cap,
            max_retries: cfg.crossover_retries,
            p_delay: cfg.gen.p_delay,
        },
    };
    Ok(match cfg.algorithm {
        Algorithm::Blind => run.blind(rng),
        _ => run.evolve(rng),
    })
}

struct Run<'a> {
    cfg: &'a SearchConfig,
    training: &'a TrainingSet,
    attempts: u64,
    start: Instant,
    crossover: CrossoverConfig,
}

/// Result of constructing one graph.
enum Outcome {
    Solved(AType),
    Candidate(CandidateSolution),
}

impl Run<'_> {
    fn exhausted(&self) -> bool {
        self.attempts >= self.cfg.max_attempts
    }

    /// Counts and scores a new graph; a zero-fitness candidate is checked
    /// for exactness at each perfect delay, smallest first.
    fn consider<R: Rng + ?Sized>(&mut self, g: ATypeGraph, rng: &mut R) -> Outcome {
        self.attempts += 1;
        let mut c = evaluate_candidate(g, self.training, &self.cfg.fitness, rng);
        if c.awaits_exactness_check() {
            let delays: Vec<usize> = c.perfect_delays().collect();
            for d in delays {
                let a = c.atype(d);
                if verify_exact_with(&a, &self.cfg.concept, &self.cfg.exactness, rng) {
                    return Outcome::Solved(a);
                }
            }
            c.exactness_rejected = true;
        }
        Outcome::Candidate(c)
    }

    fn solved(&self, a: AType) -> SearchResult {
        SearchResult {
            solved: true,
            attempts: self.attempts,
            solution: Some(a.clone()),
            best: a,
            best_fitness: 0.0,
            wall: self.start.elapsed(),
        }
    }

    fn unsolved(&self, best: &CandidateSolution) -> SearchResult {
        SearchResult {
            solved: false,
            attempts: self.attempts,
            solution: None,
            best: best.atype(best.best_delay),
            best_fitness: best.best_fitness,
            wall: self.start.elapsed(),
        }
    }

    fn blind<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SearchResult {
        let mut best: Option<CandidateSolution> = None;
        let mut ties = 0u64;
        loop {
            let g = random_atype(&self.cfg.gen, rng).expect("checked config");
            let c = match self.consider(g, rng) {
                Outcome::Solved(a) => return self.solved(a),
                Outcome::Candidate(c) => c,
            };
            // Uniform choice among equally fit candidates, one pass.
            match &best {
                Some(b) if c.best_fitness > b.best_fitness => {}
                Some(b) if c.best_fitness == b.best_fitness => {
                    ties += 1;
                    if rng.random_range(0..ties) == 0 {
                        best = Some(c);
                    }
                }
                _ => {
                    ties = 1;
                    best = Some(c);
                }
            }
            if self.exhausted() {
                return self.unsolved(best.as_ref().expect("at least one attempt"));
            }
        }
    }

    fn evolve<R: Rng + ?Sized>(&mut self, rng: &mut R) -> SearchResult {
        let cfg = self.cfg;
        let mut pop: Vec<CandidateSolution> = Vec::with_capacity(cfg.population_size + 1);
        let mut fit: Vec<Fitness> = Vec::with_capacity(cfg.population_size + 1);

        for _ in 0..cfg.population_size {
            if self.exhausted() {
                return self.unsolved(fittest(&pop, rng));
            }
            let g = random_atype(&cfg.gen, rng).expect("checked config");
            match self.consider(g, rng) {
                Outcome::Solved(a) => return self.solved(a),
                Outcome::Candidate(c) => {
                    fit.push(c.best_fitness);
                    pop.push(c);
                }
            }
        }

        loop {
            for _ in 0..cfg.effective_crossovers() {
                if self.exhausted() {
                    return self.unsolved(fittest(&pop, rng));
                }
                let (i, j) = select_parent_pair(&fit, &cfg.selection, rng);
                let (mut mother, mut father) = (&pop[i].graph, &pop[j].graph);
                let stranger;
                if cfg.algorithm == Algorithm::HeadlessChicken {
                    let replace_mother = rng.random_bool(0.5);
                    let size = if replace_mother { mother.size() } else { father.size() };
                    stranger = random_atype(&cfg.gen.with_size(size), rng).expect("valid parents are large enough");
                    if replace_mother {
                        mother = &stranger;
                    } else {
                        father = &stranger;
                    }
                }
                let child = crossover(mother, father, &self.crossover, rng);
                if let Some(a) = self.admit(child, &mut pop, &mut fit, rng) {
                    return self.solved(a);
                }
            }
            for _ in 0..cfg.mutations_per_gen {
                if self.exhausted() {
                    return self.unsolved(fittest(&pop, rng));
                }
                let i = rng.random_range(0..pop.len());
                let child = mutate(&pop[i].graph, cfg.gen.p_delay, rng);
                if let Some(a) = self.admit(child, &mut pop, &mut fit, rng) {
                    return self.solved(a);
                }
            }
        }
    }

    /// Scores a new member, adds it, then removes a victim.
    fn admit<R: Rng + ?Sized>(
        &mut self,
        g: ATypeGraph,
        pop: &mut Vec<CandidateSolution>,
        fit: &mut Vec<Fitness>,
        rng: &mut R,
    ) -> Option<AType> {
        match self.consider(g, rng) {
            Outcome::Solved(a) => Some(a),
            Outcome::Candidate(c) => {
                fit.push(c.best_fitness);
                pop.push(c);
                let victim = select_victim(fit, &self.cfg.selection, rng);
                pop.swap_remove(victim);
                fit.swap_remove(victim);
                None
            }
        }
    }
}

/// Lowest fitness, ties broken uniformly.
fn fittest<'p, R: Rng + ?Sized>(pop: &'p [CandidateSolution], rng: &mut R) -> &'p CandidateSolution {
    let best = pop
        .iter()
        .map(|c| c.best_fitness)
        .fold(Fitness::INFINITY, Fitness::min);
    let ties: Vec<&CandidateSolution> = pop.iter().filter(|c| c.best_fitness == best).collect();
    ties.choose(rng).expect("non-empty population")
}
