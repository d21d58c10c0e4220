//! Evolutionary search over A-type graphs.

pub mod candidate;
pub mod crossover;
pub mod fitness;
pub mod mutation;
pub mod search;
pub mod selection;
pub mod subgraph;

pub use candidate::{evaluate_candidate, CandidateSolution};
pub use crossover::{crossover, crossover_at, crossover_once, CrossoverConfig, CrossoverError};
pub use fitness::{fitness, fitness_profile, normalized_hamming, FitnessConfig, ShapeMismatch};
pub use mutation::{mutate, mutate_with, MutationKind};
pub use search::{search, search_with, Algorithm, SearchConfig, SearchError, SearchResult};
pub use selection::{select_parent, select_parent_pair, select_victim, SelectionConfig};
pub use subgraph::{boundaries, radial_subgraph, Boundaries};
