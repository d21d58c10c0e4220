//! Batches of paired search trials.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::evolve::{search, Algorithm, FitnessConfig, SearchConfig, SelectionConfig};
use crate::graph::AType;
use crate::harness::record::TrialRecord;
use crate::harness::seeds;
use crate::harness::tables::{TableError, TaskFamily};
use crate::tasks::{training_set, TaskError, TrainingParams, TrainingSet};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ATYPE_THREADS";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error(transparent)]
    Task(#[from] TableError),
    #[error("algorithm section `{0}`: no `algorithm` key and the name is not an algorithm")]
    UnnamedAlgorithm(String),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no tasks configured")]
    NoTasks,
    #[error("no algorithms configured")]
    NoAlgorithms,
}

/// Parameters shared by every cell.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SharedParams {
    pub population_size: usize,
    pub p_delay: f64,
    pub pressure_gradient: f64,
    pub selection_kappa: f64,
    pub subgraph_cap: f64,
}

impl Default for SharedParams {
    fn default() -> Self {
        SharedParams {
            population_size: 100,
            p_delay: 0.2,
            pressure_gradient: 0.5,
            selection_kappa: 8.0,
            subgraph_cap: 0.8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskPlan {
    pub family: TaskFamily,
    pub ns: Vec<usize>,
    /// Overrides the family's default cap.
    pub max_attempts: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgoPlan {
    /// Name written to the `algorithm` column.
    pub label: String,
    pub algorithm: Algorithm,
    pub crossovers_per_gen: usize,
    pub mutations_per_gen: usize,
    pub population_size: Option<usize>,
    /// Overrides the task's cap.
    pub max_attempts: Option<u64>,
}

impl AlgoPlan {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgoPlan {
            label: algorithm.name().to_string(),
            algorithm,
            crossovers_per_gen: 1,
            mutations_per_gen: 1,
            population_size: None,
            max_attempts: None,
        }
    }
}

/// A full experiment: every task size, algorithm and trial.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub tasks: Vec<TaskPlan>,
    pub algorithms: Vec<AlgoPlan>,
    pub trials: usize,
    pub master_seed: u64,
    pub shared: SharedParams,
    pub threads: Option<usize>,
    /// Record wall-clock times (makes output non-reproducible).
    pub timing: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    experiment: ExperimentSection,
    #[serde(default)]
    task: BTreeMap<String, TaskSection>,
    #[serde(default)]
    algo: BTreeMap<String, AlgoSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    trials: usize,
    #[serde(default)]
    master_seed: u64,
    threads: Option<usize>,
    #[serde(default)]
    timing: bool,
    #[serde(flatten)]
    shared: SharedParams,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskSection {
    ns: Vec<usize>,
    max_attempts: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgoSection {
    algorithm: Option<Algorithm>,
    crossovers_per_gen: Option<usize>,
    mutations_per_gen: Option<usize>,
    population_size: Option<usize>,
    max_attempts: Option<u64>,
}

/// One (task, n, algorithm, trial) unit of work.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell<'e> {
    pub task: &'e TaskPlan,
    pub n: usize,
    pub algo: &'e AlgoPlan,
    pub trial: usize,
}

impl Experiment {
    /// Parses the `key = value` config with `[experiment]`,
    /// `[task.<name>]` and `[algo.<label>]` sections.
    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        let file: ExperimentFile = toml::from_str(text)?;
        let tasks = file
            .task
            .into_iter()
            .map(|(name, t)| {
                Ok(TaskPlan {
                    family: name.parse()?,
                    ns: t.ns,
                    max_attempts: t.max_attempts,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let algorithms = file
            .algo
            .into_iter()
            .map(|(label, a)| {
                let algorithm = match a.algorithm {
                    Some(alg) => alg,
                    None => label.parse().map_err(|_| ConfigError::UnnamedAlgorithm(label.clone()))?,
                };
                Ok(AlgoPlan {
                    label,
                    algorithm,
                    crossovers_per_gen: a.crossovers_per_gen.unwrap_or(1),
                    mutations_per_gen: a.mutations_per_gen.unwrap_or(1),
                    population_size: a.population_size,
                    max_attempts: a.max_attempts,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let exp = Experiment {
            tasks,
            algorithms,
            trials: file.experiment.trials,
            master_seed: file.experiment.master_seed,
            shared: file.experiment.shared,
            threads: file.experiment.threads,
            timing: file.experiment.timing,
        };
        exp.check()?;
        Ok(exp)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.tasks.iter().all(|t| t.ns.is_empty()) {
            return Err(ConfigError::NoTasks);
        }
        if self.algorithms.is_empty() {
            return Err(ConfigError::NoAlgorithms);
        }
        Ok(())
    }

    /// Cells in output order: task, n, algorithm, trial.
    pub fn cells(&self) -> Vec<Cell<'_>> {
        let mut cells = Vec::new();
        for task in &self.tasks {
            for &n in &task.ns {
                for algo in &self.algorithms {
                    for trial in 0..self.trials {
                        cells.push(Cell { task, n, algo, trial });
                    }
                }
            }
        }
        cells
    }

    /// Search parameters for a cell.
    pub fn search_config(&self, cell: &Cell<'_>) -> Result<SearchConfig, TableError> {
        let trial_seed = seeds::trial_seed(self.master_seed, cell.task.family.name(), cell.n, cell.trial);
        trial_config(cell.task.family, cell.n, cell.algo, cell.task.max_attempts, &self.shared, trial_seed)
    }
}

/// Search parameters for one trial. The attempt cap is taken from the
/// algorithm, then `task_max_attempts`, then the family default.
pub fn trial_config(
    family: TaskFamily,
    n: usize,
    algo: &AlgoPlan,
    task_max_attempts: Option<u64>,
    shared: &SharedParams,
    trial_seed: u64,
) -> Result<SearchConfig, TableError> {
    let gen = family.gen_config(n, shared.p_delay)?;
    let max_attempts = algo
        .max_attempts
        .or(task_max_attempts)
        .unwrap_or_else(|| family.default_max_attempts());
    let mut cfg = SearchConfig::new(
        algo.algorithm,
        family.concept(n),
        gen,
        max_attempts,
        seeds::search_seed(trial_seed),
    );
    cfg.population_size = algo.population_size.unwrap_or(shared.population_size);
    cfg.crossovers_per_gen = algo.crossovers_per_gen;
    cfg.mutations_per_gen = algo.mutations_per_gen;
    cfg.fitness = FitnessConfig {
        penalty_bound: cfg.gen.size_hi,
        pressure_gradient: shared.pressure_gradient,
    };
    cfg.selection = SelectionConfig {
        kappa: shared.selection_kappa,
    };
    cfg.subgraph_cap = shared.subgraph_cap;
    Ok(cfg)
}

/// Training set of a trial; identical for every algorithm.
pub fn trial_training_set(family: TaskFamily, n: usize, trial_seed: u64) -> Result<TrainingSet, TaskError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::training_seed(trial_seed));
    training_set(&family.concept(n), &TrainingParams::default(), &mut rng)
}

fn blank_record(family: TaskFamily, n: usize, label: &str, trial: usize, trial_seed: u64) -> TrialRecord {
    TrialRecord {
        task: family.name().to_string(),
        n,
        algorithm: label.to_string(),
        trial,
        seed: trial_seed,
        attempts: 0,
        solved: false,
        solution_size: None,
        solution_delay: None,
        wall_ms: None,
        diagnostic: None,
    }
}

/// Runs one trial given its trial seed; returns the record and the
/// solution, if one was found.
pub fn run_trial(
    cfg: &SearchConfig,
    family: TaskFamily,
    n: usize,
    label: &str,
    trial: usize,
    trial_seed: u64,
    timing: bool,
) -> (TrialRecord, Option<AType>) {
    let mut record = blank_record(family, n, label, trial, trial_seed);
    let training = match trial_training_set(family, n, trial_seed) {
        Ok(t) => t,
        Err(e) => {
            record.diagnostic = Some(e.to_string());
            return (record, None);
        }
    };
    match search(cfg, &training) {
        Ok(result) => {
            record.attempts = result.attempts;
            record.solved = result.solved;
            if let Some(a) = &result.solution {
                record.solution_size = Some(a.graph.size());
                record.solution_delay = Some(a.delay);
            }
            if timing {
                record.wall_ms = Some(result.wall.as_millis() as u64);
            }
            (record, result.solution)
        }
        Err(e) => {
            record.diagnostic = Some(e.to_string());
            (record, None)
        }
    }
}

fn run_cell(exp: &Experiment, cell: &Cell<'_>) -> TrialRecord {
    let family = cell.task.family;
    let trial_seed = seeds::trial_seed(exp.master_seed, family.name(), cell.n, cell.trial);
    match exp.search_config(cell) {
        Ok(cfg) => run_trial(&cfg, family, cell.n, &cell.algo.label, cell.trial, trial_seed, exp.timing).0,
        Err(e) => {
            let mut r = blank_record(family, cell.n, &cell.algo.label, cell.trial, trial_seed);
            r.diagnostic = Some(e.to_string());
            r
        }
    }
}

/// Worker count: the experiment's setting, capped by `ATYPE_THREADS`.
pub fn worker_count(requested: Option<usize>) -> usize {
    let env = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&v| v > 0);
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let wanted = requested.filter(|&v| v > 0).unwrap_or(default);
    match env {
        Some(cap) => wanted.min(cap),
        None => wanted,
    }
}

/// Runs every cell and returns records in cell order. `on_record` sees
/// each record as soon as its trial finishes, in completion order.
pub fn run_experiment_with<F>(exp: &Experiment, on_record: F) -> Vec<TrialRecord>
where
    F: Fn(&TrialRecord) + Sync,
{
    let cells = exp.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(exp.threads))
        .build()
        .expect("thread pool");
    pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let r = run_cell(exp, cell);
                on_record(&r);
                r
            })
            .collect()
    })
}

pub fn run_experiment(exp: &Experiment) -> Vec<TrialRecord> {
    run_experiment_with(exp, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"
[experiment]
trials = 2
master_seed = 5
population_size = 20

[task.identity]
ns = [1, 2]
max_attempts = 5000

[algo.blind]

[algo.ratio_zero]
algorithm = "genetic"
crossovers_per_gen = 0
"#;

    #[test]
    fn parses_config() {
        let exp = Experiment::from_config_str(CONFIG).unwrap();
        assert_eq!(exp.trials, 2);
        assert_eq!(exp.shared.population_size, 20);
        assert_eq!(exp.shared.p_delay, 0.2);
        assert_eq!(exp.tasks[0].family, TaskFamily::Identity);
        assert_eq!(exp.algorithms[0].algorithm, Algorithm::Blind);
        assert_eq!(exp.algorithms[1].label, "ratio_zero");
        assert_eq!(exp.algorithms[1].crossovers_per_gen, 0);
        assert_eq!(exp.cells().len(), 8);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Experiment::from_config_str("[experiment]\ntrials = 1\nbogus = 3\n").is_err());
        let text = CONFIG.replace("ns = [1, 2]", "ns = [1]\nfoo = 1");
        assert!(Experiment::from_config_str(&text).is_err());
        let text = CONFIG.replace("[task.identity]", "[task.parity]");
        assert!(matches!(Experiment::from_config_str(&text), Err(ConfigError::Task(_))));
        let text = CONFIG.replace("[algo.blind]", "[algo.fast]");
        assert!(matches!(
            Experiment::from_config_str(&text),
            Err(ConfigError::UnnamedAlgorithm(_))
        ));
        assert!(matches!(
            Experiment::from_config_str(&CONFIG.replace("trials = 2", "trials = 0")),
            Err(ConfigError::NoTrials)
        ));
    }

    #[test]
    fn runs_in_cell_order() {
        let exp = Experiment::from_config_str(CONFIG).unwrap();
        let records = run_experiment(&exp);
        let keys: Vec<(usize, &str, usize)> = records.iter().map(|r| (r.n, r.algorithm.as_str(), r.trial)).collect();
        assert_eq!(
            keys,
            vec![
                (1, "blind", 0),
                (1, "blind", 1),
                (1, "ratio_zero", 0),
                (1, "ratio_zero", 1),
                (2, "blind", 0),
                (2, "blind", 1),
                (2, "ratio_zero", 0),
                (2, "ratio_zero", 1),
            ]
        );
        // Paired trials share seeds across algorithms.
        assert_eq!(records[0].seed, records[2].seed);
        assert!(records.iter().all(|r| r.diagnostic.is_none()));
    }

    #[test]
    fn infeasible_cell_becomes_diagnostic_record() {
        let text = CONFIG.replace("[task.identity]\nns = [1, 2]", "[task.multiplexer]\nns = [9]");
        let exp = Experiment::from_config_str(&text).unwrap();
        let records = run_experiment(&exp);
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| !r.solved && r.diagnostic.is_some()));
    }

    #[test]
    fn thread_cap() {
        assert_eq!(worker_count(Some(3)).min(3), worker_count(Some(3)));
        assert!(worker_count(None) >= 1);
    }
}
