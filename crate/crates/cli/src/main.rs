//! `atype`: validate, simulate and evolve A-type networks.
//!
//! Exit codes: 0 success, 1 file error or invalid network, 2 bad flags,
//! 3 search finished without a solution.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atype::evolve::Algorithm;
use atype::format;
use atype::graph::validate;
use atype::harness::{
    claim_search, read_csv, run_experiment, run_trial, summarize, trial_config, write_csv, AlgoPlan, Claim,
    Experiment, SharedParams, TaskFamily, TrialRecord,
};
use atype::sim;
use atype::BooleanSequence;
use clap::{Parser, Subcommand};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSOLVED: u8 = 3;

#[derive(Parser)]
#[command(name = "atype", version, about = "Validate, simulate and evolve A-type networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file and list every violation.
    Validate { file: PathBuf },
    /// Simulate a network on an input sequence.
    Run {
        file: PathBuf,
        /// Bit-string vectors separated by `;`, earliest first.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Number of output vectors to print.
        #[arg(long)]
        out_len: usize,
        /// Read the input and print the output latest first.
        #[arg(long)]
        paper_order: bool,
    },
    /// Run one search trial and print its record line.
    Search {
        #[arg(long)]
        task: TaskFamily,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        algo: Algorithm,
        /// Trial seed; fixes both the training set and the search.
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_attempts: Option<u64>,
        /// Population size.
        #[arg(long)]
        pop: Option<usize>,
        /// Also write the record as a CSV file with header.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the solution network; defaults to
        /// `<task>-<n>-<algo>-<seed>.atype`.
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Fill the wall_ms column.
        #[arg(long)]
        timing: bool,
    },
    /// Run a batch of trials from a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the wall_ms column.
        #[arg(long)]
        timing: bool,
    },
    /// Sample delay-free networks against a columnwise concept.
    Claims {
        #[arg(long)]
        which: Claim,
        #[arg(long)]
        attempts: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Mean attempts with a Student-t interval per task, n and algorithm.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.90)]
        confidence: f64,
    },
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn file(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: format!("{}: {e}", path.display()),
        }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::file(path, e))
}

fn cmd_validate(file: &Path) -> CmdResult {
    let a = format::parse_unchecked(&read(file)?).map_err(|e| Failure::file(file, e))?;
    let violations = validate(&a.graph);
    if violations.is_empty() {
        println!("valid");
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    Ok(EXIT_FAILURE)
}

fn cmd_run(file: &Path, input: &str, out_len: usize, paper_order: bool) -> CmdResult {
    let a = format::parse(&read(file)?).map_err(|e| Failure::file(file, e))?;
    let mut seq = BooleanSequence::parse(input, Some(a.graph.input_dim())).map_err(Failure::usage)?;
    if paper_order {
        seq = seq.reversed();
    }
    let mut out = sim::run(&a, &seq, out_len).map_err(Failure::usage)?;
    if paper_order {
        out = out.reversed();
    }
    println!("{out}");
    Ok(0)
}

fn write_records(records: &[TrialRecord], path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| Failure::file(p, e))?;
            write_csv(records, io::BufWriter::new(file)).map_err(|e| Failure::file(p, e))
        }
        None => write_csv(records, io::stdout().lock()).map_err(|e| Failure {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    task: TaskFamily,
    n: usize,
    algo: Algorithm,
    seed: u64,
    max_attempts: Option<u64>,
    pop: Option<usize>,
    out: Option<&Path>,
    solution: Option<&Path>,
    timing: bool,
) -> CmdResult {
    let mut plan = AlgoPlan::new(algo);
    plan.max_attempts = max_attempts;
    plan.population_size = pop;
    let cfg = trial_config(task, n, &plan, None, &SharedParams::default(), seed).map_err(Failure::usage)?;
    let (record, found) = run_trial(&cfg, task, n, &plan.label, 0, seed, timing);
    if let Some(d) = &record.diagnostic {
        return Err(Failure::usage(d));
    }
    println!("{}", record.csv_line());
    if let Some(p) = out {
        write_records(std::slice::from_ref(&record), Some(p))?;
    }
    match found {
        Some(a) => {
            let default = PathBuf::from(format!("{task}-{n}-{algo}-{seed}.atype"));
            let p = solution.unwrap_or(&default);
            fs::write(p, format::serialize(&a)).map_err(|e| Failure::file(p, e))?;
            eprintln!("solution written to {}", p.display());
            Ok(0)
        }
        None => Ok(EXIT_UNSOLVED),
    }
}

fn cmd_experiment(config: &Path, out: Option<&Path>, timing: bool) -> CmdResult {
    let mut exp = Experiment::from_config_str(&read(config)?).map_err(|e| Failure::file(config, e))?;
    exp.timing |= timing;
    let records = run_experiment(&exp);
    for r in &records {
        if let Some(d) = &r.diagnostic {
            eprintln!("{} n={} {} trial {}: {d}", r.task, r.n, r.algorithm, r.trial);
        }
    }
    write_records(&records, out)?;
    Ok(0)
}

fn cmd_claims(which: Claim, attempts: u64, seed: u64) -> CmdResult {
    let s = claim_search(which, attempts, seed);
    println!(
        "claim={which} attempts={} solutions={} odd_delay={} even_delay={}",
        s.attempts, s.solutions, s.odd_delay, s.even_delay
    );
    Ok(0)
}

fn cmd_stats(input: &Path, confidence: f64) -> CmdResult {
    let file = fs::File::open(input).map_err(|e| Failure::file(input, e))?;
    let records = read_csv(io::BufReader::new(file)).map_err(|e| Failure::file(input, e))?;
    let groups = summarize(&records, confidence).map_err(Failure::usage)?;
    let mut w = io::stdout().lock();
    let _ = writeln!(w, "task,n,algorithm,trials,solved,mean_attempts,half_width");
    for g in groups {
        let hw = g.half_width.map(|h| format!("{h:.3}")).unwrap_or_default();
        let _ = writeln!(
            w,
            "{},{},{},{},{},{:.3},{hw}",
            g.task, g.n, g.algorithm, g.trials, g.solved, g.mean_attempts
        );
    }
    Ok(0)
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Validate { file } => cmd_validate(&file),
        Command::Run {
            file,
            input,
            out_len,
            paper_order,
        } => cmd_run(&file, &input, out_len, paper_order),
        Command::Search {
            task,
            n,
            algo,
            seed,
            max_attempts,
            pop,
            out,
            solution,
            timing,
        } => cmd_search(
            task,
            n,
            algo,
            seed,
            max_attempts,
            pop,
            out.as_deref(),
            solution.as_deref(),
            timing,
        ),
        Command::Experiment { config, out, timing } => cmd_experiment(&config, out.as_deref(), timing),
        Command::Claims { which, attempts, seed } => cmd_claims(which, attempts, seed),
        Command::Stats { input, confidence } => cmd_stats(&input, confidence),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
