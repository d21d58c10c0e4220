//! Student-t confidence intervals over trial records.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::harness::record::TrialRecord;
use crate::{Fitness, Real};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("confidence level {0} outside [0, 1)")]
    BadLevel(f64),
}

/// Mean and half-width of the two-sided `level` confidence interval, using
/// the Student-t quantile with `len - 1` degrees of freedom.
pub fn t_confidence<T: Real>(samples: &[T], level: T) -> Result<(T, T), StatsError> {
    let n = samples.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples(n));
    }
    let lvl = level.to_f64().unwrap_or(f64::NAN);
    if !(0.0..1.0).contains(&lvl) {
        return Err(StatsError::BadLevel(lvl));
    }
    let count = T::from_count(n);
    let mean = samples.iter().fold(T::zero(), |a, &x| a + x) / count;
    let ss = samples.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean));
    let sd = (ss / T::from_count(n - 1)).sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.5 + lvl / 2.0);
    Ok((mean, T::lit(t) * sd / count.sqrt()))
}

/// Attempt statistics of one (task, n, algorithm) group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSummary {
    pub task: String,
    pub n: usize,
    pub algorithm: String,
    pub trials: usize,
    pub solved: usize,
    pub mean_attempts: Fitness,
    /// `None` with fewer than two trials.
    pub half_width: Option<Fitness>,
}

/// Groups records by (task, n, algorithm) in sorted key order.
pub fn summarize(records: &[TrialRecord], level: Fitness) -> Result<Vec<GroupSummary>, StatsError> {
    let mut groups: BTreeMap<(&str, usize, &str), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.task, r.n, &r.algorithm)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((task, n, algorithm), rs)| {
            let samples: Vec<Fitness> = rs.iter().map(|r| r.attempts as Fitness).collect();
            let (mean, half_width) = match t_confidence(&samples, level) {
                Ok((m, h)) => (m, Some(h)),
                Err(StatsError::TooFewSamples(_)) => (samples[0], None),
                Err(e) => return Err(e),
            };
            Ok(GroupSummary {
                task: task.to_string(),
                n,
                algorithm: algorithm.to_string(),
                trials: rs.len(),
                solved: rs.iter().filter(|r| r.solved).count(),
                mean_attempts: mean,
                half_width,
            })
        })
        .collect()
}
