//! Benchmark task families and their initial-size tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::GenConfig;
use crate::tasks::Concept;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("unknown task `{0}` (expected identity, multiplexer or carry)")]
    UnknownTask(String),
    #[error("no size table for {family} with n = {n}")]
    NoSizeTable { family: TaskFamily, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskFamily {
    Identity,
    Multiplexer,
    Carry,
}

impl TaskFamily {
    pub const ALL: [TaskFamily; 3] = [TaskFamily::Identity, TaskFamily::Multiplexer, TaskFamily::Carry];

    pub fn name(self) -> &'static str {
        match self {
            TaskFamily::Identity => "identity",
            TaskFamily::Multiplexer => "multiplexer",
            TaskFamily::Carry => "carry",
        }
    }

    pub fn concept(self, n: usize) -> Concept {
        match self {
            TaskFamily::Identity => Concept::identity(n),
            TaskFamily::Multiplexer => Concept::multiplexer(n),
            TaskFamily::Carry => Concept::carry(n),
        }
    }

    /// Initial-population size interval.
    ///
    /// identity `[3n, 4n]`; multiplexer `[l(n), l(n) + 4]` with
    /// `l = {2: 7, 3: 13, 4: 18, 5: 24}`; carry `[2n + 1, 2n + 3]`.
    pub fn size_bounds(self, n: usize) -> Result<(usize, usize), TableError> {
        let missing = TableError::NoSizeTable { family: self, n };
        match self {
            _ if n == 0 => Err(missing),
            TaskFamily::Identity => Ok((3 * n, 4 * n)),
            TaskFamily::Multiplexer => {
                let lo = match n {
                    2 => 7,
                    3 => 13,
                    4 => 18,
                    5 => 24,
                    _ => return Err(missing),
                };
                Ok((lo, lo + 4))
            }
            TaskFamily::Carry => Ok((3 + 2 * (n - 1), 3 + 2 * n)),
        }
    }

    /// Attempt cap used by the published runs.
    pub fn default_max_attempts(self) -> u64 {
        match self {
            TaskFamily::Multiplexer => 100_000_000,
            _ => 1_000_000_000,
        }
    }

    pub fn gen_config(self, n: usize, p_delay: f64) -> Result<GenConfig, TableError> {
        let (lo, hi) = self.size_bounds(n)?;
        let c = self.concept(n);
        Ok(GenConfig::new(lo, hi, c.input_dim(), c.output_dim(), p_delay))
    }
}

impl fmt::Display for TaskFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskFamily {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(TaskFamily::Identity),
            "multiplexer" | "mux" => Ok(TaskFamily::Multiplexer),
            "carry" => Ok(TaskFamily::Carry),
            other => Err(TableError::UnknownTask(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(TaskFamily::Identity.size_bounds(3), Ok((9, 12)));
        assert_eq!(TaskFamily::Multiplexer.size_bounds(3), Ok((13, 17)));
        assert_eq!(TaskFamily::Carry.size_bounds(1), Ok((3, 5)));
        assert_eq!(TaskFamily::Carry.size_bounds(4), Ok((9, 11)));
        assert!(TaskFamily::Multiplexer.size_bounds(6).is_err());
        assert!(TaskFamily::Identity.size_bounds(0).is_err());
    }

    #[test]
    fn generator_configs_are_feasible() {
        for family in TaskFamily::ALL {
            for n in 1..=10 {
                if let Ok(cfg) = family.gen_config(n, 0.2) {
                    assert_eq!(cfg.check(), Ok(()), "{family} {n}");
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for family in TaskFamily::ALL {
            assert_eq!(family.name().parse::<TaskFamily>(), Ok(family));
        }
    }
}
