//! Blind sampling of delay-free networks against columnwise concepts.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::{random_atype, GenConfig};
use crate::graph::ATypeGraph;
use crate::harness::seeds;
use crate::sim::{Network, Simulator};
use crate::tasks::BooleanFunction;

/// Length of the random test input given to every sampled network.
pub const CLAIM_INPUT_LEN: usize = 10_000;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// Columnwise identity on one input, sizes `[3, 20]`.
    OddDelayIdentity,
    /// Columnwise exclusive-or, sizes `[8, 40]`.
    XorWithoutDelays,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown claim `{0}` (expected odd_delay_identity or xor_without_delays)")]
pub struct UnknownClaim(pub String);

impl Claim {
    pub const ALL: [Claim; 2] = [Claim::OddDelayIdentity, Claim::XorWithoutDelays];

    pub fn name(self) -> &'static str {
        match self {
            Claim::OddDelayIdentity => "odd_delay_identity",
            Claim::XorWithoutDelays => "xor_without_delays",
        }
    }

    pub fn function(self) -> BooleanFunction {
        match self {
            Claim::OddDelayIdentity => BooleanFunction::Identity(1),
            Claim::XorWithoutDelays => BooleanFunction::Xor,
        }
    }

    /// Generator with no delay nodes.
    pub fn gen_config(self) -> GenConfig {
        let f = self.function();
        let (lo, hi) = match self {
            Claim::OddDelayIdentity => (3, 20),
            Claim::XorWithoutDelays => (8, 40),
        };
        GenConfig::new(lo, hi, f.input_dim(), f.output_dim(), 0.0)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UnknownClaim(s.to_string()))
    }
}

/// Tallies over the sampled networks. A network counts once in `solutions`
/// if some delay works, and once in each parity class that has a working
/// delay.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub attempts: u64,
    pub solutions: u64,
    pub odd_delay: u64,
    pub even_delay: u64,
}

impl ClaimSummary {
    fn merge(self, o: ClaimSummary) -> ClaimSummary {
        ClaimSummary {
            attempts: self.attempts + o.attempts,
            solutions: self.solutions + o.solutions,
            odd_delay: self.odd_delay + o.odd_delay,
            even_delay: self.even_delay + o.even_delay,
        }
    }

    pub fn solution_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.solutions as f64 / self.attempts as f64
        }
    }
}

/// Every delay in `[0, N]` under which `g` maps a random input of length
/// `len` columnwise through `f`. The input is drawn lazily and the last
/// vector is held once it runs out.
pub fn working_delays<R: Rng + ?Sized>(g: &ATypeGraph, f: BooleanFunction, len: usize, rng: &mut R) -> Vec<usize> {
    let n = g.input_dim();
    let p = g.output_dim();
    assert_eq!((n, p), (f.input_dim(), f.output_dim()), "function shape");
    let net = Network::compile(g);
    let mut alive: Vec<usize> = (0..=g.size()).collect();
    let mut targets: Vec<Vec<bool>> = Vec::with_capacity(len.min(1024));
    let mut word = vec![0u8; n];
    // Draws the next input vector into `word` and records its target.
    let draw = |targets: &mut Vec<Vec<bool>>, word: &mut [u8], rng: &mut R| {
        let x: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        for (w, &b) in word.iter_mut().zip(&x) {
            *w = b as u8;
        }
        targets.push(f.eval(&x).expect("total function"));
    };

    if len == 0 {
        return alive;
    }
    draw(&mut targets, &mut word, rng);
    let mut sim = Simulator::new(&net, &word);
    let horizon = len + g.size();
    let mut y = vec![false; p];
    for m in 0..horizon {
        for (k, b) in y.iter_mut().enumerate() {
            *b = sim.output(k) & 1 == 1;
        }
        alive.retain(|&d| {
            if d > m || m - d >= len {
                return true;
            }
            targets[m - d] == y
        });
        if alive.is_empty() || m + 1 == horizon {
            break;
        }
        if m + 1 < len {
            draw(&mut targets, &mut word, rng);
        }
        sim.advance(&word);
    }
    alive
}

fn chunk_summary(claim: Claim, attempts: u64, seed: u64) -> ClaimSummary {
    let cfg = claim.gen_config();
    let f = claim.function();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ClaimSummary::default();
    for _ in 0..attempts {
        let g = random_atype(&cfg, &mut rng).expect("claim generator is feasible");
        let delays = working_delays(&g, f, CLAIM_INPUT_LEN, &mut rng);
        s.attempts += 1;
        if !delays.is_empty() {
            s.solutions += 1;
        }
        if delays.iter().any(|d| d % 2 == 1) {
            s.odd_delay += 1;
        }
        if delays.iter().any(|d| d % 2 == 0) {
            s.even_delay += 1;
        }
    }
    s
}

/// Samples `attempts` delay-free networks and tallies which represent the
/// claim's concept. Work is split into fixed chunks with derived seeds, so
/// the result depends only on `seed`, not on the thread count.
pub fn claim_search(claim: Claim, attempts: u64, seed: u64) -> ClaimSummary {
    let chunks = attempts.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = CHUNK.min(attempts - c * CHUNK);
            chunk_summary(claim, n, seeds::derive(seed, &[c]))
        })
        .reduce(ClaimSummary::default, ClaimSummary::merge)
}
