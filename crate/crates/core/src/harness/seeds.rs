//! Counter-based seed derivation.
//!
//! Every random stream of an experiment is a pure function of the master
//! seed and the cell coordinates, so adding cells never disturbs others.

/// One round of the splitmix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed of `parent` along `path`.
pub fn derive(parent: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(parent), |acc, &step| mix(acc ^ mix(step)))
}

/// Stable 64-bit key for a name (FNV-1a).
pub fn name_key(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

const TRAINING: u64 = 1;
const SEARCH: u64 = 2;

/// Seed of trial `trial` of a task at size `n`. Independent of the
/// algorithm, so every algorithm sees the same trials.
pub fn trial_seed(master: u64, task: &str, n: usize, trial: usize) -> u64 {
    derive(master, &[name_key(task), n as u64, trial as u64])
}

/// Seed for building a trial's training set.
pub fn training_seed(trial_seed: u64) -> u64 {
    derive(trial_seed, &[TRAINING])
}

/// Seed for a trial's search stream.
pub fn search_seed(trial_seed: u64) -> u64 {
    derive(trial_seed, &[SEARCH])
}
